#include "divext/chars.hpp"

#include <json.hpp>
#include <numeric>

namespace divext::chars {

RootOfUnity RootOfUnity::make(int64_t u, int64_t n) {
    require(n != 0, "root of unity with zero denominator");
    if (n < 0) {
        n = -n;
        u = -u;
    }
    u %= n;
    if (u < 0) u += n;
    int64_t g = gcd_i64(u, n);
    if (u == 0) return {0, 1};
    return {u / g, n / g};
}

RootOfUnity RootOfUnity::parse(const std::string& s) {
    auto slash = s.find('/');
    require(slash != std::string::npos, "root of unity must be 'u/n'");
    int64_t u = std::stoll(s.substr(0, slash));
    int64_t n = std::stoll(s.substr(slash + 1));
    return make(u, n);
}

Character make_character(const gf::FieldPtr& k, int a, RootOfUnity alpha, uint64_t M) {
    Character c;
    c.k = k;
    c.a = a;
    c.alpha = alpha;
    c.M = M % k->order;
    auto v = validate(c);
    require(v.ok, "invalid character: " + v.reason);
    return c;
}

Character character_from_surface(const gf::FieldPtr& k, int a, RootOfUnity alpha, uint64_t m) {
    require(a >= 1 && k->d % a == 0, "level must divide d");
    uint64_t div = k->order / (ipow_u64(k->q, static_cast<uint64_t>(a)) - 1);
    return make_character(k, a, alpha, mulmod_u64(m % k->order, div, k->order));
}

Character trivial_character(const gf::FieldPtr& k, int a) {
    return make_character(k, a, RootOfUnity::trivial(), 0);
}

Validity validate(const Character& c) {
    if (c.k == nullptr) return {false, "no field"};
    if (c.a < 1 || c.k->d % c.a != 0) return {false, "level does not divide d"};
    if (gcd_i64(c.alpha.den, c.k->p) != 1) return {false, "alpha denominator not prime to p"};
    if (c.M % c.divisor() != 0)
        return {false, "(q^d-1)/(q^a-1) does not divide M (character not well defined)"};
    return {true, ""};
}

Character restrict_char(const Character& c, int a2) {
    require(a2 % c.a == 0 && c.k->d % a2 == 0, "restriction requires a | a' | d");
    Character out = c;
    out.a = a2;
    out.alpha = c.alpha.power(a2 / c.a);
    return out;
}

Character conjugate(const Character& c, int64_t i) {
    const auto& k = *c.k;
    int64_t d = k.d;
    int64_t ii = ((i % d) + d) % d;
    uint64_t e = k.q_pow(static_cast<uint64_t>(k.r) * static_cast<uint64_t>(d - 1) * static_cast<uint64_t>(ii));
    Character out = c;
    out.M = mulmod_u64(c.M, e, k.order);
    return out;
}

Character tensor(const Character& c1, const Character& c2) {
    require(c1.a == c2.a, "tensor requires equal levels");
    require(c1.k == c2.k, "tensor requires the same field");
    Character out = c1;
    out.alpha = c1.alpha * c2.alpha;
    out.M = (c1.M + c2.M) % c1.k->order;
    return out;
}

Character dual(const Character& c) {
    Character out = c;
    out.alpha = c.alpha.inverse();
    out.M = (c.k->order - c.M % c.k->order) % c.k->order;
    return out;
}

RootOfUnity evaluate(const Character& c, int64_t n, gf::FqElem x) {
    require(!x.is_zero(), "character evaluated at 0");
    RootOfUnity from_alpha = c.alpha.power(n);
    uint64_t e = mulmod_u64(c.M, gf::dlog(x), c.k->order);
    return from_alpha * RootOfUnity::make(static_cast<int64_t>(e), static_cast<int64_t>(c.k->order));
}

Character eta_character(const gf::FieldPtr& k, int64_t i, bool dualized) {
    int64_t nn = k->n;
    int64_t ii = ((i % nn) + nn) % nn;
    uint64_t pi = powmod_u64(static_cast<uint64_t>(k->p), static_cast<uint64_t>(ii), k->order);
    uint64_t qr1 = (k->q_pow(static_cast<uint64_t>(k->r)) + k->order - 1) % k->order;  // q^r - 1
    uint64_t M = mulmod_u64(pi, qr1, k->order);
    if (dualized) M = (k->order - M) % k->order;
    Character c = make_character(k, k->d, RootOfUnity::trivial(), M);
    check(exponent_order(k, c.M) == k->d, "eta character must have order exactly d");
    return c;
}

std::vector<int> double_cosets(int a, int a2) {
    int g = static_cast<int>(gcd_u64(static_cast<uint64_t>(a), static_cast<uint64_t>(a2)));
    std::vector<int> out(static_cast<size_t>(g));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

int exponent_order(const gf::FieldPtr& k, uint64_t M) {
    M %= k->order;
    for (int a = 1; a <= k->d; ++a) {
        if (k->d % a != 0) continue;
        uint64_t e = k->q_pow(static_cast<uint64_t>(k->r) * static_cast<uint64_t>(a));
        if (mulmod_u64(M, e, k->order) == M) return a;
    }
    check(false, "exponent order not found");
    return 0;
}

std::vector<uint64_t> order_a_exponent_orbits(const gf::FieldPtr& k, int a) {
    require(a >= 1 && k->d % a == 0, "level must divide d");
    uint64_t div = k->order / (ipow_u64(k->q, static_cast<uint64_t>(a)) - 1);
    std::vector<uint64_t> out;
    for (uint64_t M = 0; M < k->order; M += div) {
        if (exponent_order(k, M) != a) continue;
        uint64_t best = M, cur = M;
        for (int j = 1; j < k->d; ++j) {
            cur = mulmod_u64(cur, k->q_pow(static_cast<uint64_t>(k->r)), k->order);
            best = std::min(best, cur);
        }
        if (best == M) out.push_back(M);
    }
    return out;
}

Irrep make_irrep(const Character& chi, const Character& kappa) {
    require(chi.k == kappa.k, "irrep components over different fields");
    require(chi.a == kappa.a, "irrep components at different levels");
    require(chi.alpha.is_trivial(), "chi must assign 1 to varpi^a");
    require(kappa.M == 0, "kappa must have trivial exponent part");
    require(exponent_order(chi.k, chi.M) == chi.a, "chi must have order exactly a");
    return {chi, kappa};
}

Irrep trivial_irrep(const gf::FieldPtr& k) {
    return make_irrep(trivial_character(k, 1), trivial_character(k, 1));
}

Irrep irrep_from_character(const Character& c) {
    auto v = validate(c);
    require(v.ok, "invalid character: " + v.reason);
    Character chi = c;
    chi.alpha = RootOfUnity::trivial();
    Character kappa = c;
    kappa.M = 0;
    return make_irrep(chi, kappa);
}

Irrep canonical(const Irrep& pi) {
    const auto& k = *pi.chi.k;
    uint64_t best = pi.chi.M;
    uint64_t cur = pi.chi.M;
    for (int j = 1; j < k.d; ++j) {
        cur = mulmod_u64(cur, k.q_pow(static_cast<uint64_t>(k.r)), k.order);
        best = std::min(best, cur);
    }
    Irrep out = pi;
    out.chi.M = best;
    return out;
}

bool irrep_iso(const Irrep& pi, const Irrep& pi2) {
    if (pi.level() != pi2.level()) return false;
    if (pi.kappa != pi2.kappa) return false;
    return canonical(pi).chi == canonical(pi2).chi;
}

Irrep twist(const Irrep& pi, const Character& rho) {
    require(rho.a == 1, "twisting character must have level 1");
    Character merged = tensor(merged_character(pi), restrict_char(rho, pi.level()));
    return irrep_from_character(merged);
}

Character merged_character(const Irrep& pi) { return tensor(pi.chi, pi.kappa); }

std::vector<ReducedEntry> reduce_pair(const Irrep& pi, const Irrep& pi2) {
    require(pi.chi.k == pi2.chi.k, "irreps over different fields");
    int a = pi.level(), a2 = pi2.level();
    int L = a / static_cast<int>(gcd_u64(static_cast<uint64_t>(a), static_cast<uint64_t>(a2))) * a2;
    Character from = restrict_char(merged_character(pi), L);
    Character to = restrict_char(merged_character(pi2), L);
    std::vector<ReducedEntry> out;
    for (int i : double_cosets(a, a2)) {
        ReducedEntry e;
        e.coset = i;
        e.level = L;
        e.c = tensor(to, dual(conjugate(from, i)));
        out.push_back(e);
    }
    return out;
}

std::string character_to_json(const Character& c) {
    nlohmann::json j;
    j["a"] = c.a;
    j["alpha"] = c.alpha.str();
    j["m"] = c.surface_m();
    j["M"] = c.M;
    return j.dump();
}

Character character_from_json(const gf::FieldPtr& k, const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int a = j.value("a", 1);
    RootOfUnity alpha = RootOfUnity::trivial();
    if (j.contains("alpha")) alpha = RootOfUnity::parse(j["alpha"].get<std::string>());
    if (j.contains("M")) return make_character(k, a, alpha, j["M"].get<uint64_t>());
    require(j.contains("m"), "character JSON needs m or M");
    return character_from_surface(k, a, alpha, j["m"].get<uint64_t>());
}

std::string irrep_to_json(const Irrep& pi) {
    nlohmann::json j;
    j["a"] = pi.level();
    j["chi"] = nlohmann::json::parse(character_to_json(pi.chi));
    j["kappa"] = nlohmann::json::parse(character_to_json(pi.kappa));
    j["canonical"] = (canonical(pi).chi == pi.chi);
    return j.dump();
}

Irrep irrep_from_json(const gf::FieldPtr& k, const std::string& text) {
    auto j = nlohmann::json::parse(text);
    if (j.contains("chi")) {
        Character chi = character_from_json(k, j["chi"].dump());
        Character kappa = character_from_json(k, j["kappa"].dump());
        return make_irrep(chi, kappa);
    }
    // shorthand: a single character descriptor
    return irrep_from_character(character_from_json(k, text));
}

}  // namespace divext::chars
