#ifndef DIVEXT_CHARS_HPP
#define DIVEXT_CHARS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "divext/gf.hpp"

namespace divext::chars {

// Root of unity in F_p-bar^x, recorded as its exponent u/n in Q/Z with n
// coprime to p.  Exact equality, powers and a-th roots need no embeddings.
struct RootOfUnity {
    int64_t num = 0;
    int64_t den = 1;

    static RootOfUnity trivial() { return {0, 1}; }
    static RootOfUnity make(int64_t u, int64_t n);

    bool is_trivial() const { return num == 0; }
    RootOfUnity power(int64_t k) const { return make(num * k, den); }
    RootOfUnity inverse() const { return make(-num, den); }
    // canonical a-th root u/(a n)
    RootOfUnity root(int64_t a) const { return make(num, den * a); }

    friend RootOfUnity operator*(RootOfUnity x, RootOfUnity y) {
        return make(x.num * y.den + y.num * x.den, x.den * y.den);
    }
    friend bool operator==(RootOfUnity x, RootOfUnity y) { return x.num == y.num && x.den == y.den; }
    friend bool operator!=(RootOfUnity x, RootOfUnity y) { return !(x == y); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    static RootOfUnity parse(const std::string& s);
};

// Smooth character chi_{a,alpha,m} of D_a^x, stored with the effective
// exponent M on k_D^x (x -> x^M) instead of the surface exponent m on the
// norm to F_{q^a}; restriction then leaves M untouched.
struct Character {
    gf::FieldPtr k;
    int a = 1;           // level, a | d
    RootOfUnity alpha;   // value at varpi^a
    uint64_t M = 0;      // exponent mod q^d - 1

    uint64_t qd1() const { return k->order; }
    // (q^d - 1)/(q^a - 1), the well-definedness divisor
    uint64_t divisor() const { return k->order / (ipow_u64(k->q, static_cast<uint64_t>(a)) - 1); }
    uint64_t surface_m() const { return (M / divisor()) % (ipow_u64(k->q, static_cast<uint64_t>(a)) - 1); }
    bool is_trivial() const { return M % qd1() == 0 && alpha.is_trivial(); }

    friend bool operator==(const Character& x, const Character& y) {
        return x.a == y.a && x.alpha == y.alpha && x.M == y.M;
    }
    friend bool operator!=(const Character& x, const Character& y) { return !(x == y); }
};

Character make_character(const gf::FieldPtr& k, int a, RootOfUnity alpha, uint64_t M);
Character character_from_surface(const gf::FieldPtr& k, int a, RootOfUnity alpha, uint64_t m);
Character trivial_character(const gf::FieldPtr& k, int a);

struct Validity {
    bool ok = false;
    std::string reason;
};
Validity validate(const Character& c);

// Res^{D_a}_{D_{a'}}: M unchanged, alpha -> alpha^{a'/a}.
Character restrict_char(const Character& c, int a2);
// chi^{varpi^i}: M -> M q^{r(d-1)i}.
Character conjugate(const Character& c, int64_t i);
Character tensor(const Character& c1, const Character& c2);
Character dual(const Character& c);

// Value at (varpi^{an}, x), x != 0, as an exponent in Q/Z.
RootOfUnity evaluate(const Character& c, int64_t n, gf::FqElem x);

// chi_{eta_i}: the order-d character x -> (sigma(x)/x)^{p^i} of k_D^x extended
// trivially to D_d^x; dualized gives x -> (x/sigma(x))^{p^i}.
Character eta_character(const gf::FieldPtr& k, int64_t i, bool dualized);

// Coset exponents for D_{a'}^x \ D^x / D_a^x: 0 .. gcd(a, a') - 1.
std::vector<int> double_cosets(int a, int a2);

// Minimal a' | d with M q^{r a'} = M mod q^d - 1.
int exponent_order(const gf::FieldPtr& k, uint64_t M);

// Valid level-a exponents of order exactly a, one canonical representative
// (the orbit minimum under M -> M q^r) per conjugation orbit.
std::vector<uint64_t> order_a_exponent_orbits(const gf::FieldPtr& k, int a);

// Irreducible V_{chi,kappa} = Ind_{D_a^x}^{D^x}(chi (x) kappa): chi is an
// order-a exponent character with trivial alpha, kappa has exponent 0.
struct Irrep {
    Character chi;
    Character kappa;
    int level() const { return chi.a; }
    friend bool operator==(const Irrep& x, const Irrep& y) { return x.chi == y.chi && x.kappa == y.kappa; }
};

Irrep make_irrep(const Character& chi, const Character& kappa);
Irrep trivial_irrep(const gf::FieldPtr& k);
// Split a level-a character into the (chi, kappa) pair it determines.
Irrep irrep_from_character(const Character& c);
Irrep canonical(const Irrep& pi);
bool irrep_iso(const Irrep& pi, const Irrep& pi2);
// V (x) rho for a character rho of D^x (level 1).
Irrep twist(const Irrep& pi, const Character& rho);
Character merged_character(const Irrep& pi);

struct ReducedEntry {
    int coset = 0;              // exponent i, s = varpi^i
    int level = 1;              // lcm(a, a')
    Character c;                // (Res chi') (x) (chi^s)^*
};

// Mackey reduction of Ext^n(pi, pi') to character conditions at level lcm(a, a').
std::vector<ReducedEntry> reduce_pair(const Irrep& pi, const Irrep& pi2);

std::string character_to_json(const Character& c);
Character character_from_json(const gf::FieldPtr& k, const std::string& text);
std::string irrep_to_json(const Irrep& pi);
Irrep irrep_from_json(const gf::FieldPtr& k, const std::string& text);

}  // namespace divext::chars

#endif
