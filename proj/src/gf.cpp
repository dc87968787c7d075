#include "divext/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "divext/linalg.hpp"

namespace divext::gf {

namespace {

// Dense F_p[x] helpers for the modulus search, coefficients little-endian.
using Poly = std::vector<uint8_t>;

int deg(const Poly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[static_cast<size_t>(i)]) return i;
    return -1;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
    int n = deg(m);
    Poly prod(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = static_cast<uint8_t>((prod[i + j] + a[i] * b[j]) % p);
    }
    // m is monic
    for (int i = static_cast<int>(prod.size()) - 1; i >= n; --i) {
        uint8_t c = prod[static_cast<size_t>(i)];
        if (!c) continue;
        for (int j = 0; j <= n; ++j) {
            int idx = i - n + j;
            int v = prod[static_cast<size_t>(idx)] - c * m[static_cast<size_t>(j)] % p;
            prod[static_cast<size_t>(idx)] = static_cast<uint8_t>(((v % p) + p) % p);
        }
    }
    prod.resize(static_cast<size_t>(n));
    return prod;
}

Poly poly_mod(Poly a, const Poly& b, int p) {
    int db = deg(b);
    check(db >= 0, "poly_mod by zero");
    int lead = b[static_cast<size_t>(db)];
    int li = 1;
    for (int t = 1; t < p; ++t)
        if (t * lead % p == 1) { li = t; break; }
    while (deg(a) >= db) {
        int da = deg(a);
        int c = a[static_cast<size_t>(da)] * li % p;
        for (int j = 0; j <= db; ++j) {
            int idx = da - db + j;
            int v = a[static_cast<size_t>(idx)] - c * b[static_cast<size_t>(j)] % p;
            a[static_cast<size_t>(idx)] = static_cast<uint8_t>(((v % p) + p) % p);
        }
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b, int p) {
    while (deg(b) >= 0) {
        Poly r = poly_mod(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> fs;
    for (uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            fs.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; static_cast<int64_t>(q) * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// p-th power map iterated via square-and-multiply on polynomials mod m.
Poly poly_pth_power(const Poly& a, const Poly& m, int p) {
    Poly result(static_cast<size_t>(deg(m)), 0);
    result[0] = 1;
    Poly base = a;
    uint64_t e = static_cast<uint64_t>(p);
    while (e) {
        if (e & 1) result = poly_mulmod(result, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

bool poly_irreducible(const Poly& m, int p) {
    int n = deg(m);
    if (n == 1) return true;
    Poly x(static_cast<size_t>(n), 0);
    x[1] = 1;
    Poly t = x;
    for (int i = 0; i < n; ++i) t = poly_pth_power(t, m, p);
    if (t != x) return false;
    for (uint64_t ell : prime_factors(static_cast<uint64_t>(n))) {
        Poly s = x;
        uint64_t steps = static_cast<uint64_t>(n) / ell;
        for (uint64_t i = 0; i < steps; ++i) s = poly_pth_power(s, m, p);
        Poly diff(static_cast<size_t>(n), 0);
        for (int i = 0; i < n; ++i)
            diff[static_cast<size_t>(i)] =
                static_cast<uint8_t>(((s[static_cast<size_t>(i)] - x[static_cast<size_t>(i)]) % p + p) % p);
        if (deg(poly_gcd(m, diff, p)) != 0) return false;
    }
    return true;
}

// Table-free multiplication, used only while building the tables.
uint32_t slow_mul(const FieldSpec& F, uint32_t a, uint32_t b) {
    Poly prod = poly_mulmod(F.digits(a), F.digits(b), F.modulus, F.p);
    return F.from_digits(prod);
}

uint32_t slow_pow(const FieldSpec& F, uint32_t a, uint64_t e) {
    uint32_t r = 1;
    while (e) {
        if (e & 1) r = slow_mul(F, r, a);
        a = slow_mul(F, a, a);
        e >>= 1;
    }
    return r;
}

std::mutex g_cache_mutex;
std::map<std::tuple<int, int, int, int>, FieldPtr> g_field_cache;

}  // namespace

FieldPtr make_field(int p, int f, int d, int r, uint64_t cap) {
    require(is_prime(p), "p must be prime");
    require(f >= 1 && d >= 1 && r >= 1, "f, d, r must be positive");
    require(gcd_u64(static_cast<uint64_t>(p), static_cast<uint64_t>(d)) == 1, "gcd(p, d) must be 1");
    require(gcd_u64(static_cast<uint64_t>(r), static_cast<uint64_t>(d)) == 1, "gcd(r, d) must be 1");

    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_field_cache.find({p, f, d, r});
        if (it != g_field_cache.end()) return it->second;
    }

    auto F = std::make_shared<FieldSpec>();
    F->p = p;
    F->f = f;
    F->d = d;
    F->r = r;
    F->n = f * d;
    uint64_t size = 1;
    for (int i = 0; i < F->n; ++i) {
        size *= static_cast<uint64_t>(p);
        require(size <= cap, "field size p^{df} exceeds the dlog table cap");
    }
    F->size = size;
    F->order = size - 1;
    F->q = ipow_u64(static_cast<uint64_t>(p), static_cast<uint64_t>(f));

    // Least irreducible monic modulus: x^n + (base-p digits of k), k = 0, 1, ...
    int n = F->n;
    bool found = false;
    for (uint64_t k = 0; k < size; ++k) {
        Poly m(static_cast<size_t>(n) + 1, 0);
        uint64_t kk = k;
        for (int i = 0; i < n; ++i) {
            m[static_cast<size_t>(i)] = static_cast<uint8_t>(kk % static_cast<uint64_t>(p));
            kk /= static_cast<uint64_t>(p);
        }
        m[static_cast<size_t>(n)] = 1;
        if (poly_irreducible(m, p)) {
            F->modulus = m;
            found = true;
            break;
        }
    }
    check(found, "no irreducible modulus found");

    // Least primitive element.
    auto factors = prime_factors(F->order);
    uint32_t gen = 1;
    if (F->order > 1) {
        gen = 0;
        for (uint32_t cand = 2; cand < F->size; ++cand) {
            bool primitive = true;
            for (uint64_t ell : factors) {
                if (slow_pow(*F, cand, F->order / ell) == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                gen = cand;
                break;
            }
        }
        check(gen != 0, "no generator found");
    }
    F->generator = gen;

    F->exp_.resize(F->order);
    F->log_.assign(F->size, 0);
    uint32_t cur = 1;
    for (uint64_t k = 0; k < F->order; ++k) {
        F->exp_[k] = cur;
        F->log_[cur] = static_cast<uint32_t>(k);
        cur = slow_mul(*F, cur, gen);
    }
    check(cur == 1, "generator order mismatch");

    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto [it, inserted] = g_field_cache.try_emplace(std::make_tuple(p, f, d, r), F);
    return it->second;
}

FqElem generator(const FieldPtr& F) { return {F.get(), F->generator}; }

FqElem elem(const FieldPtr& F, uint32_t enc) {
    require(enc < F->size, "encoding out of range");
    return {F.get(), enc};
}

FqElem sigma(FqElem x, int64_t j) { return {x.F, x.F->sigma(x.v, j)}; }

std::pair<FqElem, FqElem> norm_trace(FqElem x, int a) {
    const FieldSpec& F = *x.F;
    require(a >= 1 && F.d % a == 0, "a must divide d");
    uint64_t qa = ipow_u64(F.q, static_cast<uint64_t>(a));
    uint64_t e = F.order / (qa - 1);  // norm exponent (q^d-1)/(q^a-1)
    uint32_t nm = 0;
    if (x.v != 0) {
        uint64_t k = mulmod_u64(F.log_[x.v], e % F.order, F.order);
        nm = (e % F.order == 0) ? 1 : F.exp_[k];
    }
    uint32_t tr = 0;
    uint32_t cur = x.v;
    uint64_t qa_mod = qa % F.order;
    for (int i = 0; i < F.d / a; ++i) {
        tr = F.add(tr, cur);
        if (cur != 0) cur = F.exp_[mulmod_u64(F.log_[cur], qa_mod, F.order)];
    }
    return {FqElem{x.F, nm}, FqElem{x.F, tr}};
}

FqElem hilbert90(FqElem c, H90Mode mode) {
    const FieldSpec& F = *c.F;
    if (mode == H90Mode::Mult) {
        require(c.v != 0, "hilbert90 mult: c must be nonzero");
        require(norm_trace(c, 1).first.v == 1, "hilbert90 mult: Nm_{k_D/k_F}(c) != 1");
        for (uint32_t x = 1; x < F.size; ++x)
            if (F.div(x, F.sigma(x, 1)) == c.v) return {c.F, x};
        check(false, "hilbert90 mult: no solution found");
    } else {
        require(norm_trace(c, 1).second.v == 0, "hilbert90 add: Tr_{k_D/k_F}(c) != 0");
        for (uint32_t x = 0; x < F.size; ++x)
            if (F.sub(F.sigma(x, 1), x) == c.v) return {c.F, x};
        check(false, "hilbert90 add: no solution found");
    }
    return {};
}

FqElem phi_map(int64_t i, FqElem y, FqElem x) {
    const FieldSpec& F = *x.F;
    return {x.F, F.sub(F.mul(F.sigma(x.v, 1), y.v), F.mul(x.v, F.sigma(y.v, i)))};
}

std::vector<FqElem> phi_image_basis(int64_t i, FqElem y) {
    const FieldSpec& F = *y.F;
    if (y.v == 0) return {};
    linalg::FpSpan span(F.p, F.n);
    auto kF = subfield_elements(F, 1);
    std::vector<FqElem> basis;
    for (int k = 0; k < F.n; ++k) {
        uint32_t b = 1;
        for (int t = 0; t < k; ++t) b *= static_cast<uint32_t>(F.p);  // encoding of x^k
        uint32_t w = phi_map(i, y, FqElem{y.F, b}).v;
        if (span.contains(F.digits(w))) continue;
        basis.push_back(FqElem{y.F, w});
        for (const auto& c : kF) {
            if (c.v == 0) continue;
            span.insert(F.digits(F.mul(c.v, w)));
        }
    }
    return basis;
}

uint64_t dlog(FqElem x) {
    require(x.v != 0, "dlog of zero");
    return x.F->log_[x.v];
}

std::vector<FqElem> subfield_elements(const FieldSpec& F, int a) {
    require(a >= 1 && F.d % a == 0, "a must divide d");
    std::vector<FqElem> out;
    out.push_back({&F, 0});
    uint64_t qa = ipow_u64(F.q, static_cast<uint64_t>(a));
    uint64_t step = F.order / (qa - 1);
    for (uint64_t k = 0; k < qa - 1; ++k) out.push_back({&F, F.exp_[k * step]});
    std::sort(out.begin(), out.end(), [](FqElem x, FqElem y) { return x.v < y.v; });
    return out;
}

}  // namespace divext::gf
