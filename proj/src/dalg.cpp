#include "divext/dalg.hpp"

#include <algorithm>
#include <json.hpp>
#include <map>
#include <mutex>
#include <tuple>

namespace divext::dalg {

namespace {

uint64_t addm(uint64_t a, uint64_t b, uint64_t m) {
    uint64_t s = a + b;
    if (s >= m) s -= m;
    return s;
}
uint64_t subm(uint64_t a, uint64_t b, uint64_t m) { return a >= b ? a - b : a + m - b; }

std::mutex g_algebra_cache_mutex;
std::map<std::tuple<const gf::FieldSpec*, int, int>, AlgebraPtr>& algebra_cache() {
    static std::map<std::tuple<const gf::FieldSpec*, int, int>, AlgebraPtr> cache;
    return cache;
}

}  // namespace

// --- ground-ring operations -------------------------------------------------

Ground AlgebraSpec::g_zero() const {
    Ground g;
    g.a.assign(mode == Mode::EqualChar ? static_cast<size_t>(M) : static_cast<size_t>(n), 0);
    return g;
}

Ground AlgebraSpec::g_one() const { return g_from_int(1); }

Ground AlgebraSpec::g_from_int(uint64_t c) const {
    Ground g = g_zero();
    if (mode == Mode::EqualChar) {
        g.a[0] = c % static_cast<uint64_t>(k->p);  // prime field constant digit
    } else {
        g.a[0] = c % pM;
    }
    return g;
}

bool AlgebraSpec::g_is_zero(const Ground& g) const {
    return std::all_of(g.a.begin(), g.a.end(), [](uint64_t v) { return v == 0; });
}

Ground AlgebraSpec::g_add(const Ground& x, const Ground& y) const {
    Ground g = x;
    if (mode == Mode::EqualChar) {
        for (size_t i = 0; i < g.a.size(); ++i)
            g.a[i] = k->add(static_cast<uint32_t>(g.a[i]), static_cast<uint32_t>(y.a[i]));
    } else {
        for (size_t i = 0; i < g.a.size(); ++i) g.a[i] = addm(g.a[i], y.a[i], pM);
    }
    return g;
}

Ground AlgebraSpec::g_sub(const Ground& x, const Ground& y) const {
    Ground g = x;
    if (mode == Mode::EqualChar) {
        for (size_t i = 0; i < g.a.size(); ++i)
            g.a[i] = k->sub(static_cast<uint32_t>(g.a[i]), static_cast<uint32_t>(y.a[i]));
    } else {
        for (size_t i = 0; i < g.a.size(); ++i) g.a[i] = subm(g.a[i], y.a[i], pM);
    }
    return g;
}

Ground AlgebraSpec::g_neg(const Ground& x) const { return g_sub(g_zero(), x); }

Ground AlgebraSpec::g_mul(const Ground& x, const Ground& y) const {
    Ground g = g_zero();
    if (mode == Mode::EqualChar) {
        for (int i = 0; i < M; ++i) {
            if (!x.a[static_cast<size_t>(i)]) continue;
            for (int j = 0; i + j < M; ++j) {
                uint32_t prod = k->mul(static_cast<uint32_t>(x.a[static_cast<size_t>(i)]),
                                       static_cast<uint32_t>(y.a[static_cast<size_t>(j)]));
                g.a[static_cast<size_t>(i + j)] =
                    k->add(static_cast<uint32_t>(g.a[static_cast<size_t>(i + j)]), prod);
            }
        }
    } else {
        std::vector<uint64_t> prod(2 * static_cast<size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            if (!x.a[static_cast<size_t>(i)]) continue;
            for (int j = 0; j < n; ++j)
                prod[static_cast<size_t>(i + j)] =
                    addm(prod[static_cast<size_t>(i + j)], mulmod_u64(x.a[static_cast<size_t>(i)], y.a[static_cast<size_t>(j)], pM), pM);
        }
        // reduce by the (monic) lifted modulus
        const auto& m = k->modulus;
        for (int i = 2 * n - 2; i >= n; --i) {
            uint64_t c = prod[static_cast<size_t>(i)];
            if (!c) continue;
            prod[static_cast<size_t>(i)] = 0;
            for (int j = 0; j < n; ++j) {
                uint64_t sub_val = mulmod_u64(c, m[static_cast<size_t>(j)], pM);
                prod[static_cast<size_t>(i - n + j)] = subm(prod[static_cast<size_t>(i - n + j)], sub_val, pM);
            }
        }
        std::copy(prod.begin(), prod.begin() + n, g.a.begin());
    }
    return g;
}

namespace {

Ground g_pow(const AlgebraSpec& A, Ground x, uint64_t e) {
    Ground r = A.g_one();
    while (e) {
        if (e & 1) r = A.g_mul(r, x);
        x = A.g_mul(x, x);
        e >>= 1;
    }
    return r;
}

// Residue of a ground element as a field encoding.
uint32_t g_residue(const AlgebraSpec& A, const Ground& x) {
    if (A.mode == Mode::EqualChar) return static_cast<uint32_t>(x.a[0]);
    std::vector<uint8_t> digits(static_cast<size_t>(A.n));
    for (int i = 0; i < A.n; ++i)
        digits[static_cast<size_t>(i)] = static_cast<uint8_t>(x.a[static_cast<size_t>(i)] % static_cast<uint64_t>(A.k->p));
    return A.k->from_digits(digits);
}

// Lift a field encoding to the ground ring with coefficients in [0, p).
Ground g_lift_residue(const AlgebraSpec& A, uint32_t enc) {
    Ground g = A.g_zero();
    if (A.mode == Mode::EqualChar) {
        g.a[0] = enc;
    } else {
        auto digits = A.k->digits(enc);
        for (int i = 0; i < A.n; ++i) g.a[static_cast<size_t>(i)] = digits[static_cast<size_t>(i)];
    }
    return g;
}

}  // namespace

Ground AlgebraSpec::g_inv(const Ground& x) const {
    uint32_t res = g_residue(*this, x);
    require(res != 0, "ground element is not a unit");
    if (mode == Mode::EqualChar) {
        Ground b = g_zero();
        uint32_t inv0 = k->inv(static_cast<uint32_t>(x.a[0]));
        b.a[0] = inv0;
        for (int l = 1; l < M; ++l) {
            uint32_t acc = 0;
            for (int i = 1; i <= l; ++i)
                acc = k->add(acc, k->mul(static_cast<uint32_t>(x.a[static_cast<size_t>(i)]),
                                         static_cast<uint32_t>(b.a[static_cast<size_t>(l - i)])));
            b.a[static_cast<size_t>(l)] = k->neg(k->mul(inv0, acc));
        }
        return b;
    }
    // Newton from the residue-field inverse: z <- z (2 - x z).
    Ground z = g_lift_residue(*this, k->inv(res));
    Ground two = g_from_int(2);
    for (uint64_t reach = 1; reach < static_cast<uint64_t>(M); reach *= 2)
        z = g_mul(z, g_sub(two, g_mul(x, z)));
    check(g_mul(x, z) == g_one(), "ground inverse failed");
    return z;
}

Ground AlgebraSpec::g_mul_pi(const Ground& x) const {
    Ground g = g_zero();
    if (mode == Mode::EqualChar) {
        for (int l = M - 1; l >= 1; --l) g.a[static_cast<size_t>(l)] = x.a[static_cast<size_t>(l - 1)];
    } else {
        for (int i = 0; i < n; ++i)
            g.a[static_cast<size_t>(i)] = mulmod_u64(x.a[static_cast<size_t>(i)], static_cast<uint64_t>(k->p), pM);
    }
    return g;
}

Ground AlgebraSpec::g_frob(const Ground& x, int j) const {
    int jj = ((j % d) + d) % d;
    if (jj == 0) return x;
    Ground g = g_zero();
    if (mode == Mode::EqualChar) {
        for (int l = 0; l < M; ++l)
            g.a[static_cast<size_t>(l)] = k->sigma(static_cast<uint32_t>(x.a[static_cast<size_t>(l)]), jj);
    } else {
        const auto& mat = frob_mat[static_cast<size_t>(jj)];
        for (int row = 0; row < n; ++row) {
            uint64_t acc = 0;
            for (int col = 0; col < n; ++col)
                acc = addm(acc, mulmod_u64(mat[static_cast<size_t>(row)][static_cast<size_t>(col)], x.a[static_cast<size_t>(col)], pM), pM);
            g.a[static_cast<size_t>(row)] = acc;
        }
    }
    return g;
}

Ground AlgebraSpec::g_reduce(Ground x, int prec) const {
    if (prec >= M) return x;
    if (prec < 0) prec = 0;
    if (mode == Mode::EqualChar) {
        for (int l = prec; l < M; ++l) x.a[static_cast<size_t>(l)] = 0;
    } else {
        uint64_t mod = 1;
        for (int i = 0; i < prec; ++i) mod *= static_cast<uint64_t>(k->p);
        for (auto& c : x.a) c %= mod;
    }
    return x;
}

uint32_t AlgebraSpec::g_digit(const Ground& x, int l) const {
    require(l >= 0 && l < M, "pi-digit index out of range");
    if (mode == Mode::EqualChar) return static_cast<uint32_t>(x.a[static_cast<size_t>(l)]);
    uint64_t div = 1;
    for (int i = 0; i < l; ++i) div *= static_cast<uint64_t>(k->p);
    std::vector<uint8_t> digits(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        digits[static_cast<size_t>(i)] = static_cast<uint8_t>(x.a[static_cast<size_t>(i)] / div % static_cast<uint64_t>(k->p));
    return k->from_digits(digits);
}

int AlgebraSpec::g_val(const Ground& x) const {
    for (int l = 0; l < M; ++l)
        if (g_digit(x, l) != 0) return l;
    return M;
}

bool AlgebraSpec::g_in_F(const Ground& x) const {
    if (mode == Mode::EqualChar) {
        return std::all_of(x.a.begin(), x.a.end(),
                           [&](uint64_t v) { return k->in_kF(static_cast<uint32_t>(v)); });
    }
    return g_frob(x, 1) == x;
}

Ground AlgebraSpec::g_teich(uint32_t enc) const {
    if (mode == Mode::EqualChar) return g_lift_residue(*this, enc);
    if (!teich_cache.empty()) return teich_cache[enc];
    Ground z = g_lift_residue(*this, enc);
    uint64_t pn = 1;
    for (int i = 0; i < n; ++i) pn *= static_cast<uint64_t>(k->p);
    for (int it = 0; it < M + 1; ++it) z = g_pow(*this, z, pn);
    return z;
}

Ground AlgebraSpec::g_dth_root_1piOF(const Ground& w) const {
    require(g_digit(w, 0) == 1, "d-th root input must lie in 1 + pi O_F");
    check(g_in_F(w), "d-th root input must lie in F");
    Ground u = g_one();
    Ground dinv = g_inv(g_from_int(static_cast<uint64_t>(d)));
    for (int it = 0; it < M + 2; ++it) {
        Ground ud1 = g_pow(*this, u, static_cast<uint64_t>(d - 1));
        Ground err = g_sub(g_mul(ud1, u), w);
        if (g_is_zero(err)) break;
        // u <- u - (u^d - w) / (d u^{d-1})
        u = g_sub(u, g_mul(err, g_mul(dinv, g_inv(ud1))));
    }
    check(g_pow(*this, u, static_cast<uint64_t>(d)) == w, "d-th root iteration did not converge");
    return u;
}

bool AlgebraSpec::g_is_pth_power_1piOF(const Ground& w, int prec) const {
    require(g_digit(w, 0) == 1, "p-th power test input must lie in 1 + pi O_F");
    prec = std::min(prec, M);
    if (mode == Mode::EqualChar) {
        // (1 + x)^p = 1 + x^p: digits at t^l with p not dividing l must vanish.
        for (int l = 1; l < prec; ++l)
            if (l % k->p != 0 && g_digit(w, l) != 0) return false;
        return true;
    }
    // (1 + p O_F)^p = 1 + p^2 O_F when p > de + 1; only digits below `prec`
    // are coset-invariant, so the test reads the p^1 digit alone.
    if (prec < 2) return true;
    return g_digit(g_sub(w, g_one()), 1) == 0;
}

// --- algebra construction ----------------------------------------------------

namespace {

// Evaluate a polynomial with small integer coefficients at a ground element.
Ground eval_int_poly(const AlgebraSpec& A, const std::vector<uint8_t>& coeffs, const Ground& y) {
    Ground r = A.g_zero();
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
        r = A.g_mul(r, y);
        r = A.g_add(r, A.g_from_int(coeffs[static_cast<size_t>(i)]));
    }
    return r;
}

}  // namespace

AlgebraPtr make_algebra(const gf::FieldPtr& field, Mode mode, int wprec) {
    require(field != nullptr, "null field");
    require(field->d >= 2, "algebra degree d must be at least 2");
    require(wprec >= 1, "precision must be positive");
    {
        std::lock_guard<std::mutex> lock(g_algebra_cache_mutex);
        auto it = algebra_cache().find({field.get(), static_cast<int>(mode), wprec});
        if (it != algebra_cache().end()) return it->second;
    }
    auto A = std::make_shared<AlgebraSpec>();
    A->k = field;
    A->mode = mode;
    A->N = wprec;
    A->d = field->d;
    A->n = field->n;
    A->M = (wprec + field->d - 1) / field->d;

    if (mode == Mode::MixedCharUnramified) {
        require(field->p > field->d + 1, "mixed characteristic requires p > de + 1 (e = 1)");
        uint64_t pm = 1;
        for (int i = 0; i < A->M; ++i) {
            require(pm <= (uint64_t(1) << 61) / static_cast<uint64_t>(field->p),
                    "p^M exceeds the exact-arithmetic budget");
            pm *= static_cast<uint64_t>(field->p);
        }
        A->pM = pm;

        // Frobenius lift: Newton-refine the root of the modulus that reduces to
        // sigma(xbar) = xbar^{q^r}.
        int n = A->n;
        std::vector<uint8_t> mod_poly = field->modulus;  // degree n, monic
        std::vector<uint8_t> dmod(static_cast<size_t>(n), 0);
        for (int i = 1; i <= n; ++i)
            dmod[static_cast<size_t>(i - 1)] =
                static_cast<uint8_t>(static_cast<uint64_t>(i) * mod_poly[static_cast<size_t>(i)] % static_cast<uint64_t>(field->p));

        uint32_t enc_x = static_cast<uint32_t>(field->p);  // encoding of the polynomial x
        Ground y = g_lift_residue(*A, field->sigma(enc_x, 1));
        for (int it = 0; it < A->M + 3; ++it) {
            Ground fy = eval_int_poly(*A, mod_poly, y);
            if (A->g_is_zero(fy)) break;
            Ground dfy = eval_int_poly(*A, dmod, y);
            y = A->g_sub(y, A->g_mul(fy, A->g_inv(dfy)));
        }
        check(A->g_is_zero(eval_int_poly(*A, mod_poly, y)), "Frobenius lift did not converge");

        // phi^j matrices: column k is the coefficient vector of (phi^j xbar)^k.
        A->frob_mat.assign(static_cast<size_t>(A->d), {});
        Ground yj = g_lift_residue(*A, enc_x);
        for (int j = 0; j < A->d; ++j) {
            if (j > 0) {
                // phi(yj) = sum coeffs(yj)_k * y^k
                Ground next = A->g_zero();
                Ground ypow = A->g_one();
                Ground prev = yj;
                for (int kk = 0; kk < n; ++kk) {
                    Ground term = ypow;
                    for (auto& c : term.a) c = mulmod_u64(c, prev.a[static_cast<size_t>(kk)], A->pM);
                    next = A->g_add(next, term);
                    ypow = A->g_mul(ypow, y);
                }
                yj = next;
            }
            auto& mat = A->frob_mat[static_cast<size_t>(j)];
            mat.assign(static_cast<size_t>(n), std::vector<uint64_t>(static_cast<size_t>(n), 0));
            Ground col = A->g_one();
            for (int kk = 0; kk < n; ++kk) {
                for (int row = 0; row < n; ++row) mat[static_cast<size_t>(row)][static_cast<size_t>(kk)] = col.a[static_cast<size_t>(row)];
                col = A->g_mul(col, yj);
            }
        }
        // phi^d must be the identity on the ground ring.
        Ground xg = g_lift_residue(*A, enc_x);
        Ground xd = A->g_frob(A->g_frob(xg, A->d - 1), 1);
        check(xd == xg, "phi^d != id");

        if (field->size <= (uint64_t(1) << 16)) {
            auto mutable_cache = std::vector<Ground>();
            mutable_cache.reserve(field->size);
            for (uint32_t c = 0; c < field->size; ++c) {
                Ground z = g_lift_residue(*A, c);
                uint64_t pn = 1;
                for (int i = 0; i < n; ++i) pn *= static_cast<uint64_t>(field->p);
                for (int it = 0; it < A->M + 1; ++it) z = g_pow(*A, z, pn);
                mutable_cache.push_back(std::move(z));
            }
            A->teich_cache = std::move(mutable_cache);
        }
    }
    std::lock_guard<std::mutex> lock(g_algebra_cache_mutex);
    auto [it, inserted] = algebra_cache().try_emplace({field.get(), static_cast<int>(mode), wprec}, A);
    return it->second;
}

// --- element helpers ----------------------------------------------------------

namespace {

void canon(DAlgElem& x) {
    const AlgebraSpec& A = *x.A;
    for (int j = 0; j < A.d; ++j)
        x.coord[static_cast<size_t>(j)] = A.g_reduce(x.coord[static_cast<size_t>(j)], A.coord_prec(j));
}

void require_same_spec(const DAlgElem& x, const DAlgElem& y) {
    require(x.A == y.A, "operands from different algebra specs (precision mismatch)");
}

}  // namespace

DAlgElem zero(const AlgebraSpec* A) {
    DAlgElem x;
    x.A = A;
    x.coord.assign(static_cast<size_t>(A->d), A->g_zero());
    return x;
}

DAlgElem one(const AlgebraSpec* A) {
    DAlgElem x = zero(A);
    x.coord[0] = A->g_one();
    return x;
}

DAlgElem uniformizer(const AlgebraSpec* A) {
    DAlgElem x = zero(A);
    x.coord[1] = A->g_one();
    canon(x);
    return x;
}

DAlgElem pi_elem(const AlgebraSpec* A) {
    DAlgElem x = zero(A);
    x.coord[0] = A->g_mul_pi(A->g_one());
    canon(x);
    return x;
}

DAlgElem central(const AlgebraSpec* A, const Ground& g) {
    DAlgElem x = zero(A);
    x.coord[0] = g;
    canon(x);
    return x;
}

DAlgElem teichmuller(const AlgebraSpec* A, gf::FqElem c) {
    DAlgElem x = zero(A);
    x.coord[0] = A->g_teich(c.v);
    canon(x);
    return x;
}

DAlgElem from_digit(const AlgebraSpec* A, gf::FqElem c, int i) {
    require(i >= 0 && i < A->N, "digit position out of range");
    DAlgElem x = zero(A);
    Ground g = A->g_teich(c.v);
    for (int t = 0; t < i / A->d; ++t) g = A->g_mul_pi(g);
    x.coord[static_cast<size_t>(i % A->d)] = g;
    canon(x);
    return x;
}

DAlgElem add(const DAlgElem& x, const DAlgElem& y) {
    require_same_spec(x, y);
    DAlgElem z = x;
    for (int j = 0; j < x.A->d; ++j)
        z.coord[static_cast<size_t>(j)] = x.A->g_add(z.coord[static_cast<size_t>(j)], y.coord[static_cast<size_t>(j)]);
    canon(z);
    return z;
}

DAlgElem sub(const DAlgElem& x, const DAlgElem& y) {
    require_same_spec(x, y);
    DAlgElem z = x;
    for (int j = 0; j < x.A->d; ++j)
        z.coord[static_cast<size_t>(j)] = x.A->g_sub(z.coord[static_cast<size_t>(j)], y.coord[static_cast<size_t>(j)]);
    canon(z);
    return z;
}

DAlgElem neg(const DAlgElem& x) {
    DAlgElem z = x;
    for (auto& c : z.coord) c = x.A->g_neg(c);
    canon(z);
    return z;
}

DAlgElem mul(const DAlgElem& x, const DAlgElem& y) {
    require_same_spec(x, y);
    const AlgebraSpec& A = *x.A;
    DAlgElem z;
    z.A = x.A;
    z.coord.assign(static_cast<size_t>(A.d), A.g_zero());
    for (int j = 0; j < A.d; ++j) {
        if (A.g_is_zero(x.coord[static_cast<size_t>(j)])) continue;
        for (int kk = 0; kk < A.d; ++kk) {
            if (A.g_is_zero(y.coord[static_cast<size_t>(kk)])) continue;
            Ground term = A.g_mul(x.coord[static_cast<size_t>(j)], A.g_frob(y.coord[static_cast<size_t>(kk)], j));
            int m = (j + kk) % A.d;
            if (j + kk >= A.d) term = A.g_mul_pi(term);
            z.coord[static_cast<size_t>(m)] = A.g_add(z.coord[static_cast<size_t>(m)], term);
        }
    }
    canon(z);
    return z;
}

bool is_unit(const DAlgElem& x) { return x.A->g_digit(x.coord[0], 0) != 0; }

DAlgElem inv(const DAlgElem& x) {
    require(is_unit(x), "inverse of a non-unit");
    const AlgebraSpec& A = *x.A;
    Ground a0inv = A.g_inv(x.coord[0]);

    DAlgElem a0inv_c;
    a0inv_c.A = x.A;
    a0inv_c.coord.assign(static_cast<size_t>(A.d), A.g_zero());
    a0inv_c.coord[0] = a0inv;
    canon(a0inv_c);

    DAlgElem u = mul(a0inv_c, x);  // u = 1 + w, w in varpi O_D
    DAlgElem w = u;
    w.coord[0] = A.g_sub(w.coord[0], A.g_one());
    canon(w);

    // (1 + w)^{-1} = sum (-w)^k by Horner: s <- 1 - w s.
    DAlgElem s;
    s.A = x.A;
    s.coord.assign(static_cast<size_t>(A.d), A.g_zero());
    s.coord[0] = A.g_one();
    for (int it = 0; it < A.N; ++it) {
        DAlgElem ws = mul(w, s);
        s = ws;
        for (auto& c : s.coord) c = A.g_neg(c);
        s.coord[0] = A.g_add(s.coord[0], A.g_one());
        canon(s);
    }
    return mul(s, a0inv_c);
}

DAlgElem pow(const DAlgElem& x, int64_t e) {
    if (e < 0) return pow(inv(x), -e);
    DAlgElem r;
    r.A = x.A;
    r.coord.assign(static_cast<size_t>(x.A->d), x.A->g_zero());
    r.coord[0] = x.A->g_one();
    DAlgElem base = x;
    uint64_t ee = static_cast<uint64_t>(e);
    while (ee) {
        if (ee & 1) r = mul(r, base);
        base = mul(base, base);
        ee >>= 1;
    }
    return r;
}

DAlgElem commutator(const DAlgElem& x, const DAlgElem& y) {
    return mul(mul(x, y), mul(inv(x), inv(y)));
}

gf::FqElem digit(const DAlgElem& x, int i) {
    require(i >= 0 && i < x.A->N, "digit index beyond precision");
    const AlgebraSpec& A = *x.A;
    return {A.k.get(), A.g_digit(x.coord[static_cast<size_t>(i % A.d)], i / A.d)};
}

int valuation(const DAlgElem& x) {
    const AlgebraSpec& A = *x.A;
    int best = A.N;
    for (int j = 0; j < A.d; ++j) {
        int lv = A.g_val(x.coord[static_cast<size_t>(j)]);
        if (lv < A.M) best = std::min(best, A.d * lv + j);
    }
    return std::min(best, A.N);
}

Ground reduced_norm(const DAlgElem& x) {
    require(is_unit(x), "reduced norm requires a unit");
    const AlgebraSpec& A = *x.A;
    int d = A.d;
    check(d <= 8, "reduced_norm: d too large for Leibniz expansion");
    // Matrix of left multiplication on the right-E-module basis {varpi^m}.
    std::vector<std::vector<Ground>> mat(static_cast<size_t>(d),
                                         std::vector<Ground>(static_cast<size_t>(d), A.g_zero()));
    for (int m = 0; m < d; ++m) {
        for (int kk = 0; kk < d; ++kk) {
            int j = ((m - kk) % d + d) % d;
            Ground v = A.g_frob(x.coord[static_cast<size_t>(j)], (d - m) % d);
            if (j + kk >= d) v = A.g_mul_pi(v);
            mat[static_cast<size_t>(m)][static_cast<size_t>(kk)] = v;
        }
    }
    std::vector<int> perm(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) perm[static_cast<size_t>(i)] = i;
    Ground det = A.g_zero();
    do {
        int inversions = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inversions;
        Ground term = A.g_one();
        for (int i = 0; i < d; ++i) term = A.g_mul(term, mat[static_cast<size_t>(i)][static_cast<size_t>(perm[static_cast<size_t>(i)])]);
        det = (inversions % 2 == 0) ? A.g_add(det, term) : A.g_sub(det, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    check(A.g_in_F(det), "reduced norm must land in F");
    return det;
}

DAlgElem truncate_to(const AlgebraSpec* lower, const DAlgElem& x) {
    require(lower->k == x.A->k && lower->mode == x.A->mode, "spec mismatch");
    require(lower->N <= x.A->N, "truncate_to requires lower precision");
    DAlgElem z = zero(lower);
    for (int j = 0; j < lower->d; ++j) {
        Ground g = lower->g_zero();
        int copy = std::min(lower->M, x.A->M);
        if (lower->mode == Mode::EqualChar) {
            for (int l = 0; l < copy; ++l) g.a[static_cast<size_t>(l)] = x.coord[static_cast<size_t>(j)].a[static_cast<size_t>(l)];
        } else {
            for (int i = 0; i < lower->n; ++i) g.a[static_cast<size_t>(i)] = x.coord[static_cast<size_t>(j)].a[static_cast<size_t>(i)] % lower->pM;
        }
        z.coord[static_cast<size_t>(j)] = g;
    }
    canon(z);
    return z;
}

DAlgElem lift_to(const AlgebraSpec* higher, const DAlgElem& x) {
    require(higher->k == x.A->k && higher->mode == x.A->mode, "spec mismatch");
    require(higher->N >= x.A->N, "lift_to requires higher precision");
    DAlgElem z = zero(higher);
    for (int j = 0; j < higher->d; ++j) {
        Ground g = higher->g_zero();
        if (higher->mode == Mode::EqualChar) {
            for (int l = 0; l < x.A->M; ++l) g.a[static_cast<size_t>(l)] = x.coord[static_cast<size_t>(j)].a[static_cast<size_t>(l)];
        } else {
            for (int i = 0; i < higher->n; ++i) g.a[static_cast<size_t>(i)] = x.coord[static_cast<size_t>(j)].a[static_cast<size_t>(i)];
        }
        z.coord[static_cast<size_t>(j)] = g;
    }
    canon(z);
    return z;
}

std::string to_json(const DAlgElem& x) {
    const AlgebraSpec& A = *x.A;
    nlohmann::json coords = nlohmann::json::array();
    for (int j = 0; j < A.d; ++j) {
        nlohmann::json levels = nlohmann::json::array();
        for (int l = 0; l < A.M; ++l) {
            uint32_t enc = A.g_digit(x.coord[static_cast<size_t>(j)], l);
            nlohmann::json digits = nlohmann::json::array();
            for (auto c : A.k->digits(enc)) digits.push_back(static_cast<int>(c));
            levels.push_back(digits);
        }
        coords.push_back(levels);
    }
    return coords.dump();
}

DAlgElem from_json(const AlgebraPtr& A, const std::string& text) {
    auto coords = nlohmann::json::parse(text);
    require(coords.is_array() && static_cast<int>(coords.size()) == A->d, "bad coordinate count");
    DAlgElem x = zero(A);
    for (int j = 0; j < A->d; ++j) {
        const auto& levels = coords[static_cast<size_t>(j)];
        require(static_cast<int>(levels.size()) <= A->M, "too many pi-digits");
        Ground g = A->g_zero();
        for (int l = 0; l < static_cast<int>(levels.size()); ++l) {
            std::vector<uint8_t> ds;
            for (const auto& v : levels[static_cast<size_t>(l)]) ds.push_back(static_cast<uint8_t>(v.get<int>() % A->k->p));
            require(static_cast<int>(ds.size()) == A->n, "bad digit vector width");
            uint32_t enc = A->k->from_digits(ds);
            if (A->mode == Mode::EqualChar) {
                g.a[static_cast<size_t>(l)] = enc;
            } else {
                uint64_t mul = 1;
                for (int t = 0; t < l; ++t) mul *= static_cast<uint64_t>(A->k->p);
                for (int i = 0; i < A->n; ++i)
                    g.a[static_cast<size_t>(i)] =
                        addm(g.a[static_cast<size_t>(i)], mulmod_u64(ds[static_cast<size_t>(i)], mul, A->pM), A->pM);
            }
        }
        x.coord[static_cast<size_t>(j)] = g;
    }
    canon(x);
    return x;
}

std::string elem_key(const DAlgElem& x) {
    std::string key;
    key.reserve(x.coord.size() * x.coord[0].a.size() * 8);
    for (const auto& g : x.coord)
        for (uint64_t v : g.a)
            for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    return key;
}

}  // namespace divext::dalg
