#ifndef DIVEXT_GF_HPP
#define DIVEXT_GF_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "divext/common.hpp"

namespace divext::gf {

// The residue-field tower k_F = F_q inside k_D = F_{q^d}, q = p^f, realized as a
// single field F_p[x]/(modulus) of degree df with subfields handled by exponent
// arithmetic.  sigma is the distinguished generator x -> x^{q^r} of Gal(k_D/k_F).
//
// Elements are stored as base-p digit encodings of their coefficient vectors;
// multiplication goes through discrete-log tables, addition is digit-wise.
struct FieldSpec {
    int p = 0;            // residue characteristic
    int f = 0;            // residue degree of F over Q_p (or F_p((t)))
    int d = 0;            // degree of the division algebra
    int r = 0;            // Brauer invariant numerator; sigma = x -> x^{q^r}
    int n = 0;            // df = degree of k_D over F_p
    uint64_t q = 0;       // p^f
    uint64_t size = 0;    // p^n
    uint64_t order = 0;   // size - 1 = |k_D^x| = q^d - 1
    std::vector<uint8_t> modulus;    // monic irreducible, length n+1, modulus[n] = 1
    uint32_t generator = 0;          // least primitive element
    std::vector<uint32_t> exp_;      // exp_[k] = generator^k, k in [0, order)
    std::vector<uint32_t> log_;      // log_[enc] for enc != 0

    uint64_t q_pow(uint64_t e) const { return powmod_u64(q % order, e, order); }

    int digit(uint32_t enc, int k) const {
        uint32_t v = enc;
        for (int i = 0; i < k; ++i) v /= static_cast<uint32_t>(p);
        return static_cast<int>(v % static_cast<uint32_t>(p));
    }
    uint32_t from_digits(const std::vector<uint8_t>& c) const {
        uint32_t v = 0;
        for (int i = n - 1; i >= 0; --i) v = v * static_cast<uint32_t>(p) + c[static_cast<size_t>(i)];
        return v;
    }
    std::vector<uint8_t> digits(uint32_t enc) const {
        std::vector<uint8_t> c(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            c[static_cast<size_t>(i)] = static_cast<uint8_t>(enc % static_cast<uint32_t>(p));
            enc /= static_cast<uint32_t>(p);
        }
        return c;
    }

    uint32_t add(uint32_t a, uint32_t b) const {
        if (p == 2) return a ^ b;
        uint32_t res = 0, mul = 1;
        for (int i = 0; i < n; ++i) {
            uint32_t da = a % static_cast<uint32_t>(p), db = b % static_cast<uint32_t>(p);
            res += ((da + db) % static_cast<uint32_t>(p)) * mul;
            a /= static_cast<uint32_t>(p);
            b /= static_cast<uint32_t>(p);
            mul *= static_cast<uint32_t>(p);
        }
        return res;
    }
    uint32_t neg(uint32_t a) const {
        if (p == 2) return a;
        uint32_t res = 0, mul = 1;
        for (int i = 0; i < n; ++i) {
            uint32_t da = a % static_cast<uint32_t>(p);
            res += ((static_cast<uint32_t>(p) - da) % static_cast<uint32_t>(p)) * mul;
            a /= static_cast<uint32_t>(p);
            mul *= static_cast<uint32_t>(p);
        }
        return res;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        uint64_t e = static_cast<uint64_t>(log_[a]) + log_[b];
        if (e >= order) e -= order;
        return exp_[e];
    }
    uint32_t inv(uint32_t a) const {
        require(a != 0, "inverse of zero field element");
        uint64_t e = (order - log_[a]) % order;
        return exp_[e];
    }
    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
    // a^e with e taken mod the group order (a != 0); 0^e = 0 for e > 0.
    uint32_t pow(uint32_t a, int64_t e) const {
        if (a == 0) {
            require(e > 0, "0^e undefined for e <= 0");
            return 0;
        }
        int64_t m = static_cast<int64_t>(order);
        int64_t ee = ((e % m) + m) % m;
        uint64_t k = mulmod_u64(log_[a], static_cast<uint64_t>(ee), order);
        return exp_[k];
    }
    // sigma^j(x) = x^{q^{rj}}
    uint32_t sigma(uint32_t a, int64_t j) const {
        if (a == 0) return 0;
        int64_t dd = d;
        int64_t jj = ((j % dd) + dd) % dd;
        uint64_t e = q_pow(static_cast<uint64_t>(r) * static_cast<uint64_t>(jj));
        uint64_t k = mulmod_u64(log_[a], e, order);
        return exp_[k];
    }
    // x^{p^i}
    uint32_t frob_p(uint32_t a, int64_t i) const {
        if (a == 0) return 0;
        int64_t nn = n;
        int64_t ii = ((i % nn) + nn) % nn;
        uint64_t e = powmod_u64(static_cast<uint64_t>(p), static_cast<uint64_t>(ii), order);
        uint64_t k = mulmod_u64(log_[a], e, order);
        return exp_[k];
    }
    // membership in the degree-a subfield F_{q^a}: x^{q^a} = x
    bool in_subfield(uint32_t a_enc, int a) const {
        if (a_enc == 0) return true;
        uint64_t e = q_pow(static_cast<uint64_t>(a));
        return exp_[mulmod_u64(log_[a_enc], e, order)] == a_enc;
    }
    bool in_kF(uint32_t a_enc) const { return in_subfield(a_enc, 1); }
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

// Value-type wrapper for readability in user-facing code and tests.
struct FqElem {
    const FieldSpec* F = nullptr;
    uint32_t v = 0;

    FqElem() = default;
    FqElem(const FieldSpec* spec, uint32_t enc) : F(spec), v(enc) {}

    friend FqElem operator+(FqElem a, FqElem b) { return {a.F, a.F->add(a.v, b.v)}; }
    friend FqElem operator-(FqElem a, FqElem b) { return {a.F, a.F->sub(a.v, b.v)}; }
    friend FqElem operator*(FqElem a, FqElem b) { return {a.F, a.F->mul(a.v, b.v)}; }
    friend FqElem operator/(FqElem a, FqElem b) { return {a.F, a.F->div(a.v, b.v)}; }
    friend FqElem operator-(FqElem a) { return {a.F, a.F->neg(a.v)}; }
    friend bool operator==(FqElem a, FqElem b) { return a.v == b.v; }
    friend bool operator!=(FqElem a, FqElem b) { return a.v != b.v; }
    bool is_zero() const { return v == 0; }
    std::vector<uint8_t> coeffs() const { return F->digits(v); }
};

inline constexpr uint64_t kDefaultFieldCap = uint64_t(1) << 24;

// Deterministic construction: least irreducible modulus of degree df over F_p
// (coefficient vectors ordered by integer encoding), least primitive element as
// the generator, full dlog table.  Errors beyond the table cap.
FieldPtr make_field(int p, int f, int d, int r, uint64_t cap = kDefaultFieldCap);

FqElem generator(const FieldPtr& F);
FqElem elem(const FieldPtr& F, uint32_t enc);

FqElem sigma(FqElem x, int64_t j);

// (Nm_{k_D/F_{q^a}}(x), Tr_{k_D/F_{q^a}}(x)); requires a | d.
std::pair<FqElem, FqElem> norm_trace(FqElem x, int a);

enum class H90Mode { Mult, Add };

// Mult: x with x/sigma(x) = c given Nm_{k_D/k_F}(c) = 1, c != 0.
// Add:  x with sigma(x) - x = c given Tr_{k_D/k_F}(c) = 0.
FqElem hilbert90(FqElem c, H90Mode mode);

// phi_{i,y}(x) = sigma(x) y - x sigma^i(y)
FqElem phi_map(int64_t i, FqElem y, FqElem x);

// k_F-basis of im(phi_{i,y}); empty for y = 0, k_F-codimension one otherwise.
std::vector<FqElem> phi_image_basis(int64_t i, FqElem y);

uint64_t dlog(FqElem x);

// All elements of the degree-a subfield F_{q^a} (a | d), deterministic order.
std::vector<FqElem> subfield_elements(const FieldSpec& F, int a);

}  // namespace divext::gf

#endif
