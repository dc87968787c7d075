#ifndef DIVEXT_DALG_HPP
#define DIVEXT_DALG_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "divext/gf.hpp"

namespace divext::dalg {

enum class Mode { EqualChar, MixedCharUnramified };

// Element of the ground ring (coefficient ring of the d coordinates of O_D):
//   EqualChar:           k_D[[t]]/t^M, stored as M field encodings (t-digits);
//   MixedCharUnramified: O_E/p^M for E/Q_p unramified of degree df, stored as
//                        df polynomial coefficients mod p^M.
struct Ground {
    std::vector<uint64_t> a;
    friend bool operator==(const Ground& x, const Ground& y) { return x.a == y.a; }
};

// O_D/varpi^N with the twist law varpi * a = phi(a) * varpi and varpi^d = pi_F.
// Coordinate j of an element is its ground coefficient of varpi^j, reduced to
// pi-precision ceil((N-j)/d); arithmetic never extends precision silently.
struct AlgebraSpec {
    gf::FieldPtr k;
    Mode mode = Mode::EqualChar;
    int N = 0;               // varpi-adic precision
    int M = 0;               // pi-adic precision, ceil(N/d)
    int d = 0;               // copied from k->d
    int n = 0;               // df, ground-ring rank over O_F (mixed) / t-digit width (equal: unused)
    uint64_t pM = 0;         // p^M (mixed only)
    std::vector<std::vector<std::vector<uint64_t>>> frob_mat;  // mixed: phi^j as n x n matrices mod p^M
    std::vector<Ground> teich_cache;                           // mixed: Teichmuller lifts by encoding

    int coord_prec(int j) const { return (N - j + d - 1) / d; }

    // --- ground-ring operations ---
    Ground g_zero() const;
    Ground g_one() const;
    Ground g_from_int(uint64_t c) const;  // image of an integer scalar
    bool g_is_zero(const Ground& g) const;
    Ground g_add(const Ground& x, const Ground& y) const;
    Ground g_sub(const Ground& x, const Ground& y) const;
    Ground g_neg(const Ground& x) const;
    Ground g_mul(const Ground& x, const Ground& y) const;
    Ground g_inv(const Ground& x) const;  // requires unit (nonzero residue)
    Ground g_mul_pi(const Ground& x) const;
    Ground g_frob(const Ground& x, int j) const;  // phi^j
    Ground g_reduce(Ground x, int prec) const;    // truncate to pi-precision
    uint32_t g_digit(const Ground& x, int l) const;  // l-th pi-digit as k_D element
    int g_val(const Ground& x) const;                // pi-valuation, M if zero
    bool g_in_F(const Ground& x) const;              // fixed by phi
    Ground g_teich(uint32_t enc) const;              // Teichmuller lift into the ground ring

    // Unique d-th root of w in 1 + pi O_F (Newton; gcd(d, p) = 1).
    Ground g_dth_root_1piOF(const Ground& w) const;
    // Membership of w in (1 + pi O_F)^p, decided from the first `prec` pi-digits.
    bool g_is_pth_power_1piOF(const Ground& w, int prec) const;
};

using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

AlgebraPtr make_algebra(const gf::FieldPtr& field, Mode mode, int wprec);

struct DAlgElem {
    const AlgebraSpec* A = nullptr;
    std::vector<Ground> coord;  // length d

    friend bool operator==(const DAlgElem& x, const DAlgElem& y) { return x.coord == y.coord; }
    friend bool operator!=(const DAlgElem& x, const DAlgElem& y) { return !(x == y); }
};

// Elements reference their spec by raw pointer; the caller keeps the spec alive
// (AlgebraPtr overloads are provided for the common case).
DAlgElem zero(const AlgebraSpec* A);
DAlgElem one(const AlgebraSpec* A);
DAlgElem uniformizer(const AlgebraSpec* A);
DAlgElem pi_elem(const AlgebraSpec* A);
DAlgElem central(const AlgebraSpec* A, const Ground& g);

// Multiplicative Teichmuller lift [c] (coordinate 0).
DAlgElem teichmuller(const AlgebraSpec* A, gf::FqElem c);
// [c] * varpi^i
DAlgElem from_digit(const AlgebraSpec* A, gf::FqElem c, int i);

inline DAlgElem zero(const AlgebraPtr& A) { return zero(A.get()); }
inline DAlgElem one(const AlgebraPtr& A) { return one(A.get()); }
inline DAlgElem uniformizer(const AlgebraPtr& A) { return uniformizer(A.get()); }
inline DAlgElem pi_elem(const AlgebraPtr& A) { return pi_elem(A.get()); }
inline DAlgElem central(const AlgebraPtr& A, const Ground& g) { return central(A.get(), g); }
inline DAlgElem teichmuller(const AlgebraPtr& A, gf::FqElem c) { return teichmuller(A.get(), c); }
inline DAlgElem from_digit(const AlgebraPtr& A, gf::FqElem c, int i) { return from_digit(A.get(), c, i); }

DAlgElem add(const DAlgElem& x, const DAlgElem& y);
DAlgElem sub(const DAlgElem& x, const DAlgElem& y);
DAlgElem neg(const DAlgElem& x);
DAlgElem mul(const DAlgElem& x, const DAlgElem& y);
DAlgElem inv(const DAlgElem& x);                 // requires a unit
DAlgElem pow(const DAlgElem& x, int64_t e);      // negative e for units
DAlgElem commutator(const DAlgElem& x, const DAlgElem& y);  // x y x^-1 y^-1

bool is_unit(const DAlgElem& x);

// k_D-residue of the varpi^i coefficient; for u in I_i \ I_{i+1}, digit(u - 1, i)
// realizes q_i(u) under the identification I_i/I_{i+1} = k_D.
gf::FqElem digit(const DAlgElem& x, int i);
// min varpi-exponent with nonzero digit; N for zero.
int valuation(const DAlgElem& x);

// Determinant of left multiplication on the basis {1, varpi, ..., varpi^{d-1}}
// of D over its unramified degree-d subfield; lands in F, multiplicative.
Ground reduced_norm(const DAlgElem& x);  // requires a unit

// Reinterpret an element at lower varpi-precision N' <= N.
DAlgElem truncate_to(const AlgebraSpec* lower, const DAlgElem& x);
// Lift digits into a higher-precision spec (a choice of representative).
DAlgElem lift_to(const AlgebraSpec* higher, const DAlgElem& x);
inline DAlgElem truncate_to(const AlgebraPtr& lower, const DAlgElem& x) { return truncate_to(lower.get(), x); }
inline DAlgElem lift_to(const AlgebraPtr& higher, const DAlgElem& x) { return lift_to(higher.get(), x); }

std::string to_json(const DAlgElem& x);
DAlgElem from_json(const AlgebraPtr& A, const std::string& text);

// Canonical byte key for hashing cosets of I_N.
std::string elem_key(const DAlgElem& x);

}  // namespace divext::dalg

#endif
