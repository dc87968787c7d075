#ifndef DIVEXT_COHOMX_HPP
#define DIVEXT_COHOMX_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "divext/chars.hpp"

namespace divext::cohomx {

// Thrown for degrees / cases the theory does not determine (CLI exit 3).
struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

enum class FieldCase { PAdic, FunctionField };

struct LocalField {
    FieldCase kind = FieldCase::PAdic;
    int e = 1;  // ramification over Q_p; meaningful in the p-adic case only
    int f = 1;  // residue degree (q = p^f)
    int ef() const { return kind == FieldCase::PAdic ? e * f : 0; }
};

// check p > de+1 (p-adic) resp. gcd(p,d) = 1 (function field) for a field spec
void validate_case(const LocalField& lf, const gf::FieldPtr& k);

// Symbolic extension dimension: finite part plus a multiple of
// dim H^1(1 + pi_F O_F, F_p-bar), which is ef in the p-adic case and countably
// infinite over a local function field.
struct ExtDim {
    int64_t finite = 0;
    int64_t h1F_mult = 0;
    LocalField lf;

    bool is_zero() const { return finite == 0 && h1F_mult == 0; }
    bool is_finite() const { return lf.kind == FieldCase::PAdic || h1F_mult == 0; }
    int64_t value() const;  // finite + h1F_mult * ef; requires is_finite()
    std::string rendered() const;

    friend bool operator==(const ExtDim& x, const ExtDim& y) {
        return x.finite == y.finite && x.h1F_mult == y.h1F_mult;
    }
};

enum class CondKind { None, CondA, CondB };

// Per-coset summand classification: CondA = trivial twist (the ef+1 block),
// CondB = order-d eta-type twist (dimension-1 block).
struct SummandReport {
    int coset = 0;
    CondKind kind = CondKind::None;
    int eta_index = -1;  // i with M = p^i (1 - q^r) when CondB
};

std::string cond_name(CondKind k);

// Index i with M = p^i (q^r - 1) (eta form) or p^i (1 - q^r) (dual form).
std::optional<int> eta_match(const chars::Character& c, bool dualized_form);

SummandReport cond_eval(const chars::Character& c, int coset = 0);

// Ext^1_{D_a^x}(1, c).
ExtDim ext1_char(const LocalField& lf, const chars::Character& c);

// Ext^n_{D^x}(pi, pi') for n in {0, 1} via the Mackey reduction.
std::pair<ExtDim, std::vector<SummandReport>> ext_n(const LocalField& lf, const chars::Irrep& pi,
                                                    const chars::Irrep& pi2, int n);

// Multiplicity of the trivial representation in H^1(I_1, F_p-bar)^(*) (x) c
// as a D_a^x/I_1-representation; the finite part is what invariants_oracle checks.
ExtDim mult_trivial_h1(const LocalField& lf, const chars::Character& c, bool dualized);

// Ext^n_{D_a^x}(1, c) for n >= r = d^2 e f (p-adic only); middle degrees are
// Unsupported outside the quaternion-over-Q_p case.
ExtDim ext_high(const LocalField& lf, const chars::Character& c, uint64_t n);

struct InducedSummand {
    int coset = 0;      // j, s = varpi^j
    int eta_index = 0;  // i in Z/f
    chars::Character merged;  // chi_{eta_i}^s (x) Res_d(twist), level d
    int dim = 0;              // d / a
};

struct H1Structure {
    int h1F_mult = 1;
    chars::Character twist;
    std::vector<InducedSummand> induced;
    int kd_part_dim = 0;  // always d f
};

// H^1(I_1, F_p-bar) (x) twist as a D_a^x/I_1-representation.
H1Structure h1_structure(int a, const chars::Character& twist);

// dim H^i(1 + pi_F O_F, F_p-bar) = binom(ef, i).
int64_t h_aux(const LocalField& lf, int i);

struct H2LowerBound {
    int64_t dim = 0;  // 2 d f + binom(ef, 2)
    std::string desc;
};
H2LowerBound h2_lower_bound(const LocalField& lf, const gf::FieldPtr& k);

struct CohomStructure {
    int dim = 0;
    std::string desc;
};

// H^n(I_1, chi) for a quaternion algebra over Q_p: dims (1, 3, 4, 3, 1).
CohomStructure quaternion_qp_cohom(int n);
// Ext^n_{D_a^x}(1, c) for all degrees 0..r+1 = 5, quaternion over Q_p.
ExtDim quaternion_qp_table(const LocalField& lf, const chars::Character& c, int n);

// Independent linear-algebra oracle: dimension of the joint fixed space of the
// D_a^x/I_1-generators on the df-dimensional eta-basis module tensored with c,
// over a working field F_{p^L}; must equal mult_trivial_h1(...).finite.
int invariants_oracle(int a, const chars::Character& c, bool dualized,
                      uint64_t field_cap = gf::kDefaultFieldCap);

}  // namespace divext::cohomx

#endif
