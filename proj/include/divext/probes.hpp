#ifndef DIVEXT_PROBES_HPP
#define DIVEXT_PROBES_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "divext/dalg.hpp"
#include "divext/linalg.hpp"

namespace divext::probes {

inline constexpr uint64_t kDefaultEnumCap = uint64_t(1) << 20;

// Finite window I_1/I_N with a deterministic enumeration by digit vectors.
struct QuotientGroup {
    dalg::AlgebraPtr A;
    int N = 0;
    uint64_t cap = kDefaultEnumCap;

    uint64_t layer_order(int from) const;            // |I_from / I_N| = (q^d)^{N-from}
    uint64_t order() const { return layer_order(1); }
    dalg::DAlgElem element(uint64_t index) const { return element_from(1, index); }
    dalg::DAlgElem element_from(int from, uint64_t index) const;
};

QuotientGroup make_quotient(const dalg::AlgebraPtr& A, uint64_t cap = kDefaultEnumCap);

// z with z^p = 1 + y at precision.  Mixed characteristic: truncated binomial
// series for (1+y)^{1/p}, requires v(y) >= de+1 = d+1.  Equal characteristic:
// digit-by-digit search with backtracking; v(y) must be a positive multiple of p.
dalg::DAlgElem pth_root(const dalg::DAlgElem& y);

// x = u * v with u central in 1 + pi O_F and Nrd(v) = 1.
std::pair<dalg::DAlgElem, dalg::DAlgElem> nrd1_decompose(const dalg::DAlgElem& x);

// Frattini subgroup of I_1/I_N two ways: worklist closure over commutators and
// p-th powers of layer generators, and the norm-condition prediction
// {g in I_2 : Nrd(g) in Nrd(I_1)^p}.  Sets are canonical element keys.
std::set<std::string> frattini_closure(const QuotientGroup& Q);
std::set<std::string> frattini_predicted(const QuotientGroup& Q);
bool frattini_predicted_member(const QuotientGroup& Q, const dalg::DAlgElem& g);

struct LayerImageResult {
    linalg::FpSpan computed;
    linalg::FpSpan predicted;
    bool match = false;
    bool predicted_is_kernel = false;  // d | (i+1)
};
// k_F-span of digit-(i+1) values of commutators [u, w], u in I_{1,Nrd=1},
// w in I_{i,Nrd=1}; compared against ker(Tr) / k_D.
LayerImageResult layer_image(int i, const QuotientGroup& Q);

struct CurveCount {
    uint64_t points = 0;  // |C_alpha(k_D)|, the pairs with x sigma(y) - sigma(x) y = alpha
    uint64_t ratios = 0;  // distinct x/y over solutions with y != 0
    uint64_t mu = 0;      // |{zeta in k_D : zeta sigma(zeta) = 1}|, the scaling stabilizer;
                          // ratios * mu = points for alpha != 0
};
CurveCount curve_count(gf::FqElem alpha);

struct FermatCount {
    gf::FqElem alpha;     // representative with zeta * alpha = -1
    uint64_t brute = 0;
    int64_t formula = 0;  // q^d + 1 + (-q)^{d/2} (q - q^3)/(q+1) - (q+1)
};
FermatCount fermat_coset_count(const gf::FieldPtr& k);  // d even

// Leading pair (x1, y1) with x1 sigma(y1) - sigma(x1) y1 = alpha and x1/y1
// generating k_D over k_F; NotFound is possible for d = 4 (and for alpha
// outside the trace kernel when d | 2).
std::optional<std::pair<gf::FqElem, gf::FqElem>> comm_choice(gf::FqElem alpha);

struct CommutatorWitness {
    dalg::DAlgElem x, y, z, target;
    // 0: first leading pair, z = 1; 1: z varied; 2: kernel freedom used;
    // 3: leading pair changed.
    int backtrack_level = 0;
    uint64_t nodes = 0;
};

struct CommSolveCaps {
    uint64_t z_tries = uint64_t(1) << 16;
    uint64_t kernel_tries = 256;
    uint64_t max_nodes = uint64_t(1) << 20;
    bool allow_leading_pair_change = true;
};

// Witness [x, y] z^p = target mod I_N for target in the predicted Frattini set
// with target not in I_3; replay-verified before returning.
std::optional<CommutatorWitness> comm_solve(const dalg::DAlgElem& target, const QuotientGroup& Q,
                                            const CommSolveCaps& caps = {});

// Uniformly random element of I_1 at the algebra's precision.
dalg::DAlgElem random_i1(const dalg::AlgebraPtr& A, std::mt19937_64& rng);

}  // namespace divext::probes

#endif
