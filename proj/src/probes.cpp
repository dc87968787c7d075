#include "divext/probes.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

namespace divext::probes {

using dalg::AlgebraPtr;
using dalg::DAlgElem;
using dalg::Ground;
using gf::FqElem;

namespace {

// 1 + sum_{i=from}^{to-1} [c_i] varpi^i with digit vector given by a mixed-radix index.
DAlgElem build_layered(const AlgebraPtr& A, int from, int to, uint64_t index) {
    DAlgElem x = dalg::one(A);
    for (int i = from; i < to; ++i) {
        uint32_t c = static_cast<uint32_t>(index % A->k->size);
        index /= A->k->size;
        if (c) x = dalg::add(x, dalg::from_digit(A, FqElem{A->k.get(), c}, i));
    }
    return x;
}

uint64_t egcd_inv(uint64_t a, uint64_t m) {
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
    while (newr != 0) {
        int64_t quot = r / newr;
        std::swap(t -= quot * newt, newt);
        std::swap(r -= quot * newr, newr);
    }
    check(r == 1, "inverse of a non-unit modulo p^M");
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

}  // namespace

QuotientGroup make_quotient(const dalg::AlgebraPtr& A, uint64_t cap) {
    QuotientGroup Q;
    Q.A = A;
    Q.N = A->N;
    Q.cap = cap;
    return Q;
}

uint64_t QuotientGroup::layer_order(int from) const {
    uint64_t r = 1;
    for (int i = from; i < N; ++i) {
        check(r <= UINT64_MAX / A->k->size, "layer order overflow");
        r *= A->k->size;
    }
    return r;
}

DAlgElem QuotientGroup::element_from(int from, uint64_t index) const {
    return build_layered(A, from, N, index);
}

// --- p-th roots ---------------------------------------------------------------

namespace {

DAlgElem pth_root_mixed(const DAlgElem& y) {
    const auto& A = *y.A;
    const auto& F = *A.k;
    int p = F.p, d = A.d, N = A.N;
    const dalg::AlgebraSpec* base = y.A;
    int vy = dalg::valuation(y);
    if (vy >= N) return dalg::one(base);
    require(vy >= d + 1, "pth_root: 1+y must lie in 1 + varpi^{de+1} O_D");

    // Term n has varpi-valuation >= n(vy - d) - d nu_p(n!) >= n((vy-d)(p-1) - d)/(p-1).
    int64_t denom = static_cast<int64_t>(vy - d) * (p - 1) - d;
    check(denom > 0, "series divergence: requires p > de + 1");
    int64_t nmax = (static_cast<int64_t>(N) * (p - 1) + denom - 1) / denom + 1;
    auto legendre = [&](int64_t n) {
        int64_t s = 0;
        for (int64_t pk = p; pk <= n; pk *= p) s += n / pk;
        return s;
    };
    int kmax = static_cast<int>(nmax + legendre(nmax));
    int Mb = A.M + kmax + 1;
    auto Ab = dalg::make_algebra(A.k, A.mode, d * Mb);
    uint64_t pMb = Ab->pM;
    DAlgElem yb = dalg::lift_to(Ab, y);

    DAlgElem acc = dalg::one(Ab);
    DAlgElem ypow = dalg::one(Ab);
    uint64_t num = 1;       // prod_{i<n} (1 - i p) mod p^Mb
    uint64_t den_unit = 1;  // n! with p-parts removed, mod p^Mb
    int64_t nu = 0;
    for (int64_t n = 1; n <= nmax; ++n) {
        ypow = dalg::mul(ypow, yb);
        uint64_t ip = mulmod_u64(static_cast<uint64_t>(n - 1) % pMb, static_cast<uint64_t>(p), pMb);
        num = mulmod_u64(num, (1 + pMb - ip) % pMb, pMb);  // next factor (1 - ip)
        int64_t m = n;
        while (m % p == 0) {
            m /= p;
            ++nu;
        }
        den_unit = mulmod_u64(den_unit, static_cast<uint64_t>(m) % pMb, pMb);
        int64_t kn = n + nu;
        check(kn <= kmax, "series valuation bookkeeping failed");
        uint64_t cn = mulmod_u64(num, egcd_inv(den_unit, pMb), pMb);
        uint64_t pk = 1;
        for (int64_t t = 0; t < kn; ++t) pk *= static_cast<uint64_t>(p);
        DAlgElem term = ypow;
        for (auto& g : term.coord) {
            for (auto& c : g.a) {
                uint64_t v = mulmod_u64(c, cn, pMb);
                check(v % pk == 0, "series term not p-integral at the claimed valuation");
                c = v / pk;
            }
        }
        acc = dalg::add(acc, term);
    }
    DAlgElem z = dalg::truncate_to(base, acc);
    check(dalg::pow(z, p) == dalg::add(dalg::one(base), y), "pth_root replay failed");
    return z;
}

DAlgElem pth_root_equal(const DAlgElem& y) {
    const auto& A = *y.A;
    const auto& F = *A.k;
    int p = F.p, N = A.N;
    const dalg::AlgebraSpec* base = y.A;
    int vy = dalg::valuation(y);
    if (vy >= N) return dalg::one(base);
    require(vy % p == 0 && vy >= p, "pth_root: leading digit not at a p-th power position");

    DAlgElem target = dalg::add(dalg::one(base), y);
    uint64_t nodes = 0;
    const uint64_t node_cap = uint64_t(1) << 22;

    std::function<std::optional<DAlgElem>(DAlgElem, int)> rec =
        [&](DAlgElem z, int j) -> std::optional<DAlgElem> {
        if (++nodes > node_cap) return std::nullopt;
        int miss = dalg::valuation(dalg::sub(target, dalg::pow(z, p)));
        if (miss >= N) return z;
        if (j >= N) return std::nullopt;
        int vz = dalg::valuation(dalg::sub(z, dalg::one(base)));
        for (uint32_t c = 0; c < F.size; ++c) {
            DAlgElem z2 = c ? dalg::add(z, dalg::from_digit(base, FqElem{A.k.get(), c}, j)) : z;
            int m2 = dalg::valuation(dalg::sub(target, dalg::pow(z2, p)));
            if (m2 >= N) return z2;
            int vz2 = c ? std::min(vz, j) : vz;
            int reach = vz2 >= N ? p * (j + 1) : std::min(p * (j + 1), (j + 1) + (p - 1) * vz2);
            if (m2 < reach) continue;  // a later digit can no longer repair position m2
            auto res = rec(z2, j + 1);
            if (res) return res;
        }
        return std::nullopt;
    };
    auto res = rec(dalg::one(base), 1);
    require(res.has_value(), "pth_root: no root found within the precision window");
    check(dalg::pow(*res, p) == target, "pth_root replay failed");
    return *res;
}

}  // namespace

DAlgElem pth_root(const DAlgElem& y) {
    return y.A->mode == dalg::Mode::MixedCharUnramified ? pth_root_mixed(y) : pth_root_equal(y);
}

// --- norm-1 decomposition ------------------------------------------------------

std::pair<DAlgElem, DAlgElem> nrd1_decompose(const DAlgElem& x) {
    const auto& A = *x.A;
    const dalg::AlgebraSpec* base = x.A;
    require(dalg::is_unit(x) && dalg::digit(x, 0).v == 1, "nrd1_decompose requires x in I_1");
    Ground w = dalg::reduced_norm(x);
    Ground u0 = A.g_dth_root_1piOF(w);
    DAlgElem u = dalg::central(base, u0);
    DAlgElem v = dalg::mul(dalg::inv(u), x);
    check(dalg::mul(u, v) == x, "nrd1_decompose recomposition failed");
    check(A.g_is_zero(A.g_sub(dalg::reduced_norm(v), A.g_one())), "nrd1_decompose norm-1 part failed");
    return {u, v};
}

// --- Frattini subgroup ----------------------------------------------------------

std::set<std::string> frattini_closure(const QuotientGroup& Q) {
    const auto& A = Q.A;
    const auto& F = *A->k;
    require(Q.order() <= Q.cap, "quotient group exceeds the enumeration cap");
    std::vector<DAlgElem> gens;
    for (int i = 1; i < Q.N; ++i) {
        uint32_t enc = 1;
        for (int k = 0; k < F.n; ++k) {
            gens.push_back(dalg::add(dalg::one(A), dalg::from_digit(A, FqElem{A->k.get(), enc}, i)));
            enc *= static_cast<uint32_t>(F.p);
        }
    }
    std::vector<DAlgElem> gens_inv;
    gens_inv.reserve(gens.size());
    for (const auto& g : gens) gens_inv.push_back(dalg::inv(g));

    std::vector<DAlgElem> seeds;
    std::set<std::string> seed_keys;
    auto push_seed = [&](const DAlgElem& s) {
        auto key = dalg::elem_key(s);
        if (key != dalg::elem_key(dalg::one(A)) && seed_keys.insert(key).second) seeds.push_back(s);
    };
    for (const auto& g : gens)
        for (const auto& h : gens) push_seed(dalg::commutator(g, h));
    for (const auto& g : gens) push_seed(dalg::pow(g, F.p));

    while (true) {
        // subgroup closure under the current multiplier set
        std::map<std::string, DAlgElem> H;
        std::deque<DAlgElem> queue;
        H.emplace(dalg::elem_key(dalg::one(A)), dalg::one(A));
        queue.push_back(dalg::one(A));
        while (!queue.empty()) {
            DAlgElem h = queue.front();
            queue.pop_front();
            for (const auto& t : seeds) {
                DAlgElem ht = dalg::mul(h, t);
                auto key = dalg::elem_key(ht);
                if (H.emplace(key, ht).second) {
                    require(H.size() <= Q.cap, "Frattini closure exceeds the enumeration cap");
                    queue.push_back(ht);
                }
            }
        }
        // normality under conjugation by the group generators
        std::vector<DAlgElem> extra;
        for (const auto& [key, h] : H) {
            for (size_t gi = 0; gi < gens.size(); ++gi) {
                DAlgElem c = dalg::mul(dalg::mul(gens[gi], h), gens_inv[gi]);
                if (!H.count(dalg::elem_key(c))) extra.push_back(c);
            }
        }
        if (extra.empty()) {
            std::set<std::string> out;
            for (const auto& [key, h] : H) out.insert(key);
            return out;
        }
        for (const auto& c : extra) push_seed(c);
    }
}

bool frattini_predicted_member(const QuotientGroup& Q, const DAlgElem& g) {
    const auto& A = *Q.A;
    if (dalg::valuation(dalg::sub(g, dalg::one(Q.A))) < 2) return false;
    Ground w = dalg::reduced_norm(g);
    return A.g_is_pth_power_1piOF(w, A.M);
}

std::set<std::string> frattini_predicted(const QuotientGroup& Q) {
    std::set<std::string> out;
    require(Q.order() <= Q.cap, "quotient group exceeds the enumeration cap");
    uint64_t count = Q.layer_order(2);
    for (uint64_t idx = 0; idx < count; ++idx) {
        DAlgElem g = Q.element_from(2, idx);
        if (frattini_predicted_member(Q, g)) out.insert(dalg::elem_key(g));
    }
    return out;
}

// --- layer images ----------------------------------------------------------------

LayerImageResult layer_image(int i, const QuotientGroup& Q) {
    const auto& A = Q.A;
    const auto& F = *A->k;
    require(i >= 1 && i + 2 <= Q.N, "layer_image needs i + 2 <= N");

    auto norm1_rep = [&](uint32_t c, int pos) {
        DAlgElem x = dalg::add(dalg::one(A), dalg::from_digit(A, FqElem{A->k.get(), c}, pos));
        return nrd1_decompose(x).second;
    };

    std::vector<DAlgElem> W1, Wi;
    for (uint32_t c = 0; c < F.size; ++c) {
        W1.push_back(norm1_rep(c, 1));
        Wi.push_back(norm1_rep(c, i));
    }

    auto kF = gf::subfield_elements(F, 1);
    linalg::FpSpan computed(F.p, F.n);
    for (const auto& u : W1) {
        for (const auto& w : Wi) {
            DAlgElem c = dalg::commutator(u, w);
            DAlgElem cm1 = dalg::sub(c, dalg::one(A));
            check(dalg::valuation(cm1) >= i + 1, "[I_1, I_i] must land in I_{i+1}");
            uint32_t val = dalg::digit(cm1, i + 1).v;
            if (!val) continue;
            for (const auto& s : kF) {
                if (s.v == 0) continue;
                computed.insert(F.digits(F.mul(s.v, val)));
            }
        }
    }

    LayerImageResult res{linalg::FpSpan(F.p, F.n), linalg::FpSpan(F.p, F.n), false, false};
    res.computed = computed;
    res.predicted_is_kernel = ((i + 1) % A->d == 0);
    for (uint32_t v = 0; v < F.size; ++v) {
        if (res.predicted_is_kernel && gf::norm_trace(FqElem{A->k.get(), v}, 1).second.v != 0) continue;
        res.predicted.insert(F.digits(v));
    }
    res.match = res.computed.equals(res.predicted);
    return res;
}

// --- curve counting ----------------------------------------------------------------

CurveCount curve_count(FqElem alpha) {
    const auto& F = *alpha.F;
    CurveCount out;
    std::set<uint32_t> ratios;
    for (uint32_t x = 0; x < F.size; ++x) {
        uint32_t sx = F.sigma(x, 1);
        for (uint32_t y = 0; y < F.size; ++y) {
            uint32_t lhs = F.sub(F.mul(x, F.sigma(y, 1)), F.mul(sx, y));
            if (lhs == alpha.v) {
                ++out.points;
                if (y != 0) ratios.insert(F.div(x, y));
            }
        }
    }
    out.ratios = ratios.size();
    for (uint32_t z = 1; z < F.size; ++z)
        if (F.mul(z, F.sigma(z, 1)) == 1) ++out.mu;
    return out;
}

FermatCount fermat_coset_count(const gf::FieldPtr& k) {
    require(k->d % 2 == 0, "fermat_coset_count requires even d");
    uint32_t zeta = 0;
    for (uint32_t v = 1; v < k->size; ++v) {
        if (k->sigma(v, 1) == k->neg(v)) {
            zeta = v;
            break;
        }
    }
    check(zeta != 0, "no zeta with sigma(zeta) = -zeta");
    FermatCount out{FqElem{k.get(), k->neg(k->inv(zeta))}, 0, 0};
    out.brute = curve_count(out.alpha).points;
    int64_t q = static_cast<int64_t>(k->q);
    int64_t qd = 1;
    for (int i = 0; i < k->d; ++i) qd *= q;
    int64_t mq_pow = 1;  // (-q)^{d/2}
    for (int i = 0; i < k->d / 2; ++i) mq_pow *= -q;
    out.formula = qd + 1 - mq_pow * q * (q - 1) - (q + 1);
    return out;
}

// --- commutator construction ----------------------------------------------------------

std::optional<std::pair<FqElem, FqElem>> comm_choice(FqElem alpha) {
    const auto& F = *alpha.F;
    require(alpha.v != 0, "comm_choice requires alpha != 0");
    for (uint32_t x = 1; x < F.size; ++x) {
        uint32_t sx = F.sigma(x, 1);
        for (uint32_t y = 1; y < F.size; ++y) {
            if (F.sub(F.mul(x, F.sigma(y, 1)), F.mul(sx, y)) != alpha.v) continue;
            uint32_t ratio = F.div(x, y);
            bool proper = false;
            for (int a = 1; a < F.d; ++a) {
                if (F.d % a) continue;
                if (F.in_subfield(ratio, a)) {
                    proper = true;
                    break;
                }
            }
            if (!proper) return std::make_pair(FqElem{alpha.F, x}, FqElem{alpha.F, y});
        }
    }
    return std::nullopt;
}

namespace {

struct LevelSolveResult {
    DAlgElem x, y;
    bool kernel_used = false;
};

// Inductive digit solver: at level m the commutator digit moves by
// phi_{m-1, x1}(dy) + phi_{m-1, y1}(dx); kernel freedom is the backtracking lever.
std::optional<LevelSolveResult> solve_levels(const AlgebraPtr& A, const DAlgElem& Tp, FqElem x1,
                                             FqElem y1, const CommSolveCaps& caps, uint64_t& nodes) {
    const auto& F = *A->k;
    int n = F.n, p = F.p, N = A->N;

    std::function<std::optional<LevelSolveResult>(DAlgElem, DAlgElem, int, bool)> rec =
        [&](DAlgElem x, DAlgElem y, int level, bool kernel_used) -> std::optional<LevelSolveResult> {
        if (++nodes > caps.max_nodes) return std::nullopt;
        DAlgElem w = dalg::commutator(x, y);
        DAlgElem u = dalg::mul(dalg::inv(w), Tp);
        int m = dalg::valuation(dalg::sub(u, dalg::one(A)));
        if (m >= N) return LevelSolveResult{x, y, kernel_used};
        if (m < level) return std::nullopt;

        FqElem delta = dalg::digit(dalg::sub(u, dalg::one(A)), m);
        int i = m - 1;
        std::vector<std::vector<uint8_t>> mat(static_cast<size_t>(n),
                                              std::vector<uint8_t>(static_cast<size_t>(2 * n), 0));
        for (int kcol = 0; kcol < n; ++kcol) {
            uint32_t e = 1;
            for (int t = 0; t < kcol; ++t) e *= static_cast<uint32_t>(p);
            auto col_x = F.digits(gf::phi_map(i, y1, FqElem{A->k.get(), e}).v);
            auto col_y = F.digits(gf::phi_map(i, x1, FqElem{A->k.get(), e}).v);
            for (int row = 0; row < n; ++row) {
                mat[static_cast<size_t>(row)][static_cast<size_t>(kcol)] = col_x[static_cast<size_t>(row)];
                mat[static_cast<size_t>(row)][static_cast<size_t>(kcol + n)] = col_y[static_cast<size_t>(row)];
            }
        }
        auto sol = linalg::fp_solve(p, n, 2 * n, mat, F.digits(delta.v));
        if (!sol) return std::nullopt;

        uint64_t kernel_count = 1;
        for (size_t t = 0; t < sol->kernel.size() && kernel_count < caps.kernel_tries; ++t)
            kernel_count *= static_cast<uint64_t>(p);
        kernel_count = std::min(kernel_count, caps.kernel_tries);

        for (uint64_t ki = 0; ki < kernel_count; ++ki) {
            std::vector<uint8_t> combo = sol->particular;
            uint64_t rem = ki;
            for (const auto& kv : sol->kernel) {
                int coeff = static_cast<int>(rem % static_cast<uint64_t>(p));
                rem /= static_cast<uint64_t>(p);
                if (coeff)
                    for (int t = 0; t < 2 * n; ++t)
                        combo[static_cast<size_t>(t)] = static_cast<uint8_t>(
                            (combo[static_cast<size_t>(t)] + coeff * kv[static_cast<size_t>(t)]) % p);
            }
            std::vector<uint8_t> dx(combo.begin(), combo.begin() + n);
            std::vector<uint8_t> dy(combo.begin() + n, combo.end());
            DAlgElem x2 = dalg::add(x, dalg::from_digit(A, FqElem{A->k.get(), F.from_digits(dx)}, i));
            DAlgElem y2 = dalg::add(y, dalg::from_digit(A, FqElem{A->k.get(), F.from_digits(dy)}, i));
            DAlgElem w2 = dalg::commutator(x2, y2);
            DAlgElem u2 = dalg::mul(dalg::inv(w2), Tp);
            if (dalg::valuation(dalg::sub(u2, dalg::one(A))) <= m) continue;  // no progress
            auto res = rec(x2, y2, m + 1, kernel_used || ki > 0);
            if (res) return res;
        }
        return std::nullopt;
    };

    DAlgElem x0 = dalg::add(dalg::one(A), dalg::from_digit(A, x1, 1));
    DAlgElem y0 = dalg::add(dalg::one(A), dalg::from_digit(A, y1, 1));
    return rec(x0, y0, 3, false);
}

}  // namespace

std::optional<CommutatorWitness> comm_solve(const DAlgElem& target, const QuotientGroup& Q,
                                            const CommSolveCaps& caps) {
    const auto& A = Q.A;
    const auto& F = *A->k;
    int N = A->N, p = F.p;
    require(dalg::valuation(dalg::sub(target, dalg::one(A))) == 2, "target must lie in I_2 \\ I_3");
    require(frattini_predicted_member(Q, target), "target outside the predicted Frattini set");

    uint64_t nodes = 0;
    int Nz = std::max(1, N - (p - 1));
    uint64_t zcount = 1;
    for (int i = 1; i < Nz; ++i) zcount *= F.size;
    zcount = std::min(zcount, caps.z_tries);

    for (uint64_t zi = 0; zi < zcount; ++zi) {
        DAlgElem z = build_layered(A, 1, Nz, zi);
        DAlgElem zp = dalg::pow(z, p);
        DAlgElem Tp = dalg::mul(target, dalg::inv(zp));
        int vt = dalg::valuation(dalg::sub(Tp, dalg::one(A)));
        if (vt >= N) {
            CommutatorWitness wt{dalg::one(A), dalg::one(A), z, target, zi > 0 ? 1 : 0, nodes};
            check(dalg::mul(dalg::commutator(wt.x, wt.y), zp) == target, "witness replay failed");
            return wt;
        }
        if (vt != 2) continue;
        FqElem alpha = dalg::digit(dalg::sub(Tp, dalg::one(A)), 2);

        std::vector<std::pair<FqElem, FqElem>> pairs;
        auto primary = comm_choice(alpha);
        if (primary) pairs.push_back(*primary);
        if (caps.allow_leading_pair_change) {
            for (uint32_t xv = 1; xv < F.size; ++xv) {
                for (uint32_t yv = 1; yv < F.size; ++yv) {
                    if (F.sub(F.mul(xv, F.sigma(yv, 1)), F.mul(F.sigma(xv, 1), yv)) != alpha.v) continue;
                    uint32_t ratio = F.div(xv, yv);
                    bool proper = false;
                    for (int a = 1; a < F.d; ++a)
                        if (F.d % a == 0 && F.in_subfield(ratio, a)) { proper = true; break; }
                    if (proper) continue;
                    if (primary && primary->first.v == xv && primary->second.v == yv) continue;
                    pairs.emplace_back(FqElem{A->k.get(), xv}, FqElem{A->k.get(), yv});
                }
            }
        }

        for (size_t pidx = 0; pidx < pairs.size(); ++pidx) {
            auto res = solve_levels(A, Tp, pairs[pidx].first, pairs[pidx].second, caps, nodes);
            if (!res) continue;
            CommutatorWitness wt{res->x, res->y, z, target, 0, nodes};
            if (pidx > 0) wt.backtrack_level = 3;
            else if (res->kernel_used) wt.backtrack_level = 2;
            else if (zi > 0) wt.backtrack_level = 1;
            check(dalg::mul(dalg::commutator(wt.x, wt.y), zp) == target, "witness replay failed");
            return wt;
        }
    }
    return std::nullopt;
}

DAlgElem random_i1(const dalg::AlgebraPtr& A, std::mt19937_64& rng) {
    DAlgElem x = dalg::one(A);
    for (int i = 1; i < A->N; ++i) {
        uint32_t c = static_cast<uint32_t>(rng() % A->k->size);
        if (c) x = dalg::add(x, dalg::from_digit(A, FqElem{A->k.get(), c}, i));
    }
    return x;
}

}  // namespace divext::probes
