#ifndef DIVEXT_LINALG_HPP
#define DIVEXT_LINALG_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "divext/common.hpp"
#include "divext/gf.hpp"

namespace divext::linalg {

// Incremental span of F_p-vectors in echelon form; rows keep zeros at the
// pivots of all earlier rows, which makes single-pass reduction sound.
struct FpSpan {
    int p = 2;
    int n = 0;
    std::vector<std::vector<uint8_t>> rows;
    std::vector<int> pivots;

    FpSpan(int p_, int n_) : p(p_), n(n_) {}

    std::vector<uint8_t> reduce(std::vector<uint8_t> v) const {
        for (size_t k = 0; k < rows.size(); ++k) {
            int piv = pivots[k];
            int c = v[static_cast<size_t>(piv)];
            if (!c) continue;
            for (int t = 0; t < n; ++t) {
                int val = v[static_cast<size_t>(t)] - c * rows[k][static_cast<size_t>(t)] % p;
                v[static_cast<size_t>(t)] = static_cast<uint8_t>(((val % p) + p) % p);
            }
        }
        return v;
    }

    bool contains(const std::vector<uint8_t>& v) const {
        auto red = reduce(v);
        for (uint8_t c : red)
            if (c) return false;
        return true;
    }

    // Returns true if v enlarged the span.
    bool insert(const std::vector<uint8_t>& v) {
        auto red = reduce(v);
        int piv = -1;
        for (int t = 0; t < n; ++t)
            if (red[static_cast<size_t>(t)]) { piv = t; break; }
        if (piv < 0) return false;
        int inv = 1;
        for (int t = 1; t < p; ++t)
            if (t * red[static_cast<size_t>(piv)] % p == 1) { inv = t; break; }
        for (int t = 0; t < n; ++t)
            red[static_cast<size_t>(t)] = static_cast<uint8_t>(red[static_cast<size_t>(t)] * inv % p);
        rows.push_back(std::move(red));
        pivots.push_back(piv);
        return true;
    }

    int dim() const { return static_cast<int>(rows.size()); }

    bool equals(const FpSpan& other) const {
        if (dim() != other.dim()) return false;
        for (const auto& row : other.rows)
            if (!contains(row)) return false;
        return true;
    }
};

// Solutions of A x = b over F_p with A given row-major (m x n).
// Returns a particular solution and a nullspace basis, or nullopt.
struct FpAffineSolution {
    std::vector<uint8_t> particular;
    std::vector<std::vector<uint8_t>> kernel;
};

std::optional<FpAffineSolution> fp_solve(int p, int m, int n,
                                         const std::vector<std::vector<uint8_t>>& A,
                                         const std::vector<uint8_t>& b);

// Dimension of the right nullspace of an m x n matrix with entries in the
// field F (encodings), via Gaussian elimination.
int fq_nullity(const gf::FieldSpec& F, int m, int n, std::vector<std::vector<uint32_t>> mat);

}  // namespace divext::linalg

#endif
