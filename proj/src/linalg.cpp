#include "divext/linalg.hpp"

namespace divext::linalg {

std::optional<FpAffineSolution> fp_solve(int p, int m, int n,
                                         const std::vector<std::vector<uint8_t>>& A,
                                         const std::vector<uint8_t>& b) {
    // Augmented Gauss-Jordan over F_p.
    std::vector<std::vector<int>> aug(static_cast<size_t>(m), std::vector<int>(static_cast<size_t>(n) + 1, 0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) aug[static_cast<size_t>(i)][static_cast<size_t>(j)] = A[static_cast<size_t>(i)][static_cast<size_t>(j)] % p;
        aug[static_cast<size_t>(i)][static_cast<size_t>(n)] = b[static_cast<size_t>(i)] % p;
    }
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i)
            if (aug[static_cast<size_t>(i)][static_cast<size_t>(col)]) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(aug[static_cast<size_t>(sel)], aug[static_cast<size_t>(row)]);
        int inv = 1;
        for (int t = 1; t < p; ++t)
            if (t * aug[static_cast<size_t>(row)][static_cast<size_t>(col)] % p == 1) { inv = t; break; }
        for (int j = col; j <= n; ++j)
            aug[static_cast<size_t>(row)][static_cast<size_t>(j)] = aug[static_cast<size_t>(row)][static_cast<size_t>(j)] * inv % p;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            int c = aug[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (!c) continue;
            for (int j = col; j <= n; ++j) {
                int v = aug[static_cast<size_t>(i)][static_cast<size_t>(j)] - c * aug[static_cast<size_t>(row)][static_cast<size_t>(j)] % p;
                aug[static_cast<size_t>(i)][static_cast<size_t>(j)] = ((v % p) + p) % p;
            }
        }
        pivot_col.push_back(col);
        ++row;
    }
    // Inconsistency: zero row with nonzero rhs.
    for (int i = row; i < m; ++i)
        if (aug[static_cast<size_t>(i)][static_cast<size_t>(n)]) return std::nullopt;

    FpAffineSolution sol;
    sol.particular.assign(static_cast<size_t>(n), 0);
    for (size_t k = 0; k < pivot_col.size(); ++k)
        sol.particular[static_cast<size_t>(pivot_col[k])] =
            static_cast<uint8_t>(aug[k][static_cast<size_t>(n)]);

    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    for (int freec = 0; freec < n; ++freec) {
        if (is_pivot[static_cast<size_t>(freec)]) continue;
        std::vector<uint8_t> v(static_cast<size_t>(n), 0);
        v[static_cast<size_t>(freec)] = 1;
        for (size_t k = 0; k < pivot_col.size(); ++k) {
            int c = aug[k][static_cast<size_t>(freec)];
            v[static_cast<size_t>(pivot_col[k])] = static_cast<uint8_t>(((-c) % p + p) % p);
        }
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

int fq_nullity(const gf::FieldSpec& F, int m, int n, std::vector<std::vector<uint32_t>> mat) {
    int rank = 0;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i)
            if (mat[static_cast<size_t>(i)][static_cast<size_t>(col)]) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(mat[static_cast<size_t>(sel)], mat[static_cast<size_t>(row)]);
        uint32_t inv = F.inv(mat[static_cast<size_t>(row)][static_cast<size_t>(col)]);
        for (int j = col; j < n; ++j)
            mat[static_cast<size_t>(row)][static_cast<size_t>(j)] = F.mul(mat[static_cast<size_t>(row)][static_cast<size_t>(j)], inv);
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            uint32_t c = mat[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (!c) continue;
            for (int j = col; j < n; ++j)
                mat[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    F.sub(mat[static_cast<size_t>(i)][static_cast<size_t>(j)],
                          F.mul(c, mat[static_cast<size_t>(row)][static_cast<size_t>(j)]));
        }
        ++rank;
        ++row;
    }
    return n - rank;
}

}  // namespace divext::linalg
