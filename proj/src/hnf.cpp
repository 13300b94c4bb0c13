#include "latq/hnf.hpp"

#include "latq/error.hpp"

namespace latq {

namespace {
// row_i -= q * row_p
void submul(std::vector<Int>& ri, const std::vector<Int>& rp, const Int& q) {
    if (q == 0) return;
    for (size_t j = 0; j < ri.size(); j++) ri[j] -= q * rp[j];
}
}  // namespace

IntMat hnf_row_basis(const IntMat& rows, int n) {
    IntMat w = rows;
    const int m = static_cast<int>(w.size());
    if (m < n) throw ComputeError("not enough rows to span the lattice");
    int r = 0;
    for (int c = 0; c < n && r < m; c++) {
        // Euclidean phase: shrink column c below row r until one nonzero remains.
        while (true) {
            int p = -1;
            for (int i = r; i < m; i++) {
                if (w[static_cast<size_t>(i)][static_cast<size_t>(c)] == 0) continue;
                if (p < 0 || cmp(abs(w[static_cast<size_t>(i)][static_cast<size_t>(c)]),
                                 abs(w[static_cast<size_t>(p)][static_cast<size_t>(c)])) < 0)
                    p = i;
            }
            if (p < 0) break;  // column is zero below r
            std::swap(w[static_cast<size_t>(p)], w[static_cast<size_t>(r)]);
            const Int& pivot = w[static_cast<size_t>(r)][static_cast<size_t>(c)];
            bool reduced_all = true;
            for (int i = r + 1; i < m; i++) {
                Int& x = w[static_cast<size_t>(i)][static_cast<size_t>(c)];
                if (x == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), pivot.get_mpz_t());
                submul(w[static_cast<size_t>(i)], w[static_cast<size_t>(r)], q);
                if (w[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) reduced_all = false;
            }
            if (reduced_all) break;
        }
        if (w[static_cast<size_t>(r)][static_cast<size_t>(c)] == 0) continue;
        if (w[static_cast<size_t>(r)][static_cast<size_t>(c)] < 0)
            for (auto& x : w[static_cast<size_t>(r)]) x = -x;
        const Int& pivot = w[static_cast<size_t>(r)][static_cast<size_t>(c)];
        for (int i = 0; i < r; i++) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), w[static_cast<size_t>(i)][static_cast<size_t>(c)].get_mpz_t(),
                       pivot.get_mpz_t());
            submul(w[static_cast<size_t>(i)], w[static_cast<size_t>(r)], q);
        }
        r++;
    }
    if (r < n) throw ComputeError("rows do not span a full-rank lattice");
    w.resize(static_cast<size_t>(n));
    return w;
}

Int int_det(const IntMat& m) {
    // Bareiss fraction-free elimination.
    const int n = static_cast<int>(m.size());
    IntMat w = m;
    Int prev = 1;
    int sign = 1;
    for (int c = 0; c < n - 1; c++) {
        if (w[static_cast<size_t>(c)][static_cast<size_t>(c)] == 0) {
            int p = -1;
            for (int i = c + 1; i < n; i++)
                if (w[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(w[static_cast<size_t>(c)], w[static_cast<size_t>(p)]);
            sign = -sign;
        }
        for (int i = c + 1; i < n; i++) {
            for (int j = c + 1; j < n; j++) {
                Int t = w[static_cast<size_t>(i)][static_cast<size_t>(j)] * w[static_cast<size_t>(c)][static_cast<size_t>(c)] -
                        w[static_cast<size_t>(i)][static_cast<size_t>(c)] * w[static_cast<size_t>(c)][static_cast<size_t>(j)];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                w[static_cast<size_t>(i)][static_cast<size_t>(j)] = t;
            }
            w[static_cast<size_t>(i)][static_cast<size_t>(c)] = 0;
        }
        prev = w[static_cast<size_t>(c)][static_cast<size_t>(c)];
    }
    return sign * w[static_cast<size_t>(n - 1)][static_cast<size_t>(n - 1)];
}

}  // namespace latq
