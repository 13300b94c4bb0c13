#include "latq/lll.hpp"

#include <cmath>
#include <numeric>

#include "latq/error.hpp"

namespace latq {

namespace {

struct GramSchmidt {
    Eigen::MatrixXd mu;      // mu(i,j), j < i
    Eigen::VectorXd norm2;   // squared norms of the orthogonalized rows
    void compute(const Eigen::MatrixXd& b) {
        const int n = static_cast<int>(b.rows());
        Eigen::MatrixXd star = b;
        mu = Eigen::MatrixXd::Identity(n, n);
        norm2.resize(n);
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < i; j++) {
                mu(i, j) = b.row(i).dot(star.row(j)) / norm2(j);
                star.row(i) -= mu(i, j) * star.row(j);
            }
            norm2(i) = star.row(i).squaredNorm();
        }
    }
};

// Working state: float basis plus the exact unimodular transform and inverse.
struct Work {
    int n;
    Eigen::MatrixXd b;
    TransMat t, ti;

    explicit Work(const Lattice& l) : n(l.dim()), b(l.basis()) {
        t.assign(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
        ti = t;
        for (int i = 0; i < n; i++)
            t[static_cast<size_t>(i)][static_cast<size_t>(i)] =
                ti[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    }
    void submul(int i, int j, long q) {  // b_i -= q b_j
        b.row(i) -= static_cast<double>(q) * b.row(j);
        for (int k = 0; k < n; k++)
            t[static_cast<size_t>(i)][static_cast<size_t>(k)] -= q * t[static_cast<size_t>(j)][static_cast<size_t>(k)];
        for (int k = 0; k < n; k++)
            ti[static_cast<size_t>(k)][static_cast<size_t>(j)] += q * ti[static_cast<size_t>(k)][static_cast<size_t>(i)];
    }
    void deep_insert(int i, int k) {  // move row k before row i
        for (int r = k; r > i; r--) {
            b.row(r).swap(b.row(r - 1));
            std::swap(t[static_cast<size_t>(r)], t[static_cast<size_t>(r - 1)]);
            for (int m = 0; m < n; m++)
                std::swap(ti[static_cast<size_t>(m)][static_cast<size_t>(r)],
                          ti[static_cast<size_t>(m)][static_cast<size_t>(r - 1)]);
        }
    }
    // Replace the basis by M b for a unimodular M with inverse Mi.
    void apply_front(const TransMat& m, const TransMat& mi) {
        Eigen::MatrixXd me(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) me(i, j) = static_cast<double>(m[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        b = me * b;
        auto mul = [&](const TransMat& x, const TransMat& y) {
            TransMat r(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
            for (int i = 0; i < n; i++)
                for (int k = 0; k < n; k++) {
                    long x_ik = x[static_cast<size_t>(i)][static_cast<size_t>(k)];
                    if (!x_ik) continue;
                    for (int j = 0; j < n; j++)
                        r[static_cast<size_t>(i)][static_cast<size_t>(j)] += x_ik * y[static_cast<size_t>(k)][static_cast<size_t>(j)];
                }
            return r;
        };
        t = mul(m, t);
        ti = mul(ti, mi);
    }
};

void deep_lll_pass(Work& w, double delta) {
    GramSchmidt gs;
    gs.compute(w.b);
    int k = 1;
    long iters = 0;
    while (k < w.n) {
        if (++iters > 2000000) throw ComputeError("LLL failed to terminate");
        bool changed = false;
        for (int j = k - 1; j >= 0; j--) {
            double m = gs.mu(k, j);
            if (std::fabs(m) > 0.5) {
                w.submul(k, j, std::lround(m));
                changed = true;
            }
        }
        if (changed) gs.compute(w.b);

        double c = w.b.row(k).squaredNorm();
        int insert_at = -1;
        for (int i = 0; i < k; i++) {
            if (c >= delta * gs.norm2(i)) {
                c -= gs.mu(k, i) * gs.mu(k, i) * gs.norm2(i);
            } else {
                insert_at = i;
                break;
            }
        }
        if (insert_at < 0) {
            k++;
        } else {
            w.deep_insert(insert_at, k);
            gs.compute(w.b);
            k = std::max(insert_at, 1);
        }
    }
}

// Exact SVP on the current basis: coefficients of a shortest nonzero vector.
bool svp_below(const Work& w, double bound, std::vector<long>& best_u, double* best_norm) {
    const int n = w.n;
    GramSchmidt gs;
    gs.compute(w.b);
    std::vector<long> u(static_cast<size_t>(n), 0);
    std::vector<int> ioff(static_cast<size_t>(n), 0);
    std::vector<double> c(static_cast<size_t>(n), 0.0), part(static_cast<size_t>(n) + 1, 0.0);
    bool found = false;
    double best = bound;

    auto offset_of = [](int i) -> long {
        long mag = (i + 1) / 2;
        return (i % 2 == 1) ? mag : -mag;
    };
    auto center = [&](int k) {
        double acc = 0;
        for (int j = k + 1; j < n; j++) acc -= gs.mu(j, k) * static_cast<double>(u[static_cast<size_t>(j)]);
        c[static_cast<size_t>(k)] = acc;
        u[static_cast<size_t>(k)] = static_cast<long>(std::nearbyint(acc));
        ioff[static_cast<size_t>(k)] = 0;
    };

    int k = n - 1;
    center(k);
    while (true) {
        double diff = static_cast<double>(u[static_cast<size_t>(k)]) - c[static_cast<size_t>(k)];
        double d = part[static_cast<size_t>(k) + 1] + gs.norm2(k) * diff * diff;
        if (d < best) {
            if (k == 0) {
                bool zero = std::all_of(u.begin(), u.end(), [](long x) { return x == 0; });
                if (!zero) {
                    best = d;
                    best_u = u;
                    found = true;
                }
                ioff[0]++;
                u[0] = static_cast<long>(std::nearbyint(c[0])) + offset_of(ioff[0]);
            } else {
                part[static_cast<size_t>(k)] = d;
                k--;
                center(k);
            }
        } else {
            k++;
            if (k >= n) break;
            ioff[static_cast<size_t>(k)]++;
            u[static_cast<size_t>(k)] =
                static_cast<long>(std::nearbyint(c[static_cast<size_t>(k)])) + offset_of(ioff[static_cast<size_t>(k)]);
        }
    }
    if (found && best_norm) *best_norm = best;
    return found;
}

// Unimodular completion: M with first row equal to the primitive vector u,
// and its inverse. Column-reduces u to e1 while tracking both transforms.
void complete_basis(std::vector<long> u, int n, TransMat& m, TransMat& mi) {
    m.assign(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
    mi = m;
    for (int i = 0; i < n; i++)
        m[static_cast<size_t>(i)][static_cast<size_t>(i)] = mi[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    // Invariant: original_u = w * M, with M unimodular and MI = M^{-1}.
    // Column op on w: w[a] -= q w[b]  =>  M: row_b += q row_a; MI: col_a -= q col_b.
    auto colop = [&](int a, int b, long q) {
        u[static_cast<size_t>(a)] -= q * u[static_cast<size_t>(b)];
        for (int j = 0; j < n; j++)
            m[static_cast<size_t>(b)][static_cast<size_t>(j)] += q * m[static_cast<size_t>(a)][static_cast<size_t>(j)];
        for (int i = 0; i < n; i++)
            mi[static_cast<size_t>(i)][static_cast<size_t>(a)] -= q * mi[static_cast<size_t>(i)][static_cast<size_t>(b)];
    };
    auto colswap = [&](int a, int b) {
        std::swap(u[static_cast<size_t>(a)], u[static_cast<size_t>(b)]);
        std::swap(m[static_cast<size_t>(a)], m[static_cast<size_t>(b)]);
        for (int i = 0; i < n; i++)
            std::swap(mi[static_cast<size_t>(i)][static_cast<size_t>(a)], mi[static_cast<size_t>(i)][static_cast<size_t>(b)]);
    };
    auto colneg = [&](int a) {
        u[static_cast<size_t>(a)] = -u[static_cast<size_t>(a)];
        for (int j = 0; j < n; j++) m[static_cast<size_t>(a)][static_cast<size_t>(j)] *= -1;
        for (int i = 0; i < n; i++) mi[static_cast<size_t>(i)][static_cast<size_t>(a)] *= -1;
    };
    // Gather the gcd into position 0 with Euclidean column ops.
    while (true) {
        int nz = -1;
        for (int j = 1; j < n; j++)
            if (u[static_cast<size_t>(j)] != 0) {
                nz = j;
                break;
            }
        if (nz < 0) break;
        if (u[0] == 0) {
            colswap(0, nz);
            continue;
        }
        long q = u[static_cast<size_t>(nz)] / u[0];
        colop(nz, 0, q);
        if (u[static_cast<size_t>(nz)] != 0) colswap(0, nz);
    }
    if (u[0] < 0) colneg(0);
    if (u[0] != 1) throw ComputeError("shortest-vector coefficients are not primitive");
}

}  // namespace

// Deep-insertion LLL with a shortest-vector polish: after reduction, the true
// shortest vector is enumerated; if every basis row is longer, it is completed
// to a basis and the reduction reruns. The returned basis satisfies the
// Lovász condition and its shortest row attains the lattice minimum.
LLLResult lll_reduce(const Lattice& lattice, double delta) {
    Work w(lattice);
    deep_lll_pass(w, delta);
    for (int round = 0; round < 8; round++) {
        double minrow = w.b.row(0).squaredNorm();
        for (int i = 1; i < w.n; i++) minrow = std::min(minrow, w.b.row(i).squaredNorm());
        std::vector<long> u;
        double norm = 0;
        if (!svp_below(w, minrow * (1.0 - 1e-9), u, &norm)) break;
        long g = 0;
        for (long x : u) g = std::gcd(g, std::labs(x));
        if (g > 1)
            for (auto& x : u) x /= g;
        TransMat m, mi;
        complete_basis(u, w.n, m, mi);
        w.apply_front(m, mi);
        deep_lll_pass(w, delta);
    }
    Lattice reduced = lattice.transformed(w.t);
    return {std::move(reduced), std::move(w.t), std::move(w.ti)};
}

}  // namespace latq
