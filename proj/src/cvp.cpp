#include "latq/cvp.hpp"

#include <algorithm>
#include <cmath>

#include "latq/error.hpp"

namespace latq {

namespace {
constexpr double kSlackRel = 2e-6;    // collection band above the minimum
constexpr double kDegenerateRel = 1e-6;  // spec: flag ties in (tie_tol, 1e-6)
}  // namespace

Prepared::Prepared(const Lattice& lattice)
    : n_(lattice.dim()), original_(lattice), lll_(lll_reduce(lattice)) {
    if (n_ > kMaxDim) throw UsageError("dimension above enumeration limit");
    const Eigen::MatrixXd& b = lll_.reduced.basis();
    Eigen::MatrixXd gram = b * b.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw ComputeError("reduced Gram matrix is not positive definite");
    Eigen::MatrixXd l = llt.matrixL();
    mu_.assign(static_cast<size_t>(n_) * n_, 0.0);
    w_.assign(static_cast<size_t>(n_), 0.0);
    for (int k = 0; k < n_; k++) {
        w_[static_cast<size_t>(k)] = l(k, k) * l(k, k);
        for (int j = k + 1; j < n_; j++)
            mu_[static_cast<size_t>(k) * n_ + j] = l(j, k) / l(k, k);
    }
    reduced_inv_ = b.inverse();
    if (lll_.reduced.is_exact()) {
        const QMat& eb = lll_.reduced.exact_basis();
        exact_gram_ = eb * eb.transpose();
    }
}

Eigen::VectorXd Prepared::reduced_coords(const Eigen::VectorXd& x) const {
    return (x.transpose() * reduced_inv_).transpose();
}

void Prepared::enumerate(
    const double* target, double bound,
    const std::function<double(const long* u, double dist2, double bound)>& visit) const {
    const int n = n_;
    long u[kMaxDim];
    int ioff[kMaxDim];
    int dir[kMaxDim];
    double c[kMaxDim];
    double part[kMaxDim + 1];

    auto offset_of = [](int i, int s) -> long {
        // 0, s, -s, 2s, -2s, ... distances from round(c) are nondecreasing
        long mag = (i + 1) / 2;
        return (i % 2 == 1) ? s * mag : -s * mag;
    };
    auto enter_level = [&](int k) {
        double acc = target[k];
        const double* murow = mu_.data() + static_cast<size_t>(k) * n;
        for (int j = k + 1; j < n; j++)
            acc -= murow[j] * (static_cast<double>(u[j]) - target[j]);
        c[k] = acc;
        double r = std::nearbyint(acc);
        u[k] = static_cast<long>(r);
        dir[k] = acc >= r ? 1 : -1;
        ioff[k] = 0;
    };

    part[n] = 0.0;
    int k = n - 1;
    enter_level(k);
    while (true) {
        double diff = static_cast<double>(u[k]) - c[k];
        double d = part[k + 1] + w_[static_cast<size_t>(k)] * diff * diff;
        if (d <= bound) {
            if (k == 0) {
                double nb = visit(u, d, bound);
                if (nb < bound) bound = nb;
                ioff[k]++;
                long base = static_cast<long>(std::nearbyint(c[k]));
                u[k] = base + offset_of(ioff[k], dir[k]);
            } else {
                part[k] = d;
                k--;
                enter_level(k);
            }
        } else {
            k++;
            if (k >= n) return;
            ioff[k]++;
            long base = static_cast<long>(std::nearbyint(c[k]));
            u[k] = base + offset_of(ioff[k], dir[k]);
        }
    }
}

VecZ map_to_original(const Prepared& p, const long* u_red) {
    const int n = p.dim();
    VecZ out(static_cast<size_t>(n), 0);
    const TransMat& t = p.t();
    for (int i = 0; i < n; i++) {
        long ui = u_red[i];
        if (ui == 0) continue;
        for (int j = 0; j < n; j++) out[static_cast<size_t>(j)] += ui * t[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return out;
}

namespace {

struct Candidate {
    VecZ u_red;
    double dist2;
};

ClosestSet classify(const Prepared& p, std::vector<Candidate> cands,
                    const std::vector<Rat>* exact_target_red, double tie_tol) {
    ClosestSet out;
    if (cands.empty()) throw ComputeError("closest-point enumeration found no candidates");

    if (exact_target_red && p.has_exact_gram() && p.exact_gram_reduced().all_rational()) {
        // Exact tie decision: quadratic form of (u - t) under the exact Gram.
        const QMat& a = p.exact_gram_reduced();
        const int n = p.dim();
        Rat best_num;
        bool have_best = false;
        std::vector<Rat> dists(cands.size());
        for (size_t i = 0; i < cands.size(); i++) {
            std::vector<Quad> diff(static_cast<size_t>(n));
            for (int j = 0; j < n; j++)
                diff[static_cast<size_t>(j)] =
                    Quad(Rat(cands[i].u_red[static_cast<size_t>(j)]) - (*exact_target_red)[static_cast<size_t>(j)]);
            Quad d2 = quad_form(diff, a);
            dists[i] = d2.r();  // rational by construction
            if (!have_best || dists[i] < best_num) {
                best_num = dists[i];
                have_best = true;
            }
        }
        out.exact_ties = true;
        out.dist2 = best_num.get_d();
        for (size_t i = 0; i < cands.size(); i++)
            if (dists[i] == best_num) out.minimizers.push_back(map_to_original(p, cands[i].u_red.data()));
    } else {
        double dmin = cands[0].dist2;
        for (const auto& c : cands) dmin = std::min(dmin, c.dist2);
        out.dist2 = dmin;
        double tie_band = dmin * tie_tol + 1e-300;
        double degen_band = dmin * kDegenerateRel;
        for (const auto& c : cands) {
            if (c.dist2 <= dmin + tie_band)
                out.minimizers.push_back(map_to_original(p, c.u_red.data()));
            else if (c.dist2 <= dmin + degen_band)
                out.degenerate = true;
        }
    }
    std::sort(out.minimizers.begin(), out.minimizers.end());
    return out;
}

std::vector<Candidate> collect(const Prepared& p, const double* target) {
    std::vector<Candidate> cands;
    const int n = p.dim();
    p.enumerate(target, std::numeric_limits<double>::infinity(),
                [&](const long* u, double d, double bound) {
                    cands.push_back({VecZ(u, u + n), d});
                    double best = d;
                    for (const auto& c : cands) best = std::min(best, c.dist2);
                    double nb = best * (1.0 + kSlackRel) + 1e-300;
                    if (nb < bound) {
                        // Drop candidates that can no longer tie.
                        std::erase_if(cands, [&](const Candidate& c) { return c.dist2 > nb; });
                        return nb;
                    }
                    return bound;
                });
    return cands;
}

}  // namespace

ClosestSet closest_points(const Prepared& p, const Eigen::VectorXd& x, double tie_tol) {
    if (x.size() != p.dim()) throw UsageError("query point dimension mismatch");
    Eigen::VectorXd t = p.reduced_coords(x);
    std::vector<double> target(t.data(), t.data() + t.size());
    return classify(p, collect(p, target.data()), nullptr, tie_tol);
}

ClosestSet closest_points_coords(const Prepared& p, const std::vector<Rat>& coords,
                                 double tie_tol) {
    const int n = p.dim();
    if (static_cast<int>(coords.size()) != n) throw UsageError("query coordinate arity mismatch");
    // Exact coordinates w.r.t. the reduced basis: t_red = t_orig * Tinv.
    std::vector<Rat> tred(static_cast<size_t>(n));
    const TransMat& ti = p.t_inv();
    for (int j = 0; j < n; j++) {
        Rat acc;
        for (int i = 0; i < n; i++)
            acc += coords[static_cast<size_t>(i)] * Rat(ti[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        tred[static_cast<size_t>(j)] = acc;
    }
    std::vector<double> target(static_cast<size_t>(n));
    for (int j = 0; j < n; j++) target[static_cast<size_t>(j)] = tred[static_cast<size_t>(j)].get_d();
    return classify(p, collect(p, target.data()), &tred, tie_tol);
}

VecZ closest_one(const Prepared& p, const Eigen::VectorXd& x, double* dist2_out) {
    Eigen::VectorXd t = p.reduced_coords(x);
    const int n = p.dim();
    double target[Prepared::kMaxDim];
    for (int j = 0; j < n; j++) target[j] = t(j);
    long best[Prepared::kMaxDim];
    double bestd = std::numeric_limits<double>::infinity();
    p.enumerate(target, std::numeric_limits<double>::infinity(),
                [&](const long* u, double d, double bound) {
                    if (d < bestd) {
                        bestd = d;
                        std::copy(u, u + n, best);
                        return std::min(bound, d);
                    }
                    return bound;
                });
    if (dist2_out) *dist2_out = bestd;
    return map_to_original(p, best);
}

}  // namespace latq
