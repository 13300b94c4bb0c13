#include "latq/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <unsupported/Eigen/MatrixFunctions>

#include "latq/error.hpp"
#include "latq/rng.hpp"

namespace latq::optimizer {

Eigen::MatrixXd traceless(const Eigen::MatrixXd& u) {
    if (u.rows() != u.cols()) throw UsageError("traceless part requires a square matrix");
    const auto n = u.rows();
    return u - (u.trace() / static_cast<double>(n)) * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd perturbation(const Eigen::MatrixXd& ubar, double eps, PerturbVariant variant) {
    const auto n = ubar.rows();
    if (variant == PerturbVariant::kLinear)
        return Eigen::MatrixXd::Identity(n, n) - eps * ubar;
    Eigen::MatrixXd a = (-eps * ubar).exp();
    double det = a.determinant();
    if (std::fabs(det - 1.0) > 1e-10)
        throw ComputeError("volume-preserving perturbation drifted beyond tolerance");
    return a;
}

namespace {

// Pooled second-moment entries in the family block order produced by
// pool_groups_for: first-block diagonal, second-block diagonal, off-diagonals.
struct PooledAbg {
    bool ok = false;
    double first_diag = 0.0, second_diag = 0.0, off = 0.0;
};

PooledAbg pooled_structure(const MomentReport& rep) {
    PooledAbg out;
    double fd = 0, sd = 0, off = 0;
    int found = 0;
    for (const auto& ps : rep.pooled) {
        if (ps.name == "diag_first8" || ps.name == "diag_first10") {
            fd = ps.mean;
            found++;
        } else if (ps.name == "diag_last5" || ps.name == "diag_last4") {
            sd = ps.mean;
            found++;
        } else if (ps.name == "offdiag_first8" || ps.name == "offdiag_all") {
            off = ps.mean;
            found++;
        }
    }
    if (found == 3) {
        out.ok = true;
        out.first_diag = fd;
        out.second_diag = sd;
        out.off = off;
    }
    return out;
}

}  // namespace

PairedDelta paired_nsm_delta(const Lattice& l0, const Lattice& l1, long samples,
                             uint64_t seed, int workers) {
    if (l0.dim() != l1.dim()) throw UsageError("paired comparison requires equal dimensions");
    Prepared p0(l0), p1(l1);
    const int n = l0.dim();
    const double norm0 = static_cast<double>(n) * std::pow(l0.det_abs(), 2.0 / n);
    const double norm1 = static_cast<double>(n) * std::pow(l1.det_abs(), 2.0 / n);

    constexpr long kBatch = 8192;
    const long nbatch = (samples + kBatch - 1) / kBatch;
    struct Acc {
        double d = 0.0, d2 = 0.0;
    };
    std::vector<Acc> batches(static_cast<size_t>(nbatch));
    std::atomic<long> next{0};
    auto work = [&]() {
        Eigen::VectorXd x0(n), x1(n), e(n);
        for (long b = next.fetch_add(1); b < nbatch; b = next.fetch_add(1)) {
            double s1 = 0, s2 = 0;
            const long lo = b * kBatch, hi = std::min(samples, lo + kBatch);
            for (long s = lo; s < hi; s++) {
                x0.setZero();
                x1.setZero();
                for (int j = 0; j < n; j++) {
                    double w = uniform01(seed, static_cast<uint64_t>(s), static_cast<uint32_t>(j));
                    x0 += w * l0.basis().row(j).transpose();
                    x1 += w * l1.basis().row(j).transpose();
                }
                double a0 = 0, a1 = 0;
                VecZ u0 = closest_one(p0, x0, &a0);
                VecZ u1 = closest_one(p1, x1, &a1);
                e = x0;
                for (int j = 0; j < n; j++)
                    e -= static_cast<double>(u0[static_cast<size_t>(j)]) * l0.basis().row(j).transpose();
                double g0 = e.squaredNorm() / norm0;
                e = x1;
                for (int j = 0; j < n; j++)
                    e -= static_cast<double>(u1[static_cast<size_t>(j)]) * l1.basis().row(j).transpose();
                double g1 = e.squaredNorm() / norm1;
                double d = g1 - g0;
                s1 += d;
                s2 += d * d;
            }
            batches[static_cast<size_t>(b)] = {s1, s2};
        }
    };
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1 || nbatch <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; t++) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    double s1 = 0, s2 = 0;
    for (const auto& b : batches) {
        s1 += b.d;
        s2 += b.d2;
    }
    PairedDelta out;
    const double nn = static_cast<double>(samples);
    out.delta = s1 / nn;
    double var = std::max(0.0, s2 / nn - out.delta * out.delta) * (nn / (nn - 1));
    out.stderr_ = std::sqrt(var / nn);
    out.z = out.stderr_ > 0 ? out.delta / out.stderr_ : 0.0;
    return out;
}

DescendState descend(const Lattice& l0, const DescendConfig& cfg) {
    if (cfg.max_steps < 1) throw UsageError("descend requires max_steps >= 1");
    DescendState state;
    state.lattice = Lattice::from_float(l0.basis(), l0.meta());
    auto groups = pool_groups_for(l0);

    for (int step = 0; step < cfg.max_steps; step++) {
        Prepared prep(state.lattice);
        MomentReport rep = estimate_second_moment_matrix(
            prep, cfg.samples, cfg.seed + static_cast<uint64_t>(step), cfg.workers,
            groups.empty() ? nullptr : &groups);
        ZfDiagnostic zf = zamir_feder_diagnostic(rep, cfg.z_threshold);
        DescendStep h{rep.g_hat, rep.g_stderr, zf.max_abs_z, 0.0, ""};
        if (zf.max_abs_z < cfg.z_threshold) {
            state.history.push_back(h);
            state.termination = "converged at statistical resolution (" + zf.verdict + ")";
            state.last = rep;
            return state;
        }

        Eigen::MatrixXd ubar = traceless(rep.u_hat);
        double eps;
        PooledAbg pooled = pooled_structure(rep);
        if (pooled.ok) {
            // Closed-form step: zero the off-diagonal block to first order.
            const double n = rep.dim;
            double denom = 2.0 * (-5.0 * pooled.second_diag + 18.0 * pooled.first_diag +
                                  78.0 * pooled.off);
            eps = denom != 0 ? n / denom : 1.0;
            h.eps_rule = "closed-form";
        } else {
            // 3-point parabolic line search on the MC estimate with common
            // random numbers (the paired engine reuses the sample stream).
            double e0 = rep.dim / (2.0 * rep.u_hat.trace());
            auto g_at = [&](double e) {
                if (e == 0.0) return 0.0;
                Eigen::MatrixXd a = perturbation(ubar, e, cfg.variant);
                Lattice trial = Lattice::from_float(state.lattice.basis() * a);
                return paired_nsm_delta(state.lattice, trial, cfg.samples / 4 + 1,
                                        cfg.seed ^ 0x5bd1e995, cfg.workers)
                    .delta;
            };
            double g1 = g_at(e0), g2 = g_at(2 * e0);
            double curv = g2 - 2 * g1;  // relative to g0 = 0
            if (curv <= 0) {
                eps = e0;
            } else {
                eps = e0 * (4 * g1 - g2) / (-2 * curv);
                eps = std::clamp(eps, 0.25 * e0, 3.0 * e0);
            }
            h.eps_rule = "line-search";
        }
        h.eps = eps;
        state.history.push_back(h);
        Eigen::MatrixXd a = perturbation(ubar, eps, cfg.variant);
        state.lattice = Lattice::from_float(state.lattice.basis() * a, state.lattice.meta());
        state.last = rep;
    }
    state.termination = "step budget exhausted";
    return state;
}

ProductScales optimal_product_scales(const std::vector<ComponentNsm>& components) {
    if (components.empty()) throw UsageError("product of zero components");
    ProductScales out;
    int n = 0;
    double log_g = 0.0;
    std::vector<double> per_dim;  // V_i^{2/n_i} G_i of the unscaled components
    for (const auto& c : components) {
        int ni = c.lattice.dim();
        n += ni;
        log_g += ni * std::log(c.g);
        per_dim.push_back(std::pow(c.lattice.det_abs(), 2.0 / ni) * c.g);
    }
    out.g_product = std::exp(log_g / n);
    out.scales.resize(components.size());
    for (size_t i = 0; i < components.size(); i++)
        out.scales[i] = std::sqrt(per_dim[0] / per_dim[i]);
    return out;
}

}  // namespace latq::optimizer
