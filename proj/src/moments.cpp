#include "latq/moments.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "latq/bigfloat.hpp"
#include "latq/enumerate.hpp"
#include "latq/error.hpp"
#include "latq/rng.hpp"

namespace latq {

namespace {

constexpr long kBatch = 8192;

// Neumaier compensated accumulator.
struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct BatchAcc {
    double d2 = 0.0, d4 = 0.0;
    std::vector<double> m1, m2;  // per-entry sums of e_i e_j and squares
    std::vector<double> g1, g2;  // per-group sums of the pooled statistic
    double max_d2 = 0.0;
};

// V^(2/n) with correct rounding so that exact power-of-two rescalings of the
// lattice change the normalization by exactly the expected factor.
double v_pow_2n(const Lattice& l) {
    BigFloat v = l.is_exact() ? BigFloat::of(l.exact_basis().det(), 40).abs()
                              : BigFloat::of_double(l.det_abs(), 40);
    return v.pow(ratq(2, l.dim())).to_double();
}

struct EngineRequest {
    bool matrix = false;
    const std::vector<PoolGroup>* groups = nullptr;
    bool track_max = false;
};

MomentReport run_engine(const Prepared& p, long samples, uint64_t seed, int workers,
                        const EngineRequest& req) {
    if (samples < 1) throw UsageError("sample count must be >= 1");
    const int n = p.dim();
    const Eigen::MatrixXd& basis = p.original().basis();
    const long nbatch = (samples + kBatch - 1) / kBatch;
    const size_t nsym = static_cast<size_t>(n) * (n + 1) / 2;
    const size_t ngroups = req.groups ? req.groups->size() : 0;

    std::vector<BatchAcc> batches(static_cast<size_t>(nbatch));
    std::atomic<long> next{0};

    auto worker = [&]() {
        std::vector<double> w(static_cast<size_t>(n));
        Eigen::VectorXd x(n), e(n);
        for (long b = next.fetch_add(1); b < nbatch; b = next.fetch_add(1)) {
            BatchAcc& acc = batches[static_cast<size_t>(b)];
            Kahan d2s, d4s;
            std::vector<Kahan> m1, m2, g1, g2;
            if (req.matrix) {
                m1.resize(nsym);
                m2.resize(nsym);
            }
            g1.resize(ngroups);
            g2.resize(ngroups);
            const long lo = b * kBatch;
            const long hi = std::min(samples, lo + kBatch);
            for (long s = lo; s < hi; s++) {
                for (int j = 0; j < n; j++)
                    w[static_cast<size_t>(j)] = uniform01(seed, static_cast<uint64_t>(s),
                                                          static_cast<uint32_t>(j));
                x.setZero();
                for (int j = 0; j < n; j++) x += w[static_cast<size_t>(j)] * basis.row(j).transpose();
                double d2 = 0.0;
                VecZ u = closest_one(p, x, &d2);
                e = x;
                for (int j = 0; j < n; j++)
                    e -= static_cast<double>(u[static_cast<size_t>(j)]) * basis.row(j).transpose();
                double d2e = e.squaredNorm();
                d2s.add(d2e);
                d4s.add(d2e * d2e);
                if (req.track_max) acc.max_d2 = std::max(acc.max_d2, d2e);
                if (req.matrix) {
                    size_t idx = 0;
                    for (int i = 0; i < n; i++)
                        for (int j = i; j < n; j++, idx++) {
                            double v = e(i) * e(j);
                            m1[idx].add(v);
                            m2[idx].add(v * v);
                        }
                }
                for (size_t g = 0; g < ngroups; g++) {
                    const PoolGroup& pg = (*req.groups)[g];
                    double acc_g = 0.0;
                    for (const auto& [i, j] : pg.entries) acc_g += e(i) * e(j);
                    acc_g /= static_cast<double>(pg.entries.size());
                    g1[g].add(acc_g);
                    g2[g].add(acc_g * acc_g);
                }
            }
            acc.d2 = d2s.value();
            acc.d4 = d4s.value();
            if (req.matrix) {
                acc.m1.resize(nsym);
                acc.m2.resize(nsym);
                for (size_t i = 0; i < nsym; i++) {
                    acc.m1[i] = m1[i].value();
                    acc.m2[i] = m2[i].value();
                }
            }
            acc.g1.resize(ngroups);
            acc.g2.resize(ngroups);
            for (size_t g = 0; g < ngroups; g++) {
                acc.g1[g] = g1[g].value();
                acc.g2[g] = g2[g].value();
            }
        }
    };

    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<long>(workers, nbatch);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; t++) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Deterministic merge in batch order.
    Kahan d2s, d4s;
    std::vector<Kahan> m1(req.matrix ? nsym : 0), m2(req.matrix ? nsym : 0);
    std::vector<Kahan> g1(ngroups), g2(ngroups);
    double max_d2 = 0.0;
    for (const auto& b : batches) {
        d2s.add(b.d2);
        d4s.add(b.d4);
        max_d2 = std::max(max_d2, b.max_d2);
        for (size_t i = 0; i < m1.size(); i++) {
            m1[i].add(b.m1[i]);
            m2[i].add(b.m2[i]);
        }
        for (size_t g = 0; g < ngroups; g++) {
            g1[g].add(b.g1[g]);
            g2[g].add(b.g2[g]);
        }
    }

    MomentReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.dim = n;
    rep.volume = p.original().det_abs();
    rep.v2n = v_pow_2n(p.original());
    const double nn = static_cast<double>(samples);
    const double norm = static_cast<double>(n) * rep.v2n;
    double mean_d2 = d2s.value() / nn;
    double var_d2 = std::max(0.0, (d4s.value() / nn - mean_d2 * mean_d2)) *
                    (samples > 1 ? nn / (nn - 1) : 1.0);
    rep.g_hat = mean_d2 / norm;
    rep.g_stderr = std::sqrt(var_d2 / nn) / norm;
    if (req.track_max) rep.pooled.push_back({"max_error2", max_d2, 0.0, 0.0, false});
    if (req.matrix) {
        rep.u_hat.resize(n, n);
        rep.u_stderr.resize(n, n);
        size_t idx = 0;
        for (int i = 0; i < n; i++)
            for (int j = i; j < n; j++, idx++) {
                double mean = m1[idx].value() / nn;
                double var = std::max(0.0, m2[idx].value() / nn - mean * mean) *
                             (samples > 1 ? nn / (nn - 1) : 1.0);
                double se = std::sqrt(var / nn);
                rep.u_hat(i, j) = rep.u_hat(j, i) = mean;
                rep.u_stderr(i, j) = rep.u_stderr(j, i) = se;
            }
    }
    if (req.groups) {
        for (size_t g = 0; g < ngroups; g++) {
            const PoolGroup& pg = (*req.groups)[g];
            double mean = g1[g].value() / nn;
            double var = std::max(0.0, g2[g].value() / nn - mean * mean) *
                         (samples > 1 ? nn / (nn - 1) : 1.0);
            double se = std::sqrt(var / nn);
            rep.pooled.push_back(
                {pg.name, mean, se, se > 0 ? mean / se : 0.0, pg.diagonal});
        }
    }
    return rep;
}

}  // namespace

MomentReport estimate_nsm(const Prepared& p, long samples, uint64_t seed, int workers) {
    EngineRequest req;
    return run_engine(p, samples, seed, workers, req);
}

MomentReport estimate_second_moment_matrix(const Prepared& p, long samples, uint64_t seed,
                                           int workers, const std::vector<PoolGroup>* groups) {
    EngineRequest req;
    req.matrix = true;
    req.groups = groups;
    return run_engine(p, samples, seed, workers, req);
}

std::vector<PoolGroup> pool_groups_for(const Lattice& lattice) {
    const std::string& fam = lattice.meta().family;
    std::vector<PoolGroup> out;
    auto diag_group = [&](const std::string& name, int lo, int hi) {
        PoolGroup g{name, {}, true};
        for (int i = lo; i < hi; i++) g.entries.emplace_back(i, i);
        out.push_back(std::move(g));
    };
    if (fam == "B13" || fam == "B13prime") {
        diag_group("diag_first8", 0, 8);
        diag_group("diag_last5", 8, 13);
        PoolGroup off{"offdiag_first8", {}, false};
        for (int i = 0; i < 8; i++)
            for (int j = i + 1; j < 8; j++) off.entries.emplace_back(i, j);
        out.push_back(std::move(off));
        PoolGroup rest{"offdiag_rest", {}, false};
        for (int i = 0; i < 13; i++)
            for (int j = std::max(i + 1, 8); j < 13; j++) rest.entries.emplace_back(i, j);
        out.push_back(std::move(rest));
    } else if (fam == "B14") {
        diag_group("diag_first10", 0, 10);
        diag_group("diag_last4", 10, 14);
        PoolGroup off{"offdiag_all", {}, false};
        for (int i = 0; i < 14; i++)
            for (int j = i + 1; j < 14; j++) off.entries.emplace_back(i, j);
        out.push_back(std::move(off));
    }
    return out;
}

ZfDiagnostic zamir_feder_diagnostic(const MomentReport& report, double threshold) {
    if (report.u_hat.size() == 0)
        throw UsageError("diagnostic requires a second-moment matrix estimate");
    ZfDiagnostic out;
    const int n = report.dim;
    double tr = report.u_hat.trace();
    Eigen::MatrixXd bar = report.u_hat - (tr / n) * Eigen::MatrixXd::Identity(n, n);
    out.traceless_norm = bar.norm();

    std::vector<PooledStat> diag_pools;
    if (!report.pooled.empty()) {
        for (const auto& ps : report.pooled) {
            if (ps.name == "max_error2") continue;
            if (ps.diagonal) {
                diag_pools.push_back(ps);
            } else {
                out.checks.push_back(ps);
            }
        }
    } else {
        for (int i = 0; i < n; i++)
            for (int j = i + 1; j < n; j++) {
                double se = report.u_stderr(i, j);
                PooledStat ps{"u_" + std::to_string(i) + "_" + std::to_string(j),
                              report.u_hat(i, j), se, se > 0 ? report.u_hat(i, j) / se : 0.0,
                              false};
                out.checks.push_back(ps);
            }
        for (int i = 0; i < n; i++) {
            PooledStat ps{"diag_" + std::to_string(i), report.u_hat(i, i),
                          report.u_stderr(i, i), 0.0, true};
            diag_pools.push_back(ps);
        }
    }
    // Diagonal isotropy: pairwise differences between diagonal pools.
    for (size_t a = 0; a < diag_pools.size(); a++)
        for (size_t b = a + 1; b < diag_pools.size(); b++) {
            double diff = diag_pools[a].mean - diag_pools[b].mean;
            double se = std::hypot(diag_pools[a].stderr_, diag_pools[b].stderr_);
            PooledStat ps{diag_pools[a].name + "-" + diag_pools[b].name, diff, se,
                          se > 0 ? diff / se : 0.0, true};
            out.checks.push_back(ps);
        }
    for (const auto& c : out.checks) out.max_abs_z = std::max(out.max_abs_z, std::fabs(c.z));
    out.verdict = out.max_abs_z < threshold ? "consistent with local optimality" : "inconsistent";
    return out;
}

namespace {
// vol(B^n(r)) = pi^(n/2) r^n / Gamma(n/2 + 1), evaluated at 60 digits.
double ball_volume(int n, double r) {
    const int digits = 60;
    BigFloat pi = BigFloat::pi(digits);
    BigFloat vol = pi.pow(ratq(n, 2));
    BigFloat rr = BigFloat::of_double(r, digits);
    vol = vol * rr.pow(ratq(n));
    mpfr_t g;
    mpfr_init2(g, 256);
    mpfr_set_d(g, n / 2.0 + 1.0, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    BigFloat gamma(digits);
    mpfr_set(gamma.raw_mut(), g, MPFR_RNDN);
    mpfr_clear(g);
    gamma.set_err(0.0);
    return (vol / gamma).to_double();
}

double meta_param(const Lattice& l, const std::string& key, double dflt) {
    auto it = l.meta().params.find(key);
    if (it != l.meta().params.end()) return it->second.to_double();
    auto fit = l.meta().fparams.find(key);
    if (fit != l.meta().fparams.end()) return fit->second;
    return dflt;
}
}  // namespace

GeometryReport geometry_report(const Prepared& p, const std::string& family_hint,
                               long mc_samples, uint64_t seed, int workers) {
    GeometryReport out;
    ShortestInfo si = shortest_vectors(p);
    out.min_norm2 = si.min_norm2;
    out.kissing = si.kissing;
    out.packing_radius = std::sqrt(si.min_norm2) / 2.0;
    double v = p.original().det_abs();
    out.packing_density = ball_volume(p.dim(), out.packing_radius) / v;

    std::string fam = family_hint.empty() ? p.original().meta().family : family_hint;
    if (fam == "B14") {
        double a = meta_param(p.original(), "a", 0.0);
        if (a > 0) {
            double a2 = a * a;
            out.covering_radius_sq = (a2 + 3.0) * (3.0 * a2 + 1.0) / (6.0 * a2);
            out.covering_radius = std::sqrt(out.covering_radius_sq);
            out.thickness = ball_volume(14, out.covering_radius) / v;
            out.has_covering = true;
        }
    } else if (fam == "B13" || fam == "B13prime") {
        double a2 = meta_param(p.original(), "a2", 1.0);
        double a3 = meta_param(p.original(), "a3", 1.0);
        double v2 = a2 * a2, v3 = a3 * a3;
        double inner = 64.0 * v2 * v2 + 48.0 * v2 * v3 - 64.0 * v2 + 9.0 * v3 * v3 -
                       8.0 * v3 + 144.0;
        out.covering_radius = std::sqrt(2.0) * std::sqrt(inner) / 16.0;
        out.covering_radius_sq = out.covering_radius * out.covering_radius;
        out.thickness = ball_volume(13, out.covering_radius) / v;
        out.has_covering = true;
    }

    EngineRequest req;
    req.track_max = true;
    MomentReport mc = run_engine(p, mc_samples, seed, workers, req);
    out.covering_lower = std::sqrt(mc.pooled.at(0).mean);
    return out;
}

}  // namespace latq
