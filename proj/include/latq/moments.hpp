#pragma once
#include <string>

#include "latq/cvp.hpp"

namespace latq {

/// Entries of the second-moment matrix pooled before testing, following the
/// block structure the lattice family is known to have. Pooling averages the
/// per-sample statistic over the group, which resolves effects far below the
/// per-entry Monte Carlo noise.
struct PoolGroup {
    std::string name;
    std::vector<std::pair<int, int>> entries;  // (i, j) with i <= j
    bool diagonal = false;
};

struct PooledStat {
    std::string name;
    double mean = 0.0;
    double stderr_ = 0.0;
    double z = 0.0;          // mean / stderr for off-diagonal pools
    bool diagonal = false;
};

struct MomentReport {
    double g_hat = 0.0;
    double g_stderr = 0.0;
    Eigen::MatrixXd u_hat;      // empty unless the matrix was requested
    Eigen::MatrixXd u_stderr;
    long samples = 0;
    uint64_t seed = 0;
    double volume = 0.0;        // V = |det B|
    double v2n = 0.0;           // V^{2/n}, correctly rounded
    int dim = 0;
    std::vector<PooledStat> pooled;
};

// Uniform sampling over the fundamental parallelepiped of the generator,
// quantization by closest-point search, deterministic for a fixed seed at
// any worker count.
MomentReport estimate_nsm(const Prepared& p, long samples, uint64_t seed, int workers = 0);

MomentReport estimate_second_moment_matrix(const Prepared& p, long samples, uint64_t seed,
                                           int workers = 0,
                                           const std::vector<PoolGroup>* groups = nullptr);

// Known block structures of the second-moment matrix ("B13", "B13prime",
// "B14"); empty for other families (per-entry analysis applies).
std::vector<PoolGroup> pool_groups_for(const Lattice& lattice);

struct ZfDiagnostic {
    double traceless_norm = 0.0;  // Frobenius norm of U - (tr U / n) I
    double max_abs_z = 0.0;
    std::string verdict;          // "consistent with local optimality" or "inconsistent"
    std::vector<PooledStat> checks;
};

// Zamir-Feder necessary condition: U proportional to the identity. Uses the
// pooled statistics when present, per-entry z-scores otherwise.
ZfDiagnostic zamir_feder_diagnostic(const MomentReport& report, double threshold = 4.0);

struct GeometryReport {
    double min_norm2 = 0.0;
    long kissing = 0;
    double packing_radius = 0.0;      // rho = sqrt(min_norm2) / 2
    double packing_density = 0.0;     // vol(B^n(rho)) / V
    bool has_covering = false;        // closed forms only for B13 / B14
    double covering_radius = 0.0;
    double covering_radius_sq = 0.0;
    double thickness = 0.0;           // vol(B^n(R)) / V
    double covering_lower = 0.0;      // max quantization error over the MC probe
};

GeometryReport geometry_report(const Prepared& p, const std::string& family_hint = "",
                               long mc_samples = 100000, uint64_t seed = 1,
                               int workers = 0);

}  // namespace latq
