#pragma once
#include "latq/moments.hpp"

namespace latq::optimizer {

// U - (tr U / n) I.
Eigen::MatrixXd traceless(const Eigen::MatrixXd& u);

enum class PerturbVariant { kLinear, kExponential };

// Deformation towards an isotropic second moment: I - eps Ubar, or the
// volume-preserving exp(-eps Ubar) (scaling-and-squaring, determinant
// checked to 1e-10).
Eigen::MatrixXd perturbation(const Eigen::MatrixXd& ubar, double eps, PerturbVariant variant);

struct DescendConfig {
    long samples = 1000000;
    uint64_t seed = 1;
    int max_steps = 8;
    int workers = 0;
    double z_threshold = 4.0;
    PerturbVariant variant = PerturbVariant::kLinear;
};

struct DescendStep {
    double g_hat = 0.0;
    double g_stderr = 0.0;
    double max_abs_z = 0.0;
    double eps = 0.0;
    std::string eps_rule;  // "closed-form" or "line-search" ("" on the last step)
};

struct DescendState {
    Lattice lattice;  // generator after the last applied perturbation
    std::vector<DescendStep> history;
    std::string termination;
    MomentReport last;
};

// Iterative refinement: estimate the second-moment matrix, form its traceless
// part, pick a step size (closed-form when the family block structure is
// known, otherwise a 3-point parabolic line search with common random
// numbers), deform, repeat until isotropy holds within the noise.
DescendState descend(const Lattice& l0, const DescendConfig& cfg);

// Paired NSM difference G(l1) - G(l0) with common random numbers: the same
// uniform draw is quantized in both lattices sample by sample.
struct PairedDelta {
    double delta = 0.0;    // mean of the per-sample normalized differences
    double stderr_ = 0.0;
    double z = 0.0;
};
PairedDelta paired_nsm_delta(const Lattice& l0, const Lattice& l1, long samples,
                             uint64_t seed, int workers = 0);

struct ComponentNsm {
    Lattice lattice;
    double g;  // per-component NSM (exact or Monte Carlo)
};

struct ProductScales {
    std::vector<double> scales;  // normalized so the first equals 1
    double g_product;            // NSM of the optimally scaled product
};

// Scales equalizing the per-dimension second moments across components; the
// resulting NSM satisfies G^n = prod G_i^{n_i}.
ProductScales optimal_product_scales(const std::vector<ComponentNsm>& components);

}  // namespace latq::optimizer
