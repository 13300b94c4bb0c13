#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "latq/lll.hpp"

namespace latq {

using VecZ = std::vector<long>;

/// Immutable enumeration context: LLL-reduced basis, Cholesky data, inverse
/// transforms, and (when available) the exact Gram matrix of the reduced
/// basis for certified tie decisions. Safe to share across threads.
class Prepared {
public:
    static constexpr int kMaxDim = 24;

    explicit Prepared(const Lattice& lattice);

    const Lattice& original() const { return original_; }
    const Lattice& reduced() const { return lll_.reduced; }
    int dim() const { return n_; }
    bool has_exact_gram() const { return exact_gram_.has_value(); }
    const QMat& exact_gram_reduced() const { return *exact_gram_; }
    const TransMat& t() const { return lll_.t; }
    const TransMat& t_inv() const { return lll_.t_inv; }

    // Coordinates of an ambient point w.r.t. the reduced basis.
    Eigen::VectorXd reduced_coords(const Eigen::VectorXd& x) const;

    // Enumerates all u (reduced coords) with ||uB - tB||^2 <= bound, where t
    // is a target in reduced coordinates. Monotone zig-zag order per level.
    // `shrink`: callback may lower the bound (closest-point searches).
    void enumerate(const double* target, double bound,
                   const std::function<double(const long* u, double dist2, double bound)>& visit) const;

    const double* mu() const { return mu_.data(); }
    const double* weights() const { return w_.data(); }

private:
    int n_;
    Lattice original_;
    LLLResult lll_;
    std::vector<double> mu_;  // row-major n*n; mu[k*n+j] = R_kj / R_kk for j > k
    std::vector<double> w_;   // R_kk^2
    std::optional<QMat> exact_gram_;
    Eigen::MatrixXd reduced_inv_;
};

struct ClosestSet {
    double dist2 = 0.0;
    std::vector<VecZ> minimizers;  // u in ORIGINAL basis coordinates, lexicographic
    bool degenerate = false;       // a candidate fell between tie_tol and the slack band
    bool exact_ties = false;       // ties were certified with exact arithmetic
};

// All closest lattice points to the ambient point x (ties within tie_tol,
// relative on squared distance). Deterministic ordering.
ClosestSet closest_points(const Prepared& p, const Eigen::VectorXd& x, double tie_tol = 1e-9);

// Target supplied as exact rational coordinates w.r.t. the ORIGINAL basis;
// exact lattices get exact tie certification.
ClosestSet closest_points_coords(const Prepared& p, const std::vector<Rat>& coords,
                                 double tie_tol = 1e-9);

// Fast single-minimizer path for Monte Carlo: returns u (reduced coords ARE
// mapped back to original) and the squared distance.
VecZ closest_one(const Prepared& p, const Eigen::VectorXd& x, double* dist2_out);

// Maps reduced-basis integer coordinates back to the original basis.
VecZ map_to_original(const Prepared& p, const long* u_red);

}  // namespace latq
