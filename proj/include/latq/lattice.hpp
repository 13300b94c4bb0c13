#pragma once
#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latq/qmatrix.hpp"

namespace latq {

struct LatticeMeta {
    std::string family;                 // e.g. "B14"; empty if anonymous
    std::map<std::string, Quad> params;   // exact parameter bindings
    std::map<std::string, double> fparams;  // float parameter bindings
};

/// A full-rank lattice given by a square generator matrix whose rows are the
/// basis vectors. Entries are either exact (one quadratic field) or floats.
/// Immutable after construction.
class Lattice {
public:
    static Lattice from_exact(QMat basis, LatticeMeta meta = {});
    static Lattice from_float(Eigen::MatrixXd basis, LatticeMeta meta = {});

    int dim() const { return n_; }
    bool is_exact() const { return exact_.has_value(); }
    const QMat& exact_basis() const;
    const Eigen::MatrixXd& basis() const { return approx_; }
    const LatticeMeta& meta() const { return meta_; }
    LatticeMeta& meta_mut() { return meta_; }

    QMat gram_exact() const;            // B B^T, exact entries
    Eigen::MatrixXd gram() const { return approx_ * approx_.transpose(); }

    Quad det_exact() const;             // signed determinant
    double det_abs() const;             // |det B| (exact when available)

    Lattice dual() const;               // generated by (B^T)^{-1}
    Lattice scaled(const Quad& a) const;
    Lattice scaled(double a) const;
    Lattice unit_volume() const;        // rescaled to |det| = 1 (float)

    // Basis change U * B for an integer unimodular U (same lattice).
    Lattice transformed(const std::vector<std::vector<long>>& u) const;

private:
    int n_ = 0;
    std::optional<QMat> exact_;
    Eigen::MatrixXd approx_;
    LatticeMeta meta_;
};

// Block-diagonal product of scaled components (all exact or all float).
Lattice product_scaled(const std::vector<std::pair<Lattice, Quad>>& comps);
Lattice product_scaled(const std::vector<std::pair<Lattice, double>>& comps);

}  // namespace latq
