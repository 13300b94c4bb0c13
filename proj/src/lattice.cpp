#include "latq/lattice.hpp"

#include <cmath>

#include "latq/error.hpp"

namespace latq {

Lattice Lattice::from_exact(QMat basis, LatticeMeta meta) {
    if (!basis.is_square()) throw UsageError("generator matrix must be square");
    Lattice l;
    l.n_ = basis.rows();
    basis.field();  // validates a single quadratic field
    l.approx_ = basis.to_eigen();
    l.exact_ = std::move(basis);
    l.meta_ = std::move(meta);
    if (l.exact_->det().is_zero()) throw UsageError("singular generator matrix");
    return l;
}

Lattice Lattice::from_float(Eigen::MatrixXd basis, LatticeMeta meta) {
    if (basis.rows() != basis.cols()) throw UsageError("generator matrix must be square");
    Lattice l;
    l.n_ = static_cast<int>(basis.rows());
    l.approx_ = std::move(basis);
    l.meta_ = std::move(meta);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(l.approx_);
    if (!lu.isInvertible()) throw UsageError("singular generator matrix");
    return l;
}

const QMat& Lattice::exact_basis() const {
    if (!exact_) throw UsageError("lattice has no exact basis");
    return *exact_;
}

QMat Lattice::gram_exact() const {
    const QMat& b = exact_basis();
    return b * b.transpose();
}

Quad Lattice::det_exact() const { return exact_basis().det(); }

double Lattice::det_abs() const {
    if (exact_) return std::abs(exact_->det().to_double());
    return std::abs(approx_.determinant());
}

Lattice Lattice::dual() const {
    LatticeMeta m = meta_;
    if (!m.family.empty()) m.family += "*";
    if (exact_) return from_exact(exact_->transpose().inverse(), std::move(m));
    return from_float(approx_.transpose().inverse(), std::move(m));
}

Lattice Lattice::scaled(const Quad& a) const {
    if (a.sign() <= 0) throw UsageError("lattice scale must be positive");
    if (exact_) return from_exact(exact_->scaled(a), meta_);
    return from_float(approx_ * a.to_double(), meta_);
}

Lattice Lattice::scaled(double a) const {
    if (!(a > 0)) throw UsageError("lattice scale must be positive");
    return from_float(approx_ * a, meta_);
}

Lattice Lattice::unit_volume() const {
    double v = det_abs();
    return from_float(approx_ * std::pow(v, -1.0 / n_), meta_);
}

Lattice Lattice::transformed(const std::vector<std::vector<long>>& u) const {
    if (static_cast<int>(u.size()) != n_) throw UsageError("transform dimension mismatch");
    if (exact_) {
        QMat t(n_, n_);
        for (int i = 0; i < n_; i++)
            for (int j = 0; j < n_; j++) t.at(i, j) = Quad(ratq(u[static_cast<size_t>(i)][static_cast<size_t>(j)]));
        return from_exact(t * *exact_, meta_);
    }
    Eigen::MatrixXd t(n_, n_);
    for (int i = 0; i < n_; i++)
        for (int j = 0; j < n_; j++) t(i, j) = static_cast<double>(u[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return from_float(t * approx_, meta_);
}

Lattice product_scaled(const std::vector<std::pair<Lattice, Quad>>& comps) {
    if (comps.empty()) throw UsageError("product of zero lattices");
    int n = 0;
    for (const auto& [l, a] : comps) {
        if (!l.is_exact()) throw UsageError("exact product requires exact components");
        if (a.sign() <= 0) throw UsageError("component scale must be positive");
        n += l.dim();
    }
    QMat b(n, n);
    int off = 0;
    for (const auto& [l, a] : comps) {
        const QMat& c = l.exact_basis();
        for (int i = 0; i < l.dim(); i++)
            for (int j = 0; j < l.dim(); j++) b.at(off + i, off + j) = c.at(i, j) * a;
        off += l.dim();
    }
    return Lattice::from_exact(std::move(b));
}

Lattice product_scaled(const std::vector<std::pair<Lattice, double>>& comps) {
    if (comps.empty()) throw UsageError("product of zero lattices");
    int n = 0;
    for (const auto& [l, a] : comps) {
        if (!(a > 0)) throw UsageError("component scale must be positive");
        n += l.dim();
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    int off = 0;
    for (const auto& [l, a] : comps) {
        b.block(off, off, l.dim(), l.dim()) = l.basis() * a;
        off += l.dim();
    }
    return Lattice::from_float(std::move(b));
}

}  // namespace latq
