#include "latq/qmatrix.hpp"

#include "latq/error.hpp"

namespace latq {

QMat::QMat(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

QMat QMat::identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; i++) m.at(i, i) = Quad(ratq(1));
    return m;
}

QMat QMat::from_rows(const std::vector<std::vector<Quad>>& rows) {
    if (rows.empty()) throw UsageError("empty matrix");
    QMat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows_; i++) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != m.cols_)
            throw UsageError("ragged matrix rows");
        for (int j = 0; j < m.cols_; j++) m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return m;
}

int QMat::field() const {
    int d = 1;
    for (const auto& x : a_) d = Quad::unify(d, x.d());
    return d;
}

bool QMat::is_integer() const {
    for (const auto& x : a_)
        if (!x.is_integer()) return false;
    return true;
}

bool QMat::all_rational() const {
    for (const auto& x : a_)
        if (!x.is_rational()) return false;
    return true;
}

bool QMat::is_identity() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; i++)
        for (int j = 0; j < cols_; j++)
            if (at(i, j) != Quad(ratq(i == j ? 1 : 0))) return false;
    return true;
}

bool QMat::is_symmetric() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; i++)
        for (int j = i + 1; j < cols_; j++)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

QMat QMat::transpose() const {
    QMat m(cols_, rows_);
    for (int i = 0; i < rows_; i++)
        for (int j = 0; j < cols_; j++) m.at(j, i) = at(i, j);
    return m;
}

QMat QMat::scaled(const Quad& c) const {
    QMat m(rows_, cols_);
    for (int i = 0; i < rows_; i++)
        for (int j = 0; j < cols_; j++) m.at(i, j) = at(i, j) * c;
    return m;
}

QMat operator*(const QMat& a, const QMat& b) {
    if (a.cols_ != b.rows_) throw UsageError("matrix dimension mismatch");
    QMat m(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; i++)
        for (int k = 0; k < a.cols_; k++) {
            const Quad& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < b.cols_; j++) {
                if (b.at(k, j).is_zero()) continue;
                m.at(i, j) += aik * b.at(k, j);
            }
        }
    return m;
}

QMat operator+(const QMat& a, const QMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix dimension mismatch");
    QMat m(a.rows_, a.cols_);
    for (size_t i = 0; i < m.a_.size(); i++) m.a_[i] = a.a_[i] + b.a_[i];
    return m;
}

QMat operator-(const QMat& a, const QMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix dimension mismatch");
    QMat m(a.rows_, a.cols_);
    for (size_t i = 0; i < m.a_.size(); i++) m.a_[i] = a.a_[i] - b.a_[i];
    return m;
}

bool operator==(const QMat& a, const QMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

Quad QMat::det() const {
    if (!is_square()) throw UsageError("determinant of non-square matrix");
    QMat w = *this;
    Quad det(ratq(1));
    for (int c = 0; c < cols_; c++) {
        int p = -1;
        for (int r = c; r < rows_; r++)
            if (!w.at(r, c).is_zero()) {
                p = r;
                break;
            }
        if (p < 0) return Quad(ratq(0));
        if (p != c) {
            for (int j = 0; j < cols_; j++) std::swap(w.at(p, j), w.at(c, j));
            det = -det;
        }
        det *= w.at(c, c);
        Quad inv = Quad(ratq(1)) / w.at(c, c);
        for (int r = c + 1; r < rows_; r++) {
            if (w.at(r, c).is_zero()) continue;
            Quad f = w.at(r, c) * inv;
            for (int j = c; j < cols_; j++) w.at(r, j) -= f * w.at(c, j);
        }
    }
    return det;
}

QMat QMat::inverse() const {
    if (!is_square()) throw UsageError("inverse of non-square matrix");
    QMat w = *this;
    QMat inv = identity(rows_);
    for (int c = 0; c < cols_; c++) {
        int p = -1;
        for (int r = c; r < rows_; r++)
            if (!w.at(r, c).is_zero()) {
                p = r;
                break;
            }
        if (p < 0) throw ComputeError("singular matrix");
        if (p != c)
            for (int j = 0; j < cols_; j++) {
                std::swap(w.at(p, j), w.at(c, j));
                std::swap(inv.at(p, j), inv.at(c, j));
            }
        Quad f = Quad(ratq(1)) / w.at(c, c);
        for (int j = 0; j < cols_; j++) {
            w.at(c, j) *= f;
            inv.at(c, j) *= f;
        }
        for (int r = 0; r < rows_; r++) {
            if (r == c || w.at(r, c).is_zero()) continue;
            Quad g = w.at(r, c);
            for (int j = 0; j < cols_; j++) {
                w.at(r, j) -= g * w.at(c, j);
                inv.at(r, j) -= g * inv.at(c, j);
            }
        }
    }
    return inv;
}

std::vector<Quad> QMat::solve_left(const std::vector<Quad>& b) const {
    // x * M = b  <=>  M^T x^T = b^T; use the inverse (sizes are small).
    return mul_row(b, inverse());
}

std::vector<Quad> QMat::row(int i) const {
    std::vector<Quad> r(static_cast<size_t>(cols_));
    for (int j = 0; j < cols_; j++) r[static_cast<size_t>(j)] = at(i, j);
    return r;
}

Eigen::MatrixXd QMat::to_eigen() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; i++)
        for (int j = 0; j < cols_; j++) m(i, j) = at(i, j).to_double();
    return m;
}

std::vector<Quad> mul_row(const std::vector<Quad>& v, const QMat& m) {
    if (static_cast<int>(v.size()) != m.rows()) throw UsageError("row-vector dimension mismatch");
    std::vector<Quad> r(static_cast<size_t>(m.cols()));
    for (int i = 0; i < m.rows(); i++) {
        if (v[static_cast<size_t>(i)].is_zero()) continue;
        for (int j = 0; j < m.cols(); j++) r[static_cast<size_t>(j)] += v[static_cast<size_t>(i)] * m.at(i, j);
    }
    return r;
}

Quad quad_form(const std::vector<Quad>& v, const QMat& a) {
    std::vector<Quad> t = mul_row(v, a);
    Quad acc;
    for (size_t i = 0; i < v.size(); i++) acc += t[i] * v[i];
    return acc;
}

}  // namespace latq
