#pragma once
#include <Eigen/Dense>
#include <vector>

#include "latq/quad.hpp"

namespace latq {

/// Dense matrix over a fixed quadratic field (entries Quad; pure-rational
/// matrices use d = 1). Exact arithmetic throughout.
class QMat {
public:
    QMat() : rows_(0), cols_(0) {}
    QMat(int rows, int cols);
    static QMat identity(int n);
    static QMat from_rows(const std::vector<std::vector<Quad>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Quad& at(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    const Quad& at(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    // Unified field discriminant of all entries; throws FieldMismatch if mixed.
    int field() const;
    bool is_square() const { return rows_ == cols_; }
    bool is_integer() const;
    bool all_rational() const;
    bool is_identity() const;
    bool is_symmetric() const;

    QMat transpose() const;
    QMat scaled(const Quad& c) const;
    friend QMat operator*(const QMat& a, const QMat& b);
    friend QMat operator+(const QMat& a, const QMat& b);
    friend QMat operator-(const QMat& a, const QMat& b);
    friend bool operator==(const QMat& a, const QMat& b);

    Quad det() const;          // square only
    QMat inverse() const;      // throws ComputeError if singular
    // Solves x * (*this) = b for a row vector x.
    std::vector<Quad> solve_left(const std::vector<Quad>& b) const;

    std::vector<Quad> row(int i) const;
    Eigen::MatrixXd to_eigen() const;

private:
    int rows_, cols_;
    std::vector<Quad> a_;
};

// Row vector times matrix.
std::vector<Quad> mul_row(const std::vector<Quad>& v, const QMat& m);
// Quadratic form v * A * v^T.
Quad quad_form(const std::vector<Quad>& v, const QMat& a);

}  // namespace latq
