#pragma once
#include <vector>

#include "latq/rational.hpp"

namespace latq {

using IntMat = std::vector<std::vector<Int>>;

// Hermite normal form basis of the row span of `rows` (m x n, m >= n, row
// rank n). Returns an n x n row-echelon basis with positive pivots and
// entries above each pivot reduced modulo it. Throws ComputeError if the
// rows do not span an n-dimensional lattice.
IntMat hnf_row_basis(const IntMat& rows, int n);

Int int_det(const IntMat& m);  // exact determinant (Bareiss)

}  // namespace latq
