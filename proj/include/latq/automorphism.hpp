#pragma once
#include "latq/lattice.hpp"

namespace latq {

// True iff M is orthogonal (M M^T = I, exact) and B M B^{-1} is an integer
// matrix, i.e. right-multiplication by M permutes the lattice.
bool verify_automorphism(const Lattice& lattice, const QMat& m);

}  // namespace latq
