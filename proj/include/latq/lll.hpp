#pragma once
#include <vector>

#include "latq/lattice.hpp"

namespace latq {

using TransMat = std::vector<std::vector<long>>;

struct LLLResult {
    Lattice reduced;   // same lattice, reduced basis (exact if input exact)
    TransMat t;        // reduced basis rows = t * original basis rows
    TransMat t_inv;    // inverse transform, also unimodular
};

// Floating-point LLL with Lovász parameter delta; the unimodular transform is
// tracked exactly in integers and applied to the exact basis when present.
LLLResult lll_reduce(const Lattice& lattice, double delta = 0.99);

}  // namespace latq
