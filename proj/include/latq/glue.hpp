#pragma once
#include <vector>

#include "latq/lattice.hpp"

namespace latq {

/// A product lattice together with generators of a finite glue group: the
/// glued lattice is the union of the cosets product + g over the group
/// generated by the given vectors modulo the product lattice.
struct GlueSpec {
    Lattice product;
    std::vector<std::vector<Quad>> generators;  // ambient coordinates, exact
    std::vector<Eigen::VectorXd> generators_f;  // ambient coordinates, float
    long order_cap = 1 << 16;
};

struct GlueResult {
    Lattice lattice;
    long group_order;
};

// Exact gluing: expresses each generator in coordinates of the product basis
// (rational, denominators dividing the group order), generates the finite
// group modulo Z^n, verifies closure, and extracts an integer HNF basis.
// Throws ComputeError if a generator has order above order_cap or the
// configuration does not close into a lattice.
GlueResult glue(const GlueSpec& spec);

}  // namespace latq
