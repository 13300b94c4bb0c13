#pragma once
#include <cstdint>
#include <string>

#include "latq/cvp.hpp"

namespace latq {

/// Facet normals of the Voronoi region, as integer coordinate vectors in the
/// original basis. Closed under negation; count equals the facet count.
struct RelevantVectorSet {
    std::vector<VecZ> vectors;       // sorted lexicographically, both signs
    std::vector<VecZ> flagged_cosets;  // near-degenerate ties needing manual review
    long facet_count() const { return static_cast<long>(vectors.size()); }
    uint64_t uset_hash() const;      // order-independent fingerprint of the set
};

// Classic coset scan: for each nonzero c in {0,1}^n, all closest points to
// c B / 2; a coset with exactly two minimizers contributes one +- pair.
// Requires n <= 16 (2^n closest-point calls). `workers` 0 = all cores.
RelevantVectorSet relevant_vectors(const Prepared& p, int workers = 0);

struct PhaseReport {
    bool stable = false;
    std::vector<uint64_t> uset_hashes;   // one per parameter point
    std::vector<long> facet_counts;
    std::vector<long> degenerate_counts;
};

// Condition (i) of the phase test: the integer coordinate sets of the
// relevant vectors must coincide at every parameter point of the family.
// Family "B14" takes one parameter per point; "B13" takes (a2, a3).
PhaseReport phase_condition_i(const std::string& family,
                              const std::vector<std::vector<double>>& param_points,
                              int workers = 0);

}  // namespace latq
