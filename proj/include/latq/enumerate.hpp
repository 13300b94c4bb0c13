#pragma once
#include "latq/cvp.hpp"

namespace latq {

struct ThetaImage {
    // Cumulative point count at each shell radius: N includes the origin, so
    // the first implicit value is 1 at r = 0.
    std::vector<std::pair<double, long>> steps;  // (r^2, cumulative count)
};

struct ShortestInfo {
    double min_norm2 = 0.0;
    long kissing = 0;
};

// Visits every nonzero lattice point with squared norm <= r2 (both signs).
// Throws ComputeError when more than `cap` points would be emitted.
void enumerate_ball(const Prepared& p, double r2,
                    const std::function<void(const VecZ& u, double norm2)>& emit,
                    long cap = 20000000);

// Number of nonzero points with norm^2 <= r2, plus one for the origin.
long count_ball(const Prepared& p, double r2, long cap = 20000000);

// Shell-grouped cumulative counts up to r2_max; norms within shell_tol
// (relative) are merged into one shell.
ThetaImage theta_image(const Prepared& p, double r2_max, double shell_tol = 1e-9,
                       long cap = 20000000);

ShortestInfo shortest_vectors(const Prepared& p);

}  // namespace latq
