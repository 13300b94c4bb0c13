#include "latq/enumerate.hpp"

#include <algorithm>
#include <cmath>

#include "latq/error.hpp"

namespace latq {

void enumerate_ball(const Prepared& p, double r2,
                    const std::function<void(const VecZ& u, double norm2)>& emit,
                    long cap) {
    if (r2 < 0) throw UsageError("ball radius must be nonnegative");
    const int n = p.dim();
    std::vector<double> target(static_cast<size_t>(n), 0.0);
    long count = 0;
    // Tiny relative headroom so shell members are not lost to rounding.
    double bound = r2 * (1.0 + 1e-12);
    p.enumerate(target.data(), bound, [&](const long* u, double d, double b) {
        bool zero = true;
        for (int i = 0; i < n; i++)
            if (u[i] != 0) {
                zero = false;
                break;
            }
        if (!zero) {
            if (++count > cap) throw ComputeError("ball enumeration exceeded the point cap");
            emit(map_to_original(p, u), d);
        }
        return b;
    });
}

long count_ball(const Prepared& p, double r2, long cap) {
    long n = 0;
    enumerate_ball(p, r2, [&](const VecZ&, double) { n++; }, cap);
    return n + 1;
}

ThetaImage theta_image(const Prepared& p, double r2_max, double shell_tol, long cap) {
    if (!(r2_max > 0)) throw UsageError("theta image requires r2_max > 0");
    std::vector<double> norms;
    enumerate_ball(p, r2_max, [&](const VecZ&, double d) { norms.push_back(d); }, cap);
    std::sort(norms.begin(), norms.end());
    ThetaImage img;
    long cum = 1;  // origin
    size_t i = 0;
    while (i < norms.size()) {
        size_t j = i;
        double shell = norms[i];
        while (j < norms.size() && norms[j] <= shell * (1.0 + shell_tol)) j++;
        cum += static_cast<long>(j - i);
        // Representative radius: mean of the shell (members differ by <= tol).
        double sum = 0;
        for (size_t k = i; k < j; k++) sum += norms[k];
        img.steps.emplace_back(sum / static_cast<double>(j - i), cum);
        i = j;
    }
    return img;
}

ShortestInfo shortest_vectors(const Prepared& p) {
    const int n = p.dim();
    // Upper bound: the shortest reduced basis row.
    const Eigen::MatrixXd& b = p.reduced().basis();
    double ub = b.row(0).squaredNorm();
    for (int i = 1; i < n; i++) ub = std::min(ub, b.row(i).squaredNorm());

    double best = ub;
    long count = 0;
    std::vector<double> target(static_cast<size_t>(n), 0.0);
    p.enumerate(target.data(), ub * (1.0 + 1e-12), [&](const long* u, double d, double bnd) {
        bool zero = true;
        for (int i = 0; i < n; i++)
            if (u[i] != 0) {
                zero = false;
                break;
            }
        if (zero) return bnd;
        if (d < best * (1.0 - 1e-9)) {
            best = d;
            count = 1;
            return best * (1.0 + 1e-9);
        }
        if (d <= best * (1.0 + 1e-9)) count++;
        return bnd;
    });
    return {best, count};
}

}  // namespace latq
