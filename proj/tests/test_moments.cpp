#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "latq/catalog.hpp"
#include "latq/moments.hpp"
#include "latq/rng.hpp"

using namespace latq;
namespace cat = latq::catalog;

TEST_CASE("counter rng: reproducible, coordinate-independent, uniform-ish") {
    CHECK(uniform01(42, 7, 3) == uniform01(42, 7, 3));
    CHECK(uniform01(42, 7, 3) != uniform01(42, 7, 4));
    CHECK(uniform01(42, 8, 3) != uniform01(42, 7, 3));
    CHECK(uniform01(43, 7, 3) != uniform01(42, 7, 3));
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; i++) sum += uniform01(1, static_cast<uint64_t>(i), 0);
    double mean = sum / n;
    // std of the mean is 1/sqrt(12 n) ~ 0.0009
    CHECK(std::fabs(mean - 0.5) < 0.005);
}

TEST_CASE("estimate_nsm on Z^1 agrees with 1/12") {
    Prepared p(cat::zn(1));
    MomentReport r = estimate_nsm(p, 1000000, 7);
    CHECK(std::fabs(r.g_hat - 1.0 / 12.0) < 4.0 * r.g_stderr);
    CHECK(r.g_stderr < 1e-4);
}

TEST_CASE("determinism: identical reports at any worker count") {
    Prepared p(cat::dn(4));
    MomentReport a = estimate_nsm(p, 40000, 99, 1);
    MomentReport b = estimate_nsm(p, 40000, 99, 3);
    CHECK(a.g_hat == b.g_hat);
    CHECK(a.g_stderr == b.g_stderr);
    auto groups = pool_groups_for(cat::b13prime());
    Prepared q(cat::b13prime());
    MomentReport ma = estimate_second_moment_matrix(q, 20000, 5, 1, &groups);
    MomentReport mb = estimate_second_moment_matrix(q, 20000, 5, 4, &groups);
    CHECK((ma.u_hat - mb.u_hat).cwiseAbs().maxCoeff() == 0.0);
    for (size_t g = 0; g < ma.pooled.size(); g++) {
        CHECK(ma.pooled[g].mean == mb.pooled[g].mean);
        CHECK(ma.pooled[g].stderr_ == mb.pooled[g].stderr_);
    }
}

TEST_CASE("scale property: power-of-two rescaling reproduces g_hat bit-exactly") {
    Prepared p(cat::dn(3));
    Prepared p2(cat::dn(3).scaled(Quad(ratq(2))));
    MomentReport a = estimate_nsm(p, 30000, 11);
    MomentReport b = estimate_nsm(p2, 30000, 11);
    CHECK(a.g_hat == b.g_hat);
    // General scales agree to rounding.
    Prepared p3(cat::dn(3).scaled(Quad(ratq(3))));
    MomentReport c = estimate_nsm(p3, 30000, 11);
    CHECK(c.g_hat == doctest::Approx(a.g_hat).epsilon(1e-12));
}

TEST_CASE("trace of the second-moment matrix reproduces the NSM estimate") {
    Prepared p(cat::dn(4));
    MomentReport r = estimate_second_moment_matrix(p, 50000, 3);
    double g_from_trace = r.u_hat.trace() / (r.dim * r.v2n);
    CHECK(g_from_trace == doctest::Approx(r.g_hat).epsilon(1e-13));
    CHECK((r.u_hat - r.u_hat.transpose()).norm() == 0.0);
}

namespace {
// Exact NSM of the hexagonal lattice by triangulating its Voronoi cell:
// vertices from exact bisector intersections, then the triangle second-moment
// formula. Fully independent of the Monte Carlo path.
double hexagonal_nsm_oracle() {
    Lattice a2 = cat::a2();
    const QMat& b = a2.exact_basis();
    // All norm-1 neighbors by brute force over small coefficients.
    std::vector<std::vector<Quad>> neighbors;
    for (long u0 = -2; u0 <= 2; u0++)
        for (long u1 = -2; u1 <= 2; u1++) {
            if (u0 == 0 && u1 == 0) continue;
            std::vector<Quad> v(2);
            for (int j = 0; j < 2; j++)
                v[static_cast<size_t>(j)] =
                    Quad(ratq(u0)) * b.at(0, j) + Quad(ratq(u1)) * b.at(1, j);
            Quad norm2 = v[0] * v[0] + v[1] * v[1];
            if (norm2 == Quad(ratq(1))) neighbors.push_back(v);
        }
    REQUIRE(neighbors.size() == 6);
    std::sort(neighbors.begin(), neighbors.end(),
              [](const std::vector<Quad>& x, const std::vector<Quad>& y) {
                  return std::atan2(x[1].to_double(), x[0].to_double()) <
                         std::atan2(y[1].to_double(), y[0].to_double());
              });
    // Vertex between adjacent neighbors v, w: x . v = |v|^2/2, x . w = |w|^2/2.
    auto vertex = [](const std::vector<Quad>& v, const std::vector<Quad>& w) {
        QMat m(2, 2);
        m.at(0, 0) = v[0];
        m.at(0, 1) = v[1];
        m.at(1, 0) = w[0];
        m.at(1, 1) = w[1];
        std::vector<Quad> rhs = {(v[0] * v[0] + v[1] * v[1]) * Quad(ratq(1, 2)),
                                 (w[0] * w[0] + w[1] * w[1]) * Quad(ratq(1, 2))};
        // Solve m x^T = rhs^T, i.e. x = rhs * (m^{-1})^T.
        return mul_row(rhs, m.inverse().transpose());
    };
    Quad integral;  // sum over triangles (0, P, Q) of area/6 (|P|^2+|Q|^2+P.Q)
    for (size_t k = 0; k < 6; k++) {
        auto pv = vertex(neighbors[k], neighbors[(k + 1) % 6]);
        auto qv = vertex(neighbors[(k + 1) % 6], neighbors[(k + 2) % 6]);
        Quad cross = pv[0] * qv[1] - pv[1] * qv[0];
        Quad area = cross.abs() * Quad(ratq(1, 2));
        Quad p2 = pv[0] * pv[0] + pv[1] * pv[1];
        Quad q2 = qv[0] * qv[0] + qv[1] * qv[1];
        Quad pq = pv[0] * qv[0] + pv[1] * qv[1];
        integral += area * (p2 + q2 + pq) / Quad(ratq(6));
    }
    Quad det = a2.det_exact().abs();
    // G = integral / (2 V^2) in two dimensions.
    Quad g = integral / (Quad(ratq(2)) * det * det);
    return g.to_double();
}
}  // namespace

TEST_CASE("hexagonal lattice: MC agrees with the exact cell-integration oracle") {
    double oracle = hexagonal_nsm_oracle();
    CHECK(oracle == doctest::Approx(0.0801875).epsilon(1e-6));
    Prepared p(cat::a2());
    MomentReport r = estimate_nsm(p, 400000, 21);
    CHECK(std::fabs(r.g_hat - oracle) < 4.0 * r.g_stderr);
}

TEST_CASE("zamir-feder: isotropic matrix is consistent") {
    MomentReport r;
    r.dim = 3;
    r.samples = 1000;
    r.v2n = 1.0;
    r.u_hat = Eigen::MatrixXd::Identity(3, 3) / 12.0;
    r.u_stderr = Eigen::MatrixXd::Constant(3, 3, 1e-6);
    r.g_hat = r.u_hat.trace() / 3.0;
    ZfDiagnostic d = zamir_feder_diagnostic(r);
    CHECK(d.traceless_norm == doctest::Approx(0.0));
    CHECK(d.max_abs_z == doctest::Approx(0.0));
    CHECK(d.verdict == "consistent with local optimality");
}

TEST_CASE("zamir-feder: the exact 13-dim unit-scale matrix is rejected") {
    // Synthetic report carrying the exact second-moment entries at unit
    // scales with tiny errors: the block structure is far from isotropic.
    const auto& abg = cat::abg13_unit();
    MomentReport r;
    r.dim = 13;
    r.samples = 1000;
    r.v2n = 1.0;
    r.u_hat = Eigen::MatrixXd::Zero(13, 13);
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++)
            r.u_hat(i, j) = (i == j) ? abg.beta.get_d() : abg.gamma.get_d();
    for (int i = 8; i < 13; i++) r.u_hat(i, i) = abg.alpha.get_d();
    r.u_stderr = Eigen::MatrixXd::Constant(13, 13, 1e-9);
    ZfDiagnostic d = zamir_feder_diagnostic(r);
    CHECK(d.verdict == "inconsistent");
    CHECK(d.max_abs_z > 1000.0);
    CHECK(d.traceless_norm > 1e-4);
}

TEST_CASE("pooled groups match the 13-dim block structure") {
    auto groups = pool_groups_for(cat::b13prime());
    REQUIRE(groups.size() == 4);
    CHECK(groups[0].entries.size() == 8);   // first-block diagonal
    CHECK(groups[1].entries.size() == 5);   // second-block diagonal
    CHECK(groups[2].entries.size() == 28);  // distinct off-diagonals of the 8-block
    CHECK(groups[3].entries.size() == 50);  // 8x5 cross block + 10 within the 5-block
    CHECK(pool_groups_for(cat::zn(2)).empty());
}

TEST_CASE("geometry report for cubic lattices") {
    GeometryReport g1 = geometry_report(Prepared(cat::zn(1)), "", 20000, 3);
    CHECK(g1.packing_radius == doctest::Approx(0.5));
    CHECK(g1.packing_density == doctest::Approx(1.0));
    CHECK(g1.covering_lower <= 0.5 + 1e-12);
    CHECK_FALSE(g1.has_covering);

    GeometryReport g2 = geometry_report(Prepared(cat::zn(2)), "", 2000, 3);
    CHECK(g2.packing_density == doctest::Approx(M_PI / 4.0));
    GeometryReport g3 = geometry_report(Prepared(cat::zn(3)), "", 2000, 3);
    CHECK(g3.packing_density == doctest::Approx(M_PI / 6.0));
}

TEST_CASE("geometry report for the 14-dim family at the optimum") {
    Prepared p(cat::b14_f(1.314224989311));
    GeometryReport g = geometry_report(p, "", 20000, 5);
    CHECK(g.kissing == 24);
    CHECK(g.packing_radius == doctest::Approx(0.929297).epsilon(1e-5));
    CHECK(g.packing_density == doctest::Approx(0.004616).epsilon(1e-3));
    REQUIRE(g.has_covering);
    CHECK(g.covering_radius_sq == doctest::Approx(2.819748).epsilon(1e-5));
    CHECK(g.thickness == doctest::Approx(18.264550).epsilon(1e-5));
    // Every sampled quantization error stays within the covering radius.
    CHECK(g.covering_lower <= g.covering_radius + 1e-9);
}
