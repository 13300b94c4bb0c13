#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "latq/catalog.hpp"
#include "latq/exact_nsm.hpp"
#include "latq/optimizer.hpp"

using namespace latq;
using namespace latq::optimizer;
namespace cat = latq::catalog;

TEST_CASE("traceless part") {
    Eigen::MatrixXd c = 0.25 * Eigen::MatrixXd::Identity(4, 4);
    CHECK(traceless(c).norm() == doctest::Approx(0.0));
    Eigen::MatrixXd u(2, 2);
    u << 3, 1, 1, 5;
    Eigen::MatrixXd t = traceless(u);
    CHECK(t.trace() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(traceless(t) == t);
    // The unit-scale 13-dim block matrix: diagonal entries in two groups.
    const auto& abg = cat::abg13_unit();
    Eigen::MatrixXd u13 = Eigen::MatrixXd::Zero(13, 13);
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++)
            u13(i, j) = i == j ? abg.beta.get_d() : abg.gamma.get_d();
    for (int i = 8; i < 13; i++) u13(i, i) = abg.alpha.get_d();
    Eigen::MatrixXd bar = traceless(u13);
    double tr = (8 * abg.beta.get_d() + 5 * abg.alpha.get_d()) / 13.0;
    CHECK(bar(0, 0) == doctest::Approx(abg.beta.get_d() - tr).epsilon(1e-12));
    CHECK(bar(12, 12) == doctest::Approx(abg.alpha.get_d() - tr).epsilon(1e-12));
    CHECK(std::fabs(bar.trace()) < 1e-14);
}

TEST_CASE("perturbation matrices") {
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
    CHECK(perturbation(zero, 0.7, PerturbVariant::kLinear) ==
          Eigen::MatrixXd::Identity(3, 3));
    CHECK(perturbation(zero, 0.0, PerturbVariant::kExponential) ==
          Eigen::MatrixXd::Identity(3, 3));

    const auto& abg = cat::abg13_unit();
    Eigen::MatrixXd u13 = Eigen::MatrixXd::Zero(13, 13);
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++)
            u13(i, j) = i == j ? abg.beta.get_d() : abg.gamma.get_d();
    for (int i = 8; i < 13; i++) u13(i, i) = abg.alpha.get_d();
    Eigen::MatrixXd bar = traceless(u13);
    // Exponential variant of a traceless generator preserves volume.
    Eigen::MatrixXd ae = perturbation(bar, 7.0, PerturbVariant::kExponential);
    CHECK(std::fabs(ae.determinant() - 1.0) < 1e-12);
    // With a step near 7, every entry of eps * Ubar stays below 0.0014.
    CHECK((7.0 * bar).cwiseAbs().maxCoeff() < 0.0014);
}

TEST_CASE("perturbing the unit-scale 13-dim lattice lands inside its own family") {
    // B'13 (I - eps Ubar) equals the family generator at explicitly scaled
    // parameters -- exact rational arithmetic end to end.
    const auto& abg = cat::abg13_unit();
    Rat al = abg.alpha, be = abg.beta, ga = abg.gamma;
    Rat eps = ratq(7);  // any rational step works; use a round one
    QMat u(13, 13);
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++) u.at(i, j) = Quad(i == j ? be : ga);
    for (int i = 8; i < 13; i++) u.at(i, i) = Quad(al);
    Rat tr13 = (8 * be + 5 * al) / 13;
    QMat ubar = u - QMat::identity(13).scaled(Quad(tr13));
    QMat aeps = QMat::identity(13) - ubar.scaled(Quad(eps));
    QMat lhs = cat::b13prime().exact_basis() * aeps;

    Rat a1 = 1 - (5 * be - 5 * al - 13 * ga) * eps / 13;
    Rat a2 = 1 + (8 * be - 8 * al) * eps / 13;
    Rat a3 = 1 - (5 * be - 5 * al + 91 * ga) * eps / 13;
    QMat rhs = cat::b13_general(Quad(a1), Quad(a2), Quad(a3)).exact_basis();
    CHECK(lhs == rhs);
}

TEST_CASE("descend terminates immediately on an isotropic lattice") {
    DescendConfig cfg;
    cfg.samples = 60000;
    cfg.seed = 12;
    cfg.max_steps = 3;
    DescendState st = descend(cat::zn(2), cfg);
    CHECK(st.history.size() == 1);
    CHECK(st.termination.find("converged") != std::string::npos);
    // NSM never increases along the (single-entry) history.
    for (size_t i = 1; i < st.history.size(); i++)
        CHECK(st.history[i].g_hat <= st.history[i - 1].g_hat + 4 * st.history[i].g_stderr);
}

TEST_CASE("descend on the 14-dim optimum accepts at the first step") {
    DescendConfig cfg;
    cfg.samples = 150000;
    cfg.seed = 3;
    cfg.max_steps = 2;
    DescendState st = descend(cat::b14_f(1.314224989311), cfg);
    CHECK(st.history.size() == 1);
    CHECK(st.termination.find("converged") != std::string::npos);
    CHECK(st.history[0].max_abs_z < 4.0);
}

TEST_CASE("paired comparison with common random numbers is sharp") {
    // Identical lattices: exactly zero difference.
    Lattice a = cat::b13prime();
    PairedDelta same = paired_nsm_delta(a, a, 20000, 77);
    CHECK(same.delta == 0.0);
    CHECK(same.stderr_ == 0.0);
    // Scaling leaves the normalized error invariant up to float rounding.
    PairedDelta scaled = paired_nsm_delta(a, a.scaled(Quad(ratq(2))), 20000, 77);
    CHECK(std::fabs(scaled.delta) < 1e-13);
}

TEST_CASE("optimal product scales") {
    // Z^1 x Z^1: equal scales, G = 1/12.
    ProductScales ps = optimal_product_scales(
        {{cat::zn(1), 1.0 / 12.0}, {cat::zn(1), 1.0 / 12.0}});
    CHECK(ps.scales[0] == doctest::Approx(1.0));
    CHECK(ps.scales[1] == doctest::Approx(1.0));
    CHECK(ps.g_product == doctest::Approx(1.0 / 12.0));

    // Equal per-component NSMs with different volumes: the combined NSM is
    // unchanged no matter the scales the rule picks.
    ProductScales eq = optimal_product_scales(
        {{cat::zn(2), 1.0 / 12.0}, {cat::zn(2).scaled(Quad(ratq(3))), 1.0 / 12.0}});
    CHECK(eq.g_product == doctest::Approx(1.0 / 12.0));
    CHECK(eq.scales[1] == doctest::Approx(1.0 / 3.0));  // undoes the volume skew

    // Combination law: log G x n = sum n_i log G_i.
    double g1 = 0.0801875, g2 = 1.0 / 12.0;
    ProductScales mix = optimal_product_scales({{cat::a2(), g1}, {cat::zn(3), g2}});
    CHECK(5.0 * std::log(mix.g_product) ==
          doctest::Approx(2.0 * std::log(g1) + 3.0 * std::log(g2)).epsilon(1e-12));

    // The 14-dim component pair: the optimal product stays above the glued
    // family optimum.
    using namespace latq::exactnsm;
    Opt14 o = optimize_g14(ratq(1, Int("1000000000000")));
    Prepared k10(cat::k10prime()), d4(cat::dn(4));
    double gk = estimate_nsm(k10, 200000, 9).g_hat;
    double gd = estimate_nsm(d4, 200000, 9).g_hat;
    ProductScales prod = optimal_product_scales({{cat::k10prime(), gk}, {cat::dn(4), gd}});
    CHECK(prod.g_product > o.g_opt.to_double());
}
