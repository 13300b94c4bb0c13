#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "latq/catalog.hpp"
#include "latq/exact_nsm.hpp"

using namespace latq;
using namespace latq::exactnsm;

TEST_CASE("stationarity polynomial: printed and derived forms agree") {
    const Poly1& f = f14();  // construction cross-checks every coefficient
    CHECK(f.degree() == 15);
    Rat lead = Rat(Int("-1018103123715692435")) /
               Rat(pow_int(2, 24) * pow_int(3, 15) * pow_int(5, 5) * pow_int(7, 6) *
                   pow_int(11, 2) * pow_int(13, 1));
    CHECK(f.coeff(15) == lead);
}

TEST_CASE("phase endpoints bracket the optimum with a sign change") {
    const Poly1& f = f14();
    CHECK(f.sign_at(ratq(5, 3)) < 0);
    CHECK(f.sign_at(ratq(13, 7)) > 0);
}

TEST_CASE("14-dim optimum matches the closed-form evaluation to 12 digits") {
    Opt14 o = optimize_g14(ratq(1, Int("1000000000000")));
    CHECK(o.positive_root_index == 2);
    CHECK(o.a_opt.fixed_is_certain(12));
    CHECK(o.a_opt.to_fixed(12) == "1.314224989311");
    CHECK(o.g_opt.to_fixed(12) == "0.069261778717");
    // Certified interior minimum: sign change over the final bracket.
    const Poly1& f = f14();
    CHECK(f.sign_at(o.v0.lo) * f.sign_at(o.v0.hi) < 0);
    // Stationarity via central differences on the NSM itself.
    const int d = 60;
    BigFloat h = BigFloat::of(ratq(1, 1000000), d);
    BigFloat a(o.a_opt);
    BigFloat gp = g14_v((a + h) * (a + h), d);
    BigFloat gm = g14_v((a - h) * (a - h), d);
    double deriv = ((gp - gm) / (h + h)).to_double();
    CHECK(std::fabs(deriv) < 1e-9);
}

TEST_CASE("g14 stays below the prior record across the phase") {
    for (auto a : {ratq(13, 10), ratq(25, 19), ratq(34, 25)}) {
        bool in_phase = false;
        BigFloat g = g14(a, 60, &in_phase);
        CHECK(in_phase);
        CHECK(g.to_double() < 0.06952);
    }
    bool in_phase = true;
    BigFloat g_out = g14(ratq(1), 60, &in_phase);  // outside the phase
    CHECK_FALSE(in_phase);
    CHECK(g_out.to_double() > 0.0);
    // Both endpoints exceed the interior minimum.
    Opt14 o = optimize_g14(ratq(1, Int("1000000000000")));
    for (auto v : {ratq(5, 3), ratq(13, 7)}) {
        BigFloat ge = g14_v(BigFloat::of(v, 60), 60);
        CHECK(ge.to_double() > o.g_opt.to_double());
    }
}

TEST_CASE("14-dim second-moment entries: trace identity and sign structure") {
    // 10 alpha + 4 beta = 14 V^{1/7} G exactly (the correction terms cancel).
    std::mt19937_64 rng(31);
    for (int it = 0; it < 20; it++) {
        // Random in-phase rational a: a^2 in (5/3, 13/7).
        long num = 1300 + static_cast<long>(rng() % 62);
        Rat a = ratq(num, 1000);
        SecondMomentAbg ab = alpha_beta_14(a, 60);
        BigFloat lhs = ab.alpha.mul_rat(ratq(10)) + ab.beta.mul_rat(ratq(4));
        BigFloat vol = BigFloat::of(ratq(9) * pow_rat(a, 4), 60) *
                       BigFloat::of(3L, 60).sqrt();
        BigFloat rhs = vol.pow(ratq(1, 7)) * g14(a, 60) * BigFloat::of(14L, 60);
        double diff = std::fabs((lhs - rhs).to_double());
        CHECK(diff <= lhs.err() + rhs.err() + 1e-50);
    }
    // f(1.3^2) < 0, so the first-block entry exceeds the second-block entry.
    SecondMomentAbg ab = alpha_beta_14(ratq(13, 10), 60);
    CHECK(f14().sign_at(ratq(169, 100)) < 0);
    CHECK(ab.alpha.to_double() > ab.beta.to_double());
    // Near the optimum the two collapse (f nearly vanishes).
    SecondMomentAbg near_opt = alpha_beta_14(ratq(1314225, 1000000), 60);
    CHECK(std::fabs(near_opt.alpha.to_double() - near_opt.beta.to_double()) < 1e-5);
}

TEST_CASE("13-dim closed forms at unit scales") {
    // The phase-A expression evaluated at (1, 1) equals the exact NSM of the
    // unit-scale lattice.
    const auto& u = catalog::abg13_unit();
    BigFloat ga = gA13(ratq(1), ratq(1), 80);
    BigFloat gref = BigFloat::of(u.g, 80);
    CHECK(std::fabs((ga - gref).to_double()) <= ga.err() + gref.err());
    CHECK(gref.to_fixed(12) == "0.069698255940");
    // Decimal renderings of the exact second-moment entries.
    CHECK(BigFloat::of(u.alpha, 60).to_fixed(6) == "0.069513");
    CHECK(BigFloat::of(u.beta, 60).to_fixed(6) == "0.069814");
    CHECK(BigFloat::of(u.gamma, 60).to_fixed(6) == "-0.000055");
}

TEST_CASE("phase-A and phase-B forms coincide exactly on the interface") {
    // On 8 v2 - 83 v3 + 76 = 0 the correction term vanishes identically.
    Rat v2 = ratq(1);
    Rat v3 = ratq(84, 83);
    CHECK(8 * v2 - 83 * v3 + 76 == 0);
    Poly2 na = catalog::g13_numerator();
    Rat ka(pow_int(2, 81) * pow_int(3, 10) * pow_int(5, 4) * pow_int(7, 4) *
           pow_int(11, 2) * pow_int(13, 3));
    Rat lhs = na.eval(v2, v3) / ka;
    BigFloat gb = gB13_v(BigFloat::of(v2, 80), BigFloat::of(v3, 80), 80);
    BigFloat ga = BigFloat::of(lhs, 80) *
                  BigFloat::of(v2, 80).pow(ratq(-70, 13)) *
                  BigFloat::of(v3, 80).pow(ratq(-14, 13));
    CHECK(std::fabs((gb - ga).to_double()) <= gb.err() + ga.err());
    // Slightly off the interface the gap is positive.
    BigFloat gap = gap13_v(BigFloat::of(v2, 80), BigFloat::of(ratq(1), 80), 80);
    CHECK(gap.to_double() > 0.0);
}

TEST_CASE("stationarity polynomials have total degree 14 and match derivatives") {
    CHECK(fB2().total_degree() == 14);
    CHECK(fB3().total_degree() == 14);
    // Central difference of the NSM vs the polynomial prediction at
    // (a2, a3) = (1.004, 1.008): dG/da2 = fB2 / (a2^{153/13} a3^{28/13}).
    const int d = 80;
    Rat a2 = ratq(1004, 1000), a3 = ratq(1008, 1000);
    BigFloat h = BigFloat::of(ratq(1, Int("10000000000")), d);
    BigFloat b2 = BigFloat::of(a2, d), b3 = BigFloat::of(a3, d);
    BigFloat gp = gB13_v((b2 + h) * (b2 + h), b3 * b3, d);
    BigFloat gm = gB13_v((b2 - h) * (b2 - h), b3 * b3, d);
    double fd = ((gp - gm) / (h + h)).to_double();
    BigFloat pred = BigFloat::of(fB2().eval(a2 * a2, a3 * a3), d) /
                    (b2.pow(ratq(153, 13)) * b3.pow(ratq(28, 13)));
    CHECK(fd == doctest::Approx(pred.to_double()).epsilon(1e-6));
    // Same for the second parameter.
    BigFloat gp3 = gB13_v(b2 * b2, (b3 + h) * (b3 + h), d);
    BigFloat gm3 = gB13_v(b2 * b2, (b3 - h) * (b3 - h), d);
    double fd3 = ((gp3 - gm3) / (h + h)).to_double();
    BigFloat pred3 = BigFloat::of(fB3().eval(a2 * a2, a3 * a3), d) /
                     (b2.pow(ratq(140, 13)) * b3.pow(ratq(41, 13)));
    CHECK(fd3 == doctest::Approx(pred3.to_double()).epsilon(1e-6));
}

TEST_CASE("13-dim optimum: certified root box and printed digits") {
    Opt13 o = optimize_g13(ratq(1, Int("1000000000000")));
    CHECK(o.certified);
    CHECK(o.hessian_pd);
    CHECK(o.a2.to_fixed(12) == "1.004336185575");
    CHECK(o.a3.to_fixed(12) == "1.014983466336");
    CHECK(o.g.to_fixed(12) == "0.069697638992");
    // Both stationarity polynomials vanish within the certified box.
    CHECK(std::fabs(fB2().eval(o.v2, o.v3).to_double()) < 1e-30);
    CHECK(std::fabs(fB3().eval(o.v2, o.v3).to_double()) < 1e-30);
    // The refined optimum lies below the unit-scale NSM.
    CHECK(o.g.to_double() < catalog::abg13_unit().g.get_d());
    // Gap between the phase forms at the optimum ~ 1.8e-31.
    BigFloat gap = gap13_v(o.v2, o.v3, 80);
    CHECK(gap.to_double() > 1.6e-31);
    CHECK(gap.to_double() < 2.0e-31);
}

TEST_CASE("13-dim second-moment entries: trace identity and isotropy at the optimum") {
    std::mt19937_64 rng(77);
    for (int it = 0; it < 20; it++) {
        Rat a2 = ratq(1000 + static_cast<long>(rng() % 10), 1000);
        Rat a3 = ratq(1000 + static_cast<long>(rng() % 20), 1000);
        SecondMomentAbg ab = abg13(a2, a3, 80);
        BigFloat lhs = ab.alpha.mul_rat(ratq(5)) + ab.beta.mul_rat(ratq(8));
        Rat vol = pow_rat(a2, 5) * a3;
        BigFloat rhs = BigFloat::of(vol, 80).pow(ratq(2, 13)) * gB13(a2, a3, 80) *
                       BigFloat::of(13L, 80);
        double diff = std::fabs((lhs - rhs).to_double());
        CHECK(diff <= lhs.err() + rhs.err() + 1e-50);
    }
    Opt13 o = optimize_g13(ratq(1, Int("1000000000000")));
    SecondMomentAbg ab = abg13_v(o.v2, o.v3, 80);
    CHECK(std::fabs(ab.alpha.to_double() - ab.beta.to_double()) < 1e-28);
    CHECK(std::fabs(ab.gamma.to_double()) < 1e-28);
}

TEST_CASE("step sizes from the exact unit-scale entries") {
    const auto& u = catalog::abg13_unit();
    EpsilonSteps e = epsilon_steps(u.alpha, u.beta, u.gamma);
    REQUIRE(e.finite);
    CHECK(e.e1.to_fixed(4) == "7.1843");
    CHECK(e.e2.to_fixed(4) == "7.1735");
    // Isotropic input: no finite step needed.
    EpsilonSteps iso = epsilon_steps(ratq(1, 12), ratq(1, 12), ratq(0));
    CHECK_FALSE(iso.finite);
    // The first rule zeroes the off-diagonal update exactly: check the
    // closed-form identity gamma' = gamma + 2 gamma (5a - 18b - 78g) e1 / 13 = 0.
    Rat e1 = ratq(13) / (2 * (-5 * u.alpha + 18 * u.beta + 78 * u.gamma));
    Rat gprime = u.gamma + 2 * u.gamma * (5 * u.alpha - 18 * u.beta - 78 * u.gamma) * e1 / 13;
    CHECK(gprime == 0);
}
