#include "latq/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "latq/automorphism.hpp"
#include "latq/catalog.hpp"
#include "latq/enumerate.hpp"
#include "latq/equivalence.hpp"
#include "latq/exact_nsm.hpp"
#include "latq/moments.hpp"
#include "latq/optimizer.hpp"
#include "latq/relevant.hpp"

namespace latq::acceptance {

namespace cat = latq::catalog;
using namespace latq::exactnsm;

namespace {

struct Check {
    bool pass = true;
    std::ostringstream log;
    void expect(bool ok, const std::string& what) {
        pass = pass && ok;
        log << (ok ? "  ok: " : "  FAIL: ") << what << "\n";
    }
    template <typename T>
    void expect_eq(const T& got, const T& want, const std::string& what) {
        bool ok = got == want;
        pass = pass && ok;
        log << (ok ? "  ok: " : "  FAIL: ") << what << " = " << got;
        if (!ok) log << " (expected " << want << ")";
        log << "\n";
    }
    void expect_near(double got, double want, double tol, const std::string& what) {
        bool ok = std::fabs(got - want) <= tol;
        pass = pass && ok;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s = %.12g (target %.12g, tol %.2g)", what.c_str(),
                      got, want, tol);
        log << (ok ? "  ok: " : "  FAIL: ") << buf << "\n";
    }
};

const Rat& tol12() {
    static const Rat t = ratq(1, Int("1000000000000"));
    return t;
}

// Optima are pure functions; cache them across criteria within a process.
const Opt14& opt14() {
    static const Opt14 o = optimize_g14(tol12());
    return o;
}
const Opt13& opt13() {
    static const Opt13 o = optimize_g13(tol12());
    return o;
}

void theta_check(Check& c, const Lattice& l, const std::vector<std::pair<double, long>>& expected,
                 double r2max, const std::string& tag) {
    Prepared p(l.unit_volume());
    ThetaImage img = theta_image(p, r2max);
    for (const auto& [r2, count] : expected) {
        bool found = false;
        for (const auto& [sr2, scount] : img.steps) {
            if (std::fabs(sr2 - r2) <= 1e-4) {
                found = true;
                c.expect(scount == count, tag + " step at r2=" + std::to_string(r2) +
                                              " count " + std::to_string(scount) + " vs " +
                                              std::to_string(count));
                break;
            }
        }
        if (!found) c.expect(false, tag + " missing step near r2=" + std::to_string(r2));
    }
}

CriterionResult c1() {
    Check c;
    const Opt14& o = opt14();
    c.expect_eq(o.a_opt.to_fixed(12), std::string("1.314224989311"), "a_opt");
    c.expect_eq(o.g_opt.to_fixed(12), std::string("0.069261778717"), "G_opt");
    c.expect(o.a_opt.err() < 1e-12, "a_opt certified to 1e-12");
    c.expect(o.g_opt.err() < 1e-12, "G_opt certified to 1e-12");
    c.expect_eq(o.positive_root_index, 2, "positive root index");
    return {1, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c2() {
    Check c;
    const Opt13& o = opt13();
    c.expect_eq(o.a2.to_fixed(12), std::string("1.004336185575"), "a2_opt");
    c.expect_eq(o.a3.to_fixed(12), std::string("1.014983466336"), "a3_opt");
    c.expect_eq(o.g.to_fixed(12), std::string("0.069697638992"), "G_opt");
    c.expect(o.certified, "interval Newton contraction certified the root box");
    c.expect(o.hessian_pd, "finite-difference Hessian positive definite");
    return {2, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c3() {
    Check c;
    const auto& u = cat::abg13_unit();
    c.expect_eq(BigFloat::of(u.g, 80).to_fixed(12), std::string("0.069698255940"),
                "exact unit-scale NSM");
    c.expect_eq(BigFloat::of(u.alpha, 60).to_fixed(6), std::string("0.069513"), "alpha");
    c.expect_eq(BigFloat::of(u.beta, 60).to_fixed(6), std::string("0.069814"), "beta");
    c.expect_eq(BigFloat::of(u.gamma, 60).to_fixed(6), std::string("-0.000055"), "gamma");
    EpsilonSteps e = epsilon_steps(u.alpha, u.beta, u.gamma);
    c.expect(e.finite, "finite steps");
    c.expect_eq(e.e1.to_fixed(4), std::string("7.1843"), "eps1");
    c.expect_eq(e.e2.to_fixed(4), std::string("7.1735"), "eps2");
    return {3, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c4() {
    Check c;
    const Opt13& o = opt13();
    BigFloat gap = gap13_v(o.v2, o.v3, 80);
    double g = gap.to_double();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", g);
    c.expect(g >= 1.6e-31 && g <= 2.0e-31,
             "phase gap " + std::string(buf) + " within [1.6e-31, 2.0e-31]");
    c.expect(gap.err() < 1e-35, "gap certified at 80 digits");
    return {4, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c5(int workers) {
    Check c;
    Prepared p14(cat::b14(Quad(ratq(25, 19))));
    RelevantVectorSet r14 = relevant_vectors(p14, workers);
    c.expect_eq(r14.facet_count(), 13542L, "14-dim facet count");
    c.expect(r14.flagged_cosets.empty(), "no degenerate cosets (14-dim)");
    const Opt13& o = opt13();
    Prepared p13(cat::b13_f(o.a2.to_double(), o.a3.to_double()));
    RelevantVectorSet r13 = relevant_vectors(p13, workers);
    c.expect_eq(r13.facet_count(), 5454L, "13-dim facet count at the optimum");
    c.expect(r13.flagged_cosets.empty(), "no degenerate cosets (13-dim)");
    return {5, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c6() {
    Check c;
    theta_check(c, cat::b14_f(opt14().a_opt.to_double()),
                {{1.99599, 25},
                 {2.31126, 295},
                 {2.73144, 2215},
                 {3.46689, 3175},
                 {3.88707, 13543},
                 {3.99197, 13567}},
                4.0, "14-dim");
    theta_check(c, cat::b13prime(),
                {{2.0, 99},
                 {2.40625, 355},
                 {2.5, 495},
                 {2.625, 1055},
                 {2.90625, 1311},
                 {3.15625, 3103},
                 {3.625, 3663},
                 {4.0, 6605}},
                4.02, "13-dim unit scales");
    const Opt13& o = opt13();
    theta_check(c, cat::b13_f(o.a2.to_double(), o.a3.to_double()),
                {{1.9888, 57}, {2.00608, 97}, {2.04884, 99}}, 2.1, "13-dim optimum");
    return {6, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c7() {
    Check c;
    Prepared p14(cat::b14_f(opt14().a_opt.to_double()));
    GeometryReport g14r = geometry_report(p14, "", 100000, 1);
    c.expect_eq(g14r.kissing, 24L, "14-dim kissing number");
    c.expect_near(g14r.packing_radius, 0.929297, 1e-6, "14-dim packing radius");
    c.expect_near(g14r.packing_density, 0.004616, 1e-6, "14-dim packing density");
    // The printed covering value matches the squared radius of the closed form.
    c.expect_near(g14r.covering_radius_sq, 2.819748, 1e-6, "14-dim covering radius^2");
    c.expect_near(g14r.thickness, 18.264550, 1e-5, "14-dim thickness");
    c.expect(g14r.covering_lower <= g14r.covering_radius + 1e-9,
             "max sampled error within the covering radius (14-dim)");

    const Opt13& o = opt13();
    Prepared p13(cat::b13_f(o.a2.to_double(), o.a3.to_double()));
    GeometryReport g13r = geometry_report(p13, "", 100000, 1);
    c.expect_eq(g13r.kissing, 56L, "13-dim kissing number at the optimum");
    c.expect_near(g13r.packing_radius, 0.707107, 1e-6, "13-dim packing radius");
    c.expect_near(g13r.packing_density, 0.009700, 1e-6, "13-dim packing density");
    c.expect_near(g13r.covering_radius, 1.236648, 1e-6, "13-dim covering radius");
    c.expect_near(g13r.thickness, 13.889470, 1e-5, "13-dim thickness");
    c.expect(g13r.covering_lower <= g13r.covering_radius + 1e-9,
             "max sampled error within the covering radius (13-dim)");

    ShortestInfo unit = shortest_vectors(Prepared(cat::b13prime()));
    c.expect_eq(unit.kissing, 98L, "13-dim kissing number at unit scales");
    return {7, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c8(int workers) {
    Check c;
    const long n_samples = 1000000;
    auto mc_check = [&](const Lattice& l, double exact, const std::string& tag,
                        uint64_t seed) {
        MomentReport r = estimate_nsm(Prepared(l), n_samples, seed, workers);
        double dev = std::fabs(r.g_hat - exact);
        c.expect(dev < 4.0 * r.g_stderr,
                 tag + ": |G_hat - G| = " + std::to_string(dev) + " < 4 x " +
                     std::to_string(r.g_stderr));
    };
    mc_check(cat::b14_f(opt14().a_opt.to_double()), opt14().g_opt.to_double(), "14-dim optimum",
             101);
    const Opt13& o = opt13();
    mc_check(cat::b13_f(o.a2.to_double(), o.a3.to_double()), o.g.to_double(), "13-dim optimum",
             102);
    mc_check(cat::zn(1), 1.0 / 12.0, "Z^1", 103);
    mc_check(cat::zn(8), 1.0 / 12.0, "Z^8", 104);
    // Hexagonal target: 5 sqrt(3) / 108 (derived independently in the tests).
    Quad hex = Quad(ratq(5, 108)) * Quad::sqrt_of(3);
    mc_check(cat::a2(), hex.to_double(), "hexagonal", 105);
    return {8, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c9(int workers) {
    Check c;
    const long n_samples = 10000000;
    {
        Lattice l = cat::b13prime();
        auto groups = pool_groups_for(l);
        MomentReport r =
            estimate_second_moment_matrix(Prepared(l), n_samples, 201, workers, &groups);
        double zoff = 0;
        for (const auto& ps : r.pooled)
            if (ps.name == "offdiag_first8") zoff = ps.z;
        c.expect(zoff < -4.0, "unit scales: pooled off-diagonal z = " + std::to_string(zoff) +
                                  " < -4 (isotropy rejected)");
    }
    auto accept = [&](const Lattice& l, const std::string& tag, uint64_t seed) {
        auto groups = pool_groups_for(l);
        MomentReport r =
            estimate_second_moment_matrix(Prepared(l), n_samples, seed, workers, &groups);
        ZfDiagnostic d = zamir_feder_diagnostic(r);
        c.expect(d.max_abs_z < 4.0,
                 tag + ": max pooled |z| = " + std::to_string(d.max_abs_z) + " < 4");
    };
    accept(cat::b14_f(opt14().a_opt.to_double()), "14-dim optimum", 202);
    const Opt13& o = opt13();
    accept(cat::b13_f(o.a2.to_double(), o.a3.to_double()), "13-dim optimum", 203);
    return {9, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c10(int workers) {
    Check c;
    const long n_samples = 10000000;
    Lattice l0 = cat::b13prime();
    auto groups = pool_groups_for(l0);
    MomentReport r =
        estimate_second_moment_matrix(Prepared(l0), n_samples, 301, workers, &groups);
    double beta_hat = 0, alpha_hat = 0, gamma_hat = 0;
    double se_beta = 0, se_alpha = 0, se_gamma = 0;
    for (const auto& ps : r.pooled) {
        if (ps.name == "diag_first8") beta_hat = ps.mean, se_beta = ps.stderr_;
        if (ps.name == "diag_last5") alpha_hat = ps.mean, se_alpha = ps.stderr_;
        if (ps.name == "offdiag_first8") gamma_hat = ps.mean, se_gamma = ps.stderr_;
    }
    double eps1_hat =
        13.0 / (2.0 * (-5.0 * alpha_hat + 18.0 * beta_hat + 78.0 * gamma_hat));
    // Scale estimates from the one-step update rules, against the values the
    // exact second-moment entries give.
    const auto& u = cat::abg13_unit();
    Rat e1 = ratq(13) / (2 * (-5 * u.alpha + 18 * u.beta + 78 * u.gamma));
    auto exact_scales = [&](const Rat& eps) {
        return std::array<double, 3>{
            Rat(1 - (5 * u.beta - 5 * u.alpha - 13 * u.gamma) * eps / 13).get_d(),
            Rat(1 + (8 * u.beta - 8 * u.alpha) * eps / 13).get_d(),
            Rat(1 - (5 * u.beta - 5 * u.alpha + 91 * u.gamma) * eps / 13).get_d()};
    };
    auto sc = exact_scales(e1);
    double a1_hat = 1 - (5 * beta_hat - 5 * alpha_hat - 13 * gamma_hat) * eps1_hat / 13;
    double a2_hat = 1 + (8 * beta_hat - 8 * alpha_hat) * eps1_hat / 13;
    double a3_hat = 1 - (5 * beta_hat - 5 * alpha_hat + 91 * gamma_hat) * eps1_hat / 13;
    double se_lin = eps1_hat / 13.0 *
                    (5 * se_beta + 5 * se_alpha + 91 * se_gamma);  // conservative bound
    c.expect_near(a1_hat, sc[0], 4 * se_lin, "one-step scale a1");
    c.expect_near(a2_hat, sc[1], 4 * se_lin, "one-step scale a2");
    c.expect_near(a3_hat, sc[2], 4 * se_lin, "one-step scale a3");

    // Certified decrease with common random numbers, stepping with the
    // estimated traceless part and the estimated step size.
    Eigen::MatrixXd a_eps = optimizer::perturbation(optimizer::traceless(r.u_hat), eps1_hat,
                                                    optimizer::PerturbVariant::kLinear);
    Lattice l1 = Lattice::from_float(l0.basis() * a_eps);
    optimizer::PairedDelta d = optimizer::paired_nsm_delta(l0, l1, n_samples, 302, workers);
    c.expect(d.z <= -3.0, "paired NSM decrease z = " + std::to_string(d.z) + " <= -3");
    char dbuf[64];
    std::snprintf(dbuf, sizeof(dbuf), "%.3g +- %.2g", -d.delta, d.stderr_);
    c.expect(d.delta < 0, "NSM decreased by " + std::string(dbuf));
    return {10, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c11(int workers) {
    Check c;
    PhaseReport stable =
        phase_condition_i("B14", {{1.30}, {25.0 / 19.0}, {1.36}}, workers);
    c.expect(stable.stable, "facet sets stable across {1.30, 25/19, 1.36}");
    for (size_t i = 0; i < stable.facet_counts.size(); i++)
        c.expect_eq(stable.facet_counts[i], 13542L,
                    "facet count at point " + std::to_string(i));
    PhaseReport unstable = phase_condition_i("B14", {{25.0 / 19.0}, {1.28}}, workers);
    c.expect(!unstable.stable, "facet sets differ against a = 1.28");
    if (unstable.stable) {
        c.log << "  note: measured facet sets at 25/19 and 1.28 are identical ("
              << unstable.facet_counts[1]
              << " facets, equal integer-coordinate sets under exact tie\n"
                 "  certification). The family's phase boundary near a = 1.291 comes\n"
                 "  from one-dimensional faces degenerating (vertices merging), which\n"
                 "  the facet-stability test cannot observe; the facet set is constant\n"
                 "  across at least a in [1.10, 1.45]. The expected instability is\n"
                 "  therefore not detectable by this test, and the check is reported\n"
                 "  as failing rather than being weakened.\n";
    }
    return {11, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c12() {
    Check c;
    using namespace latq::equivalence;
    AppendixReport rep = appendix_checks();
    for (const auto& item : rep.items) c.expect(item.pass, item.name);
    // Mutating any single entry of any unimodular map must break it.
    const auto& eq = cat::appendix_equivalences();
    QMat g10 = cat::k10prime().gram_exact();
    QMat g4 = eq.b4 * eq.b4.transpose();
    QMat g5 = eq.b5 * eq.b5.transpose();
    long broken = 0, total = 0;
    auto sweep = [&](const QMat& a, const QMat& ap, const QMat& u) {
        for (int i = 0; i < u.rows(); i++)
            for (int j = 0; j < u.cols(); j++) {
                QMat m = u;
                m.at(i, j) += Quad(ratq(1));
                total++;
                if (!verify_congruence({a, ap, m, ratq(1)})) broken++;
            }
    };
    sweep(eq.a1, g10, eq.u1);
    sweep(eq.a2, g10, eq.u2);
    QMat map45 = eq.u4.inverse() * eq.u5;
    sweep(g5, g4, map45);
    c.expect(broken == total, "every single-entry mutation of a certificate map breaks "
                              "verification (" + std::to_string(broken) + "/" +
                              std::to_string(total) + ")");
    // Bumps of the two printed 12-dim maps against the raw mutual identity.
    // A congruence has many unimodular witnesses, so a bump may land on
    // another valid map; any such survivor must itself verify exactly.
    QMat rhs45 = eq.u5 * g5 * eq.u5.transpose();
    QMat lhs45 = eq.u4 * g4 * eq.u4.transpose();
    long raw_total = 0, raw_broken = 0, alternates = 0;
    bool survivors_valid = true;
    for (int i = 0; i < 12; i++)
        for (int j = 0; j < 12; j++) {
            QMat m4 = eq.u4;
            m4.at(i, j) += Quad(ratq(1));
            raw_total++;
            if (!(m4 * g4 * m4.transpose() == rhs45)) {
                raw_broken++;
            } else {
                alternates++;
                survivors_valid =
                    survivors_valid && verify_congruence({g4, rhs45, m4, ratq(1)});
            }
            QMat m5 = eq.u5;
            m5.at(i, j) += Quad(ratq(1));
            raw_total++;
            if (!(m5 * g5 * m5.transpose() == lhs45)) {
                raw_broken++;
            } else {
                alternates++;
                survivors_valid =
                    survivors_valid && verify_congruence({g5, lhs45, m5, ratq(1)});
            }
        }
    c.expect(raw_broken + alternates == raw_total && survivors_valid,
             "raw 12-dim map bumps: " + std::to_string(raw_broken) + "/" +
                 std::to_string(raw_total) + " break; " + std::to_string(alternates) +
                 " land on exactly-verified alternate maps");
    return {12, "", c.pass, false, c.log.str(), 0};
}

CriterionResult c13() {
    Check c;
    // Glue determinant law on every catalog glue spec.
    for (auto& [spec, order] :
         std::vector<std::pair<GlueSpec, long>>{{cat::b14_gluespec(Quad(ratq(25, 19))), 4},
                                                {cat::b13_gluespec(Quad(ratq(1)), Quad(ratq(1)), Quad(ratq(1))), 8}}) {
        GlueResult r = glue(spec);
        c.expect(r.group_order == order &&
                     r.lattice.det_exact().abs() * Quad(ratq(r.group_order)) ==
                         spec.product.det_exact().abs(),
                 "glue determinant law, group order " + std::to_string(order));
    }
    // Dual involution, exact.
    Lattice b14 = cat::b14(Quad(ratq(25, 19)));
    c.expect(b14.dual().dual().gram_exact() == b14.gram_exact(), "dual involution (exact)");
    // Trace identities at sampled in-phase points.
    bool tr14 = true;
    for (long num : {1300L, 1320L, 1355L}) {
        Rat a = ratq(num, 1000);
        SecondMomentAbg ab = alpha_beta_14(a, 60);
        BigFloat lhs = ab.alpha.mul_rat(ratq(10)) + ab.beta.mul_rat(ratq(4));
        BigFloat vol =
            BigFloat::of(ratq(9) * pow_rat(a, 4), 60) * BigFloat::of(3L, 60).sqrt();
        BigFloat rhs = vol.pow(ratq(1, 7)) * g14(a, 60) * BigFloat::of(14L, 60);
        tr14 = tr14 && std::fabs((lhs - rhs).to_double()) <= lhs.err() + rhs.err() + 1e-50;
    }
    c.expect(tr14, "trace identity 10a + 4b = 14 V^{1/7} G");
    bool tr13 = true;
    for (long num : {1002L, 1005L, 1013L}) {
        Rat a2 = ratq(num, 1000), a3 = ratq(num + 5, 1000);
        SecondMomentAbg ab = abg13(a2, a3, 80);
        BigFloat lhs = ab.alpha.mul_rat(ratq(5)) + ab.beta.mul_rat(ratq(8));
        BigFloat rhs = BigFloat::of(pow_rat(a2, 5) * a3, 80).pow(ratq(2, 13)) *
                       gB13(a2, a3, 80) * BigFloat::of(13L, 80);
        tr13 = tr13 && std::fabs((lhs - rhs).to_double()) <= lhs.err() + rhs.err() + 1e-50;
    }
    c.expect(tr13, "trace identity 5a + 8b = 13 V^{2/13} G");
    // Transcription cross-check and the derived stationarity polynomials.
    try {
        c.expect(f14().degree() == 15, "stationarity polynomial cross-check (degree 15)");
        c.expect(fB2().total_degree() == 14 && fB3().total_degree() == 14,
                 "bivariate stationarity polynomials have degree 14");
    } catch (const std::exception& e) {
        c.expect(false, std::string("construction failed: ") + e.what());
    }
    return {13, "", c.pass, false, c.log.str(), 0};
}

}  // namespace

std::vector<int> criterion_ids() {
    std::vector<int> ids;
    for (int i = 1; i <= 13; i++) ids.push_back(i);
    return ids;
}

std::string criterion_name(int id) {
    switch (id) {
        case 1: return "14-dim exact optimum to 12 digits";
        case 2: return "13-dim exact optimum to 12 digits";
        case 3: return "exact rationals at unit scales and step sizes";
        case 4: return "phase-gap magnitude at the 13-dim optimum";
        case 5: return "facet counts (13542 / 5454)";
        case 6: return "theta-image steps at unit determinant";
        case 7: return "kissing, packing, covering, thickness";
        case 8: return "Monte Carlo cross-validation of exact NSMs";
        case 9: return "second-moment isotropy discrimination";
        case 10: return "one-step descent from unit scales";
        case 11: return "parametric-facet phase test";
        case 12: return "equivalence certificates";
        case 13: return "structural invariants";
        default: throw UsageError("unknown criterion id");
    }
}

CriterionResult run_criterion(int id, int workers, bool quick) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    bool heavy = id == 5 || id == 9 || id == 10 || id == 11;
    if (quick && heavy) {
        r = {id, criterion_name(id), false, true, "  skipped in quick mode\n", 0};
    } else {
        switch (id) {
            case 1: r = c1(); break;
            case 2: r = c2(); break;
            case 3: r = c3(); break;
            case 4: r = c4(); break;
            case 5: r = c5(workers); break;
            case 6: r = c6(); break;
            case 7: r = c7(); break;
            case 8: r = c8(workers); break;
            case 9: r = c9(workers); break;
            case 10: r = c10(workers); break;
            case 11: r = c11(workers); break;
            case 12: r = c12(); break;
            case 13: r = c13(); break;
            default: throw UsageError("unknown criterion id");
        }
        r.name = criterion_name(id);
    }
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

bool run_all(int workers, bool quick) {
    bool all = true;
    for (int id : criterion_ids()) {
        CriterionResult r = run_criterion(id, workers, quick);
        const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        std::printf("%s  C%-2d  %-48s (%.1fs)\n", tag, r.id, r.name.c_str(), r.seconds);
        if (!r.pass && !r.skipped) {
            std::printf("%s", r.details.c_str());
            all = false;
        }
    }
    return all;
}

}  // namespace latq::acceptance
