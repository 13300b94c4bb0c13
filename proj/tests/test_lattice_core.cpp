#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "latq/catalog.hpp"
#include "latq/lattice_file.hpp"
#include "latq/lll.hpp"

using namespace latq;
namespace cat = latq::catalog;

namespace {
Quad qr(long n, long d = 1) { return Quad(ratq(n, d)); }
}  // namespace

TEST_CASE("gram of Z^n is the identity") {
    Lattice z3 = cat::zn(3);
    CHECK(z3.gram_exact() == QMat::identity(3));
}

TEST_CASE("K10' block has an integer Gram with diagonal 4") {
    Lattice k = cat::k10prime();
    QMat g = k.gram_exact();
    CHECK(g.is_integer());
    CHECK(g.is_symmetric());
    for (int i = 0; i < 10; i++) CHECK(g.at(i, i) == qr(4));
    // Row 2 of the generator is (1, sqrt 3, 0, ...): self-product 1 + 3 = 4.
    auto row2 = k.exact_basis().row(1);
    Quad self;
    for (const auto& x : row2) self += x * x;
    CHECK(self == qr(4));
    // |det| = sqrt(972) = 18 sqrt(3)
    CHECK(g.det() == qr(972));
}

TEST_CASE("B13 at unit scales: Gram is integer except the glue-row diagonal") {
    // The glue row is not a dual vector of the product, so the lattice is not
    // integral; its self-product is 101/32 while every other entry is integer.
    Lattice b = cat::b13prime();
    QMat g = b.gram_exact();
    for (int i = 0; i < 13; i++)
        for (int j = 0; j < 13; j++) {
            if (i == 12 && j == 12)
                CHECK(g.at(i, j) == Quad(ratq(101, 32)));
            else
                CHECK(g.at(i, j).is_integer());
        }
    CHECK(b.det_exact().abs() == Quad(ratq(1)));
}

TEST_CASE("B14 determinant is 9 sqrt(3) a^4") {
    Quad a = qr(25, 19);
    Lattice b = cat::b14(a);
    Quad expect = Quad(ratq(0), ratq(9), 3) * a * a * a * a;
    CHECK(b.det_exact().abs() == expect);
}

TEST_CASE("dual: involution, self-duality, scaling law") {
    CHECK(cat::zn(4).dual().gram_exact() == QMat::identity(4));

    Lattice d4 = cat::dn(4);
    CHECK(d4.dual().dual().gram_exact() == d4.gram_exact());
    // det(dual) = 1/det: D4 has det 2.
    CHECK(d4.det_exact().abs() == qr(2));
    CHECK(d4.dual().det_exact().abs() == qr(1, 2));

    // (a L)* = a^{-1} L*: Gram of dual(3 L) is 3^{-2} Gram(dual L).
    Lattice scaled = d4.scaled(qr(3));
    QMat lhs = scaled.dual().gram_exact();
    QMat rhs = d4.dual().gram_exact().scaled(qr(1, 9));
    CHECK(lhs == rhs);
}

TEST_CASE("dual involution holds for a float lattice to 1e-10") {
    Lattice b = cat::b14_f(1.314224989311);
    Eigen::MatrixXd g0 = b.gram();
    Eigen::MatrixXd g2 = b.dual().dual().gram();
    CHECK((g0 - g2).cwiseAbs().maxCoeff() < 1e-10 * g0.cwiseAbs().maxCoeff());
}

TEST_CASE("product lattice: block Gram and determinants") {
    Lattice z1 = cat::zn(1);
    Lattice prod = product_scaled({{z1, qr(1)}, {z1, qr(1)}});
    CHECK(prod.gram_exact() == QMat::identity(2));

    // Single component is unchanged.
    Lattice single = product_scaled({{cat::dn(4), qr(1)}});
    CHECK(single.exact_basis() == cat::dn(4).exact_basis());

    // Gram blocks scale with a_i^2.
    Quad a = qr(7, 5);
    Lattice p2 = product_scaled({{cat::zn(2), qr(1)}, {cat::dn(3), a}});
    QMat g = p2.gram_exact();
    QMat gd3 = cat::dn(3).gram_exact().scaled(a * a);
    for (int i = 0; i < 3; i++)
        for (int j = 0; j < 3; j++) CHECK(g.at(2 + i, 2 + j) == gd3.at(i, j));

    CHECK_THROWS_AS(product_scaled({{z1, qr(-1)}}), UsageError);
}

TEST_CASE("the 13-dim product has |det| = 8 a2^5 a3 before gluing") {
    Quad a2 = qr(21, 20), a3 = qr(11, 10);
    GlueSpec spec = cat::b13_gluespec(qr(1), a2, a3);
    Quad det = spec.product.det_exact().abs();
    Quad expect = qr(8) * pow_rat(a2.r(), 5) * a3;
    CHECK(det == expect);
}

TEST_CASE("glue with trivial group returns the product lattice") {
    GlueSpec spec;
    spec.product = cat::dn(4);
    GlueResult r = glue(spec);
    CHECK(r.group_order == 1);
    CHECK(r.lattice.det_exact().abs() == qr(2));
}

TEST_CASE("gluing the 14-dim product reproduces the catalog lattice") {
    Quad a = qr(25, 19);
    GlueResult r = glue(cat::b14_gluespec(a));
    CHECK(r.group_order == 4);
    Lattice direct = cat::b14(a);
    // Same point set: change of basis between the two generators is integer
    // with determinant +-1.
    QMat t = r.lattice.exact_basis() * direct.exact_basis().inverse();
    CHECK(t.is_integer());
    CHECK(t.det().abs() == Quad(ratq(1)));
    // Determinant law: |det glued| * |Gamma| = |det product|.
    Quad lhs = r.lattice.det_exact().abs() * qr(r.group_order);
    CHECK(lhs == cat::b14_gluespec(a).product.det_exact().abs());
}

TEST_CASE("gluing the 13-dim product reproduces the catalog lattice") {
    Quad a2 = qr(21, 20), a3 = qr(11, 10);
    GlueSpec spec = cat::b13_gluespec(qr(1), a2, a3);
    GlueResult r = glue(spec);
    CHECK(r.group_order == 8);
    Lattice direct = cat::b13(a2, a3);
    QMat t = r.lattice.exact_basis() * direct.exact_basis().inverse();
    CHECK(t.is_integer());
    CHECK(t.det().abs() == Quad(ratq(1)));
    CHECK(r.lattice.det_exact().abs() == pow_rat(a2.r(), 5) * a3);
}

TEST_CASE("glue membership: every generator lies in the glued lattice") {
    Quad a = qr(25, 19);
    GlueSpec spec = cat::b14_gluespec(a);
    GlueResult r = glue(spec);
    QMat inv = r.lattice.exact_basis().inverse();
    for (const auto& g : spec.generators) {
        auto coords = mul_row(g, inv);
        for (const auto& x : coords) CHECK(x.is_integer());
    }
}

TEST_CASE("glue rejects a generator of unbounded order") {
    GlueSpec spec;
    spec.product = cat::zn(2);
    spec.generators.push_back({Quad(ratq(1, 3)), Quad(ratq(0))});
    spec.order_cap = 64;
    GlueResult fine = glue(spec);  // order 3 is fine
    CHECK(fine.group_order == 3);
    GlueSpec bad;
    bad.product = cat::zn(2);
    bad.generators.push_back({Quad(ratq(1, 100000)), Quad(ratq(0))});
    bad.order_cap = 1024;
    CHECK_THROWS_AS(glue(bad), ComputeError);
}

TEST_CASE("LLL reduces a skewed 2d basis") {
    QMat b(2, 2);
    b.at(0, 0) = qr(1);
    b.at(1, 0) = qr(100);
    b.at(1, 1) = qr(1);
    LLLResult r = lll_reduce(Lattice::from_exact(std::move(b)));
    for (int i = 0; i < 2; i++)
        CHECK(r.reduced.basis().row(i).norm() <= std::sqrt(2.0) + 1e-12);
    // Unimodular bookkeeping: t * t_inv = identity.
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) {
            long acc = 0;
            for (int k = 0; k < 2; k++) acc += r.t[i][k] * r.t_inv[k][j];
            CHECK(acc == (i == j ? 1 : 0));
        }
    // Same lattice, same determinant.
    CHECK(r.reduced.det_exact().abs() == qr(1));
}

TEST_CASE("LLL leaves Z^n unchanged up to sign and permutation") {
    LLLResult r = lll_reduce(cat::zn(5));
    CHECK(r.reduced.gram_exact() == QMat::identity(5));
}

TEST_CASE("LLL on the 14-dim optimum exposes the shortest vector") {
    double aopt = 1.314224989311;
    LLLResult r = lll_reduce(cat::b14_f(aopt));
    double minrow = r.reduced.basis().rowwise().squaredNorm().minCoeff();
    CHECK(minrow == doctest::Approx(2 * aopt * aopt).epsilon(1e-9));
    CHECK(std::abs(r.reduced.det_abs() - cat::b14_f(aopt).det_abs()) <
          1e-12 * cat::b14_f(aopt).det_abs());
}

TEST_CASE("lattice file: identity document") {
    auto parsed = parse_lattice_file("rows:\n1 0\n0 1\n");
    auto* l = std::get_if<Lattice>(&parsed);
    REQUIRE(l != nullptr);
    CHECK(l->gram_exact() == QMat::identity(2));
}

TEST_CASE("lattice file: the 14-dim generator with a bound parameter") {
    std::string doc = print_lattice_file(cat::b14(Quad(ratq(25, 19))));
    auto parsed = parse_lattice_file(doc);
    auto* l = std::get_if<Lattice>(&parsed);
    REQUIRE(l != nullptr);
    CHECK(l->exact_basis() == cat::b14(Quad(ratq(25, 19))).exact_basis());
    Quad a = Quad(ratq(25, 19));
    CHECK(l->det_exact().abs() == Quad(ratq(0), ratq(9), 3) * a * a * a * a);
}

TEST_CASE("lattice file: errors carry position and reject bad scalars") {
    CHECK_THROWS_AS(parse_lattice_file("rows:\n1 1/0\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_lattice_file("rows:\n1 0\n0 bogus\n"), ParseError);
    CHECK_THROWS_AS(parse_lattice_file("rows:\n1 0 0\n0 1\n"), ParseError);  // ragged
    CHECK_THROWS_AS(parse_lattice_file("rows:\n1 0\n1 0\n"), UsageError);    // singular
    CHECK_THROWS_AS(parse_lattice_file("rows:\n1 sqrt(2)\n0 sqrt(3)\n"), FieldMismatch);
}

TEST_CASE("lattice file: glue block round-trips and glues") {
    GlueSpec spec = cat::b13_gluespec(qr(1), qr(21, 20), qr(11, 10));
    std::string doc = print_lattice_file(spec);
    auto parsed = parse_lattice_file(doc);
    auto* s = std::get_if<GlueSpec>(&parsed);
    REQUIRE(s != nullptr);
    CHECK(s->product.exact_basis() == spec.product.exact_basis());
    REQUIRE(s->generators.size() == 1);
    CHECK(s->generators[0] == spec.generators[0]);
    CHECK(glue(*s).group_order == 8);
}

TEST_CASE("parse/print round-trip is entry-exact for random small matrices") {
    std::mt19937_64 rng(4242);
    for (int it = 0; it < 20; it++) {
        QMat b(3, 3);
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++) {
                long n = static_cast<long>(rng() % 19) - 9;
                long d = static_cast<long>(rng() % 7) + 1;
                Rat s = ratq(static_cast<long>(rng() % 5) - 2, static_cast<long>(rng() % 3) + 1);
                b.at(i, j) = Quad(ratq(n, d), s, 3);
            }
        Lattice l;
        try {
            l = Lattice::from_exact(std::move(b));
        } catch (const UsageError&) {
            continue;  // singular draw
        }
        auto parsed = parse_lattice_file(print_lattice_file(l));
        CHECK(std::get<Lattice>(parsed).exact_basis() == l.exact_basis());
    }
}

TEST_CASE("catalog lookups") {
    auto z3 = std::get<Lattice>(cat::get("Z", {{"n", "3"}}));
    CHECK(z3.dim() == 3);
    auto b14 = std::get<Lattice>(cat::get("B14", {{"a", "1"}}));
    CHECK(b14.exact_basis().at(1, 1) == Quad::sqrt_of(3));
    CHECK(b14.exact_basis().field() == 3);
    auto& rows = cat::g13_rows();
    REQUIRE(rows.size() == 120);
    CHECK(rows[0].i == 0);
    CHECK(rows[0].j == 0);
    CHECK(rows[0].c == Int("237032097068933436616799735576002560"));
    CHECK_THROWS_AS(cat::get("nope", {}), UsageError);
    CHECK_THROWS_AS(cat::b14(Quad(ratq(-1))), UsageError);
    CHECK_THROWS_AS(cat::dn(2), UsageError);
    // Float parameters give float lattices.
    auto bf = std::get<Lattice>(cat::get("B14", {{"a", "1.3142"}}));
    CHECK_FALSE(bf.is_exact());
}

TEST_CASE("glue determinant law across all catalog glue specs") {
    struct Case {
        GlueSpec spec;
        long order;
    };
    std::vector<Case> cases;
    cases.push_back({cat::b14_gluespec(qr(25, 19)), 4});
    cases.push_back({cat::b14_gluespec(qr(1)), 4});
    cases.push_back({cat::b13_gluespec(qr(1), qr(1), qr(1)), 8});
    cases.push_back({cat::b13_gluespec(qr(1), qr(392, 391), qr(314, 313)), 8});
    for (auto& c : cases) {
        GlueResult r = glue(c.spec);
        CHECK(r.group_order == c.order);
        CHECK(r.lattice.det_exact().abs() * qr(r.group_order) ==
              c.spec.product.det_exact().abs());
    }
}
