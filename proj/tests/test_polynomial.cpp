#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "latq/polynomial.hpp"

using namespace latq;

namespace {
Poly1 x2_minus_2() { return Poly1({ratq(-2), ratq(0), ratq(1)}); }
}  // namespace

TEST_CASE("polynomial evaluation is exact") {
    Poly1 p = x2_minus_2();
    CHECK(p.eval(ratq(3, 2)) == ratq(1, 4));
    Poly1 zero;
    CHECK(zero.eval(ratq(5, 7)) == 0);
    CHECK(zero.degree() == -1);
}

TEST_CASE("derivative and algebra") {
    Poly1 p({ratq(1), ratq(-2), ratq(0), ratq(4)});  // 4x^3 - 2x + 1
    Poly1 d = p.derivative();
    CHECK(d.coeffs() == std::vector<Rat>{ratq(-2), ratq(0), ratq(12)});
    Poly1 q = p * p - p.scaled(ratq(2));
    CHECK(q.eval(ratq(1, 2)) == p.eval(ratq(1, 2)) * p.eval(ratq(1, 2)) - 2 * p.eval(ratq(1, 2)));
}

TEST_CASE("root isolation: x^2 - 2 on (0, 2)") {
    auto roots = isolate_real_roots(x2_minus_2(), ratq(0), ratq(2));
    REQUIRE(roots.size() == 1);
    auto r = refine_root(x2_minus_2(), roots[0], ratq(1, 1000000000000L));
    double mid = r.mid().get_d();
    CHECK(std::abs(mid - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("root isolation: double root handled via squarefree part") {
    Poly1 p({ratq(1), ratq(-2), ratq(1)});  // (x-1)^2
    auto roots = isolate_real_roots(p, ratq(0), ratq(2));
    REQUIRE(roots.size() == 1);
    auto r = refine_root(p, roots[0], ratq(1, 1L << 30));
    CHECK(r.lo <= 1);
    CHECK(r.hi >= 1);
}

TEST_CASE("linear polynomial refines to the exact rational root") {
    Poly1 p({ratq(-1), ratq(3)});  // 3x - 1
    auto roots = isolate_real_roots(p, ratq(0), ratq(1));
    REQUIRE(roots.size() == 1);
    auto r = refine_root(p, roots[0], ratq(1, 1000000));
    // Bisection hits 1/3 only if it is a dyadic midpoint; either way the
    // bracket must contain exactly 1/3.
    CHECK(r.lo <= ratq(1, 3));
    CHECK(r.hi >= ratq(1, 3));
    if (r.exact()) CHECK(r.lo == ratq(1, 3));
}

TEST_CASE("isolation separates clustered roots") {
    // (x - 1/5)(x - 1/4)(x - 1/3) roots 0.2, 0.25, 0.333...
    Poly1 p = Poly1({ratq(-1, 5), ratq(1)}) * Poly1({ratq(-1, 4), ratq(1)}) *
              Poly1({ratq(-1, 3), ratq(1)});
    auto roots = isolate_real_roots(p, ratq(0), ratq(1));
    REQUIRE(roots.size() == 3);
    for (size_t i = 0; i + 1 < roots.size(); i++) CHECK(roots[i].hi <= roots[i + 1].lo);
    auto mid = refine_root(p, roots[1], ratq(1, 100000000));
    CHECK(mid.lo <= ratq(1, 4));
    CHECK(mid.hi >= ratq(1, 4));
}

TEST_CASE("zero polynomial and bad intervals are rejected") {
    Poly1 zero;
    CHECK_THROWS_AS(isolate_real_roots(zero, ratq(0), ratq(1)), UsageError);
    CHECK_THROWS_AS(refine_root(x2_minus_2(), {ratq(0), ratq(1)}, ratq(1, 100)),
                    ComputeError);  // no sign change on (0,1)
    CHECK_THROWS_AS(refine_root(x2_minus_2(), {ratq(1), ratq(2)}, ratq(0)), UsageError);
}

TEST_CASE("refined root certifies a sign change and small residual") {
    Poly1 p = x2_minus_2();
    auto r = refine_root(p, {ratq(1), ratq(2)}, ratq(1, 1000000000000L));
    CHECK(p.sign_at(r.lo) * p.sign_at(r.hi) < 0);
    // |p(mid)| <= sup|p'| * width on the bracket
    Rat width = r.width();
    Rat deriv_bound = ratq(4);  // |2x| <= 4 on (1,2)
    CHECK(abs(p.eval(r.mid())) <= deriv_bound * width);
}

TEST_CASE("bivariate polynomial basics") {
    Poly2 p;  // x^2 y + 3xy - 7
    p.add_term(2, 1, ratq(1));
    p.add_term(1, 1, ratq(3));
    p.add_term(0, 0, ratq(-7));
    CHECK(p.total_degree() == 3);
    CHECK(p.eval(ratq(2), ratq(5)) == ratq(4 * 5 + 3 * 10 - 7));
    Poly2 px = p.dx();
    CHECK(px.eval(ratq(2), ratq(5)) == ratq(2 * 2 * 5 + 15));
    Poly2 py = p.dy();
    CHECK(py.eval(ratq(2), ratq(5)) == ratq(4 + 6));
    Poly2 q = p - p;
    CHECK(q.is_zero());
    Poly2 lin;
    lin.add_term(1, 0, ratq(2));
    lin.add_term(0, 1, ratq(-1));
    Poly2 cube = lin.pow(3);
    CHECK(cube.total_degree() == 3);
    CHECK(cube.eval(ratq(1), ratq(1)) == ratq(1));  // (2-1)^3
}
