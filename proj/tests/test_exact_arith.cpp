#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "latq/bigfloat.hpp"
#include "latq/quad.hpp"
#include "latq/rational.hpp"

using namespace latq;

TEST_CASE("rational parse and canonical form") {
    CHECK(parse_rational("3/6") == ratq(1, 2));
    CHECK(parse_rational("-10/4") == ratq(-5, 2));
    CHECK(parse_rational("7") == ratq(7));
    CHECK(parse_rational(" 25/19 ") == ratq(25, 19));
    CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rational("abc"), UsageError);
    CHECK(parse_rational("-6/-4") == ratq(3, 2));  // gmp canonicalizes sign
    CHECK(to_string(ratq(-5, 2)) == "-5/2");
}

TEST_CASE("rational arithmetic round-trips on random big operands") {
    std::mt19937_64 rng(12345);
    for (int it = 0; it < 200; it++) {
        Rat a = ratq(static_cast<long>(rng() % 2000000) - 1000000,
                     static_cast<long>(rng() % 999983) + 1);
        Rat c = ratq(static_cast<long>(rng() % 2000000) - 1000000,
                     static_cast<long>(rng() % 999983) + 1);
        CHECK((a + c) - c == a);
        if (c != 0) CHECK((a / c) * c == a);
        CHECK((a * c) - (c * a) == 0);
    }
}

TEST_CASE("quad field arithmetic") {
    Quad q3 = Quad::sqrt_of(3);
    CHECK((q3 * q3) == Quad(ratq(3)));
    CHECK((q3 * q3).is_rational());

    Quad x(ratq(1, 2), ratq(-1, 2), 3);  // 1/2 - sqrt(3)/2
    Quad y = x * x.conj();
    CHECK(y.is_rational());
    CHECK(y.r() == x.field_norm());
    CHECK(x.field_norm() == ratq(1, 4) - ratq(3, 4));

    // (r + s sqrt d)(r - s sqrt d) = r^2 - d s^2, randomized
    std::mt19937_64 rng(99);
    for (int it = 0; it < 100; it++) {
        Rat r = ratq(static_cast<long>(rng() % 200) - 100, static_cast<long>(rng() % 97) + 1);
        Rat s = ratq(static_cast<long>(rng() % 200) - 100, static_cast<long>(rng() % 97) + 1);
        Quad z(r, s, 2);
        CHECK((z * z.conj()).r() == r * r - 2 * s * s);
    }
}

TEST_CASE("quad exact sign and comparisons") {
    Quad a(ratq(-7), ratq(5), 2);  // 5 sqrt2 - 7 = 0.0710 > 0
    CHECK(a.sign() == 1);
    Quad b(ratq(7), ratq(-5), 2);
    CHECK(b.sign() == -1);
    CHECK(b < a);
    Quad c(ratq(0), ratq(0), 3);
    CHECK(c.sign() == 0);
    CHECK(Quad(ratq(3, 2)) > Quad(ratq(4, 3)));
}

TEST_CASE("quad field mixing rules") {
    Quad q2 = Quad::sqrt_of(2);
    Quad q3 = Quad::sqrt_of(3);
    CHECK_THROWS_AS(q2 + q3, FieldMismatch);
    CHECK((q2 + Quad(ratq(1))).d() == 2);  // rationals embed into any field
    CHECK_THROWS_AS(Quad(ratq(0), ratq(1), 12), UsageError);  // 12 not squarefree
}

TEST_CASE("quad literal parsing matches spec syntax") {
    CHECK(parse_quad("1/2 + -1/2*sqrt(3)") == Quad(ratq(1, 2), ratq(-1, 2), 3));
    CHECK(parse_quad("1/2 - 1/2*sqrt(3)") == Quad(ratq(1, 2), ratq(-1, 2), 3));
    CHECK(parse_quad("sqrt(2)") == Quad::sqrt_of(2));
    CHECK(parse_quad("-sqrt(2)") == -Quad::sqrt_of(2));
    CHECK(parse_quad("25/19") == Quad(ratq(25, 19)));
    CHECK(parse_quad("3") == Quad(ratq(3)));
}

TEST_CASE("bigfloat arithmetic with error bounds") {
    BigFloat a = BigFloat::of(ratq(1, 3), 60);
    BigFloat b = BigFloat::of(ratq(1, 7), 60);
    BigFloat c = a + b;
    CHECK(c.within(10.0 / 21.0, 1e-15));
    CHECK(c.err() < 1e-55);

    // sqrt(3)*sqrt(3) = 3 exactly when done in the quadratic field first
    Quad q3 = Quad::sqrt_of(3);
    BigFloat exact = BigFloat::of(q3 * q3, 60);
    CHECK(exact.to_double() == 3.0);
    CHECK(exact.err() == 0.0);

    // ... and to within err when done in floating point
    BigFloat f = BigFloat::of(q3, 60);
    CHECK((f * f).within(3.0, 0.0));
}

TEST_CASE("bigfloat err is a true bound: double-precision recomputation agrees") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 50; it++) {
        Rat x = ratq(static_cast<long>(rng() % 10000) + 1, static_cast<long>(rng() % 999) + 1) + 1;
        Rat e = ratq(static_cast<long>(rng() % 40) + 1, static_cast<long>(rng() % 7) + 1);
        BigFloat lo = BigFloat::of(x, 40).pow(e).log().sqrt();
        BigFloat hi = BigFloat::of(x, 80).pow(e).log().sqrt();
        double diff = std::abs(lo.to_double() - hi.to_double());
        CHECK(diff <= lo.err() + hi.err() + 1e-30);
    }
}

TEST_CASE("bigfloat embedding commutes with quad arithmetic within err") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 50; it++) {
        Quad x(ratq(static_cast<long>(rng() % 100) - 50, 7), ratq(static_cast<long>(rng() % 100) - 50, 9), 3);
        Quad y(ratq(static_cast<long>(rng() % 100) - 50, 5), ratq(static_cast<long>(rng() % 100) - 50, 3), 3);
        BigFloat lhs = BigFloat::of(x * y, 50);
        BigFloat rhs = BigFloat::of(x, 50) * BigFloat::of(y, 50);
        double diff = std::abs(lhs.to_double() - rhs.to_double());
        CHECK(diff <= lhs.err() + rhs.err() + 1e-40);
    }
}

TEST_CASE("bigfloat fixed-point rendering") {
    BigFloat x = BigFloat::of(ratq(1, 3), 60);
    CHECK(x.to_fixed(6) == "0.333333");
    CHECK(x.fixed_is_certain(6));
    BigFloat y = BigFloat::of(ratq(-55, 1000000), 60);
    CHECK(y.to_fixed(6) == "-0.000055");
    CHECK_THROWS_AS(BigFloat::of(ratq(-2), 30).sqrt(), UsageError);
    CHECK_THROWS_AS(BigFloat::of(ratq(1)) / BigFloat::of(ratq(0)), UsageError);
}
