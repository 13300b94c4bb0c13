#pragma once
#include "latq/polynomial.hpp"

namespace latq::exactnsm {

// ---------- 14-dimensional family ----------

// Second-moment numerator of the one-parameter family: integer-coefficient
// polynomial in v = a^2 (degree 15) over the constant kMoment14Den.
const Poly1& moment14_numerator();
const Rat& moment14_den();

// Stationarity polynomial in v = a^2, degree 15. Construction cross-checks
// the printed coefficients against the symbolic derivative of the
// second-moment expression, coefficient by coefficient; a mismatch throws.
const Poly1& f14();

// Closed-form NSM; valid inside the parametric phase 5/3 < a^2 < 13/7.
// Outside the phase the value is still computed and *in_phase reports false.
BigFloat g14(const Rat& a, int digits = 60, bool* in_phase = nullptr);
BigFloat g14_v(const BigFloat& v, int digits = 60);  // argument is a^2

struct Opt14 {
    RootInterval v0;     // certified bracket of the squared optimum
    BigFloat a_opt;
    BigFloat g_opt;
    int positive_root_index = 0;  // 1-based among positive roots (expect 2)
};
Opt14 optimize_g14(const Rat& tol);

struct SecondMomentAbg {
    BigFloat alpha, beta, gamma;
    bool has_gamma = false;
};
SecondMomentAbg alpha_beta_14(const Rat& a, int digits = 60);

// ---------- 13-dimensional family (a1 = 1, arguments a2, a3) ----------

BigFloat gA13(const Rat& a2, const Rat& a3, int digits = 80);
BigFloat gB13(const Rat& a2, const Rat& a3, int digits = 80);
BigFloat gB13_v(const BigFloat& v2, const BigFloat& v3, int digits = 80);
// gA13 - gB13, evaluated directly from the correction term.
BigFloat gap13_v(const BigFloat& v2, const BigFloat& v3, int digits = 80);

// Stationarity polynomials in (v2, v3) = (a2^2, a3^2), derived symbolically
// from the closed-form NSM; total degree 14 each (checked at construction,
// along with the cancellation of all fractional powers).
const Poly2& fB2();
const Poly2& fB3();

struct Opt13 {
    BigFloat v2, v3;     // squared optimal scales
    BigFloat a2, a3;
    BigFloat g;
    bool certified = false;   // interval Newton contracted on the box
    double box_radius = 0.0;  // radius of the certified box
    bool hessian_pd = false;  // finite-difference Hessian positive definite
};
Opt13 optimize_g13(const Rat& tol, int digits = 140);

SecondMomentAbg abg13(const Rat& a2, const Rat& a3, int digits = 80);
SecondMomentAbg abg13_v(const BigFloat& v2, const BigFloat& v3, int digits = 80);

struct EpsilonSteps {
    bool finite = true;   // false when the input is already isotropic
    BigFloat e1, e2;
};
EpsilonSteps epsilon_steps(const Rat& alpha, const Rat& beta, const Rat& gamma,
                           int digits = 60);

}  // namespace latq::exactnsm
