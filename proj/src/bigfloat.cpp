#include "latq/bigfloat.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace latq {

namespace {
mpfr_prec_t bits_for(int digits) {
    return static_cast<mpfr_prec_t>(digits * 3.3220 + 24);
}

// One ulp of x at its precision; 0 for zero/exact values.
double ulp_of(const mpfr_t x) {
    if (mpfr_zero_p(x) || !mpfr_number_p(x)) return 0.0;
    mpfr_exp_t e = mpfr_get_exp(x);
    long p = mpfr_get_prec(x);
    return std::ldexp(1.0, static_cast<int>(e - p));
}

constexpr double kInflate = 1.0 + 1e-12;
}  // namespace

BigFloat::BigFloat(int digits) : digits_(digits) {
    mpfr_init2(v_, bits_for(digits));
    mpfr_set_zero(v_, 1);
}
BigFloat::BigFloat(const BigFloat& o) : err_(o.err_), digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}
BigFloat::BigFloat(BigFloat&& o) noexcept : err_(o.err_), digits_(o.digits_) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}
BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
        err_ = o.err_;
        digits_ = o.digits_;
    }
    return *this;
}
BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
    if (this != &o) {
        mpfr_swap(v_, o.v_);
        err_ = o.err_;
        digits_ = o.digits_;
    }
    return *this;
}
BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::of(const Rat& r, int digits) {
    BigFloat x(digits);
    int t = mpfr_set_q(x.v_, r.get_mpq_t(), MPFR_RNDN);
    x.err_ = t == 0 ? 0.0 : ulp_of(x.v_);
    return x;
}

BigFloat BigFloat::of(const Quad& q, int digits) {
    if (q.is_rational()) return of(q.r(), digits);
    BigFloat root(digits);
    int t = mpfr_sqrt_ui(root.v_, static_cast<unsigned long>(q.d()), MPFR_RNDN);
    root.err_ = t == 0 ? 0.0 : ulp_of(root.v_);
    return of(q.r(), digits) + of(q.s(), digits) * root;
}

BigFloat BigFloat::of(long v, int digits) {
    BigFloat x(digits);
    mpfr_set_si(x.v_, v, MPFR_RNDN);
    x.err_ = 0.0;
    return x;
}

BigFloat BigFloat::of_double(double v, int digits) {
    BigFloat x(digits);
    mpfr_set_d(x.v_, v, MPFR_RNDN);
    x.err_ = 0.0;
    return x;
}

BigFloat BigFloat::pi(int digits) {
    BigFloat x(digits);
    mpfr_const_pi(x.v_, MPFR_RNDN);
    x.err_ = ulp_of(x.v_);
    return x;
}

double BigFloat::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

std::string BigFloat::to_fixed(int decimals) const {
    char buf[512];
    mpfr_snprintf(buf, sizeof(buf), "%.*Rf", decimals, v_);
    return std::string(buf);
}

bool BigFloat::fixed_is_certain(int decimals) const {
    // The rounding decision is stable if nudging by err cannot cross a
    // half-ulp-of-decimal boundary.
    double scale = std::pow(10.0, decimals);
    BigFloat t(digits_);
    mpfr_mul_d(t.v_, v_, scale, MPFR_RNDN);
    mpfr_t frac;
    mpfr_init2(frac, mpfr_get_prec(v_));
    mpfr_frac(frac, t.v_, MPFR_RNDN);
    double f = std::fabs(mpfr_get_d(frac, MPFR_RNDN));
    mpfr_clear(frac);
    double dist = std::fabs(f - 0.5);  // distance to the rounding boundary
    return err_ * scale * 4.0 < dist;
}

namespace {
int common_digits(const BigFloat& a, const BigFloat& b) {
    return std::max(a.digits(), b.digits());
}
}  // namespace

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(common_digits(a, b));
    int t = mpfr_add(r.raw_mut(), a.raw(), b.raw(), MPFR_RNDN);
    r.set_err((a.err() + b.err()) * kInflate + (t ? ulp_of(r.raw()) : 0.0));
    return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(common_digits(a, b));
    int t = mpfr_sub(r.raw_mut(), a.raw(), b.raw(), MPFR_RNDN);
    r.set_err((a.err() + b.err()) * kInflate + (t ? ulp_of(r.raw()) : 0.0));
    return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(common_digits(a, b));
    int t = mpfr_mul(r.raw_mut(), a.raw(), b.raw(), MPFR_RNDN);
    double ma = std::fabs(mpfr_get_d(a.raw(), MPFR_RNDN));
    double mb = std::fabs(mpfr_get_d(b.raw(), MPFR_RNDN));
    r.set_err((ma * b.err() + mb * a.err() + a.err() * b.err()) * kInflate +
              (t ? ulp_of(r.raw()) : 0.0));
    return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    if (mpfr_zero_p(b.raw())) throw UsageError("BigFloat division by zero");
    BigFloat r(common_digits(a, b));
    mpfr_div(r.raw_mut(), a.raw(), b.raw(), MPFR_RNDN);
    double mb = std::fabs(mpfr_get_d(b.raw(), MPFR_RNDN));
    double mr = std::fabs(mpfr_get_d(r.raw(), MPFR_RNDN));
    if (b.err() >= 0.5 * mb)
        throw ComputeError("BigFloat divisor not certified away from zero");
    r.set_err(((a.err() + mr * b.err()) / (mb - b.err())) * kInflate + ulp_of(r.raw()));
    return r;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(digits_);
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    r.err_ = err_;
    return r;
}

BigFloat BigFloat::sqrt() const {
    if (mpfr_sgn(v_) < 0 && std::fabs(to_double()) > err_)
        throw UsageError("sqrt of certified-negative value");
    BigFloat r(digits_);
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    double m = mpfr_get_d(r.v_, MPFR_RNDN);
    r.err_ = (m > 0 ? err_ / (2.0 * m) : std::sqrt(err_)) * kInflate + ulp_of(r.v_);
    return r;
}

BigFloat BigFloat::exp() const {
    BigFloat r(digits_);
    mpfr_exp(r.v_, v_, MPFR_RNDN);
    double m = std::fabs(mpfr_get_d(r.v_, MPFR_RNDN));
    r.err_ = m * err_ * kInflate * (1.0 + err_) + ulp_of(r.v_);
    return r;
}

BigFloat BigFloat::log() const {
    double m = to_double();
    if (mpfr_sgn(v_) <= 0 || err_ >= 0.5 * m)
        throw UsageError("log requires a certified-positive value");
    BigFloat r(digits_);
    mpfr_log(r.v_, v_, MPFR_RNDN);
    r.err_ = (err_ / (m - err_)) * kInflate + ulp_of(r.v_);
    return r;
}

BigFloat BigFloat::pow(const Rat& e) const {
    if (e == 0) return of(1L, digits_);
    if (e.get_den() == 1 && mpfr_sgn(v_) < 0) {
        // Integer power of a negative value: repeated squaring on |x| with sign.
        long n = mpz_get_si(e.get_num().get_mpz_t());
        BigFloat ax = abs();
        BigFloat r = ax.log().mul_rat(Rat(std::labs(n))).exp();
        if (n % 2 != 0) r = -r;
        if (n < 0) r = of(1L, digits_) / r;
        return r;
    }
    BigFloat l = log();
    return l.mul_rat(e).exp();
}

BigFloat BigFloat::abs() const {
    BigFloat r(digits_);
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    r.err_ = err_;
    return r;
}

BigFloat BigFloat::mul_rat(const Rat& q) const {
    BigFloat r(digits_);
    mpfr_mul_q(r.v_, v_, q.get_mpq_t(), MPFR_RNDN);
    r.err_ = err_ * std::fabs(q.get_d()) * kInflate + ulp_of(r.v_);
    return r;
}

bool BigFloat::within(double target, double tol) const {
    BigFloat d(digits_);
    mpfr_sub_d(d.v_, v_, target, MPFR_RNDN);
    double diff = std::fabs(mpfr_get_d(d.v_, MPFR_RNDN));
    return diff <= tol + err_;
}

}  // namespace latq
