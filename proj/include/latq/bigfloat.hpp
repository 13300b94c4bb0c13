#pragma once
#include <mpfr.h>

#include <string>

#include "latq/quad.hpp"

namespace latq {

/// High-precision float carrying a rigorous bound on its accumulated error:
/// the true value of the expression lies within value +- err(). Precision is
/// given in decimal digits (default 60).
class BigFloat {
public:
    static constexpr int kDefaultDigits = 60;

    explicit BigFloat(int digits = kDefaultDigits);
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept;
    ~BigFloat();

    static BigFloat of(const Rat& r, int digits = kDefaultDigits);
    static BigFloat of(const Quad& q, int digits = kDefaultDigits);
    static BigFloat of(long v, int digits = kDefaultDigits);
    static BigFloat of_double(double v, int digits = kDefaultDigits);
    static BigFloat pi(int digits = kDefaultDigits);

    double to_double() const;
    double err() const { return err_; }
    int digits() const { return digits_; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }

    // Value rounded to a fixed number of decimals, e.g. "0.069698255940".
    std::string to_fixed(int decimals) const;
    // True if rounding to `decimals` places is unaffected by err().
    bool fixed_is_certain(int decimals) const;

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
    BigFloat operator-() const;

    BigFloat sqrt() const;
    BigFloat exp() const;
    BigFloat log() const;        // requires certified-positive value
    BigFloat pow(const Rat& e) const;  // x^e via exp(e log x); x certified positive,
                                       // except integer e which allows any sign
    BigFloat abs() const;
    BigFloat mul_rat(const Rat& q) const;  // exact scalar, single rounding

    // Signed distance checks against exact/targets, inflated by err().
    bool within(double target, double tol) const;

    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw_mut() { return v_; }
    void set_err(double e) { err_ = e; }

private:
    mpfr_t v_;
    double err_ = 0.0;
    int digits_;
    friend class BigFloatOps;
};

}  // namespace latq
