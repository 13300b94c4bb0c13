#pragma once
#include <string>

#include "latq/rational.hpp"

namespace latq {

/// Element r + s*sqrt(d) of a real quadratic field (d squarefree, d = 1 means
/// the element is plain rational). All arithmetic is exact; comparisons are
/// decided without floating point.
class Quad {
public:
    Quad() : d_(1) {}
    Quad(long n) : r_(ratq(n)), d_(1) {}  // NOLINT: implicit by design
    Quad(Rat r) : r_(std::move(r)), d_(1) {}  // NOLINT
    Quad(Rat r, Rat s, int d);

    static Quad sqrt_of(int d);  // the element sqrt(d)

    const Rat& r() const { return r_; }
    const Rat& s() const { return s_; }
    int d() const { return d_; }

    bool is_rational() const { return s_ == 0; }
    bool is_zero() const { return r_ == 0 && s_ == 0; }
    bool is_integer() const;

    Quad conj() const { return Quad(r_, -s_, d_); }
    Rat field_norm() const { return r_ * r_ - d_ * s_ * s_; }

    int sign() const;  // exact sign of the real value
    Quad abs() const { return sign() >= 0 ? *this : -*this; }

    double to_double() const;
    std::string str() const;

    Quad operator-() const { return Quad(-r_, -s_, d_); }
    Quad& operator+=(const Quad& o);
    Quad& operator-=(const Quad& o);
    Quad& operator*=(const Quad& o);
    Quad& operator/=(const Quad& o);

    friend Quad operator+(Quad a, const Quad& b) { return a += b; }
    friend Quad operator-(Quad a, const Quad& b) { return a -= b; }
    friend Quad operator*(Quad a, const Quad& b) { return a *= b; }
    friend Quad operator/(Quad a, const Quad& b) { return a /= b; }

    friend bool operator==(const Quad& a, const Quad& b) {
        return a.r_ == b.r_ && a.s_ == b.s_ && (a.s_ == 0 || a.d_ == b.d_);
    }
    friend bool operator!=(const Quad& a, const Quad& b) { return !(a == b); }
    friend bool operator<(const Quad& a, const Quad& b) { return (a - b).sign() < 0; }
    friend bool operator>(const Quad& a, const Quad& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const Quad& a, const Quad& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const Quad& a, const Quad& b) { return (a - b).sign() >= 0; }

    // Common field for mixed expressions; throws FieldMismatch if both sides
    // carry distinct nontrivial discriminants.
    static int unify(int d1, int d2);

private:
    Rat r_, s_;
    int d_;
};

// Parses "p/q", "p/q*sqrt(d)", "p/q + r/s*sqrt(d)", "sqrt(d)", with optional
// signs and whitespace.
Quad parse_quad(std::string_view text);

}  // namespace latq
