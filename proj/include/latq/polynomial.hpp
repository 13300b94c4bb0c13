#pragma once
#include <map>
#include <utility>
#include <vector>

#include "latq/bigfloat.hpp"
#include "latq/rational.hpp"

namespace latq {

/// Dense univariate polynomial over the rationals. Zero polynomial has
/// degree -1; no trailing zero coefficients are stored.
class Poly1 {
public:
    Poly1() = default;
    explicit Poly1(std::vector<Rat> coeffs);  // coeffs[k] multiplies x^k
    static Poly1 constant(const Rat& c);
    static Poly1 x();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Rat& coeff(int k) const;
    const std::vector<Rat>& coeffs() const { return c_; }

    Rat eval(const Rat& x) const;
    double eval(double x) const;
    BigFloat eval(const BigFloat& x) const;
    int sign_at(const Rat& x) const { return sgn(eval(x)); }

    Poly1 derivative() const;
    Poly1 squarefree_part() const;

    friend Poly1 operator+(const Poly1& a, const Poly1& b);
    friend Poly1 operator-(const Poly1& a, const Poly1& b);
    friend Poly1 operator*(const Poly1& a, const Poly1& b);
    Poly1 scaled(const Rat& c) const;

    // Euclidean remainder (field coefficients).
    static Poly1 rem(const Poly1& a, const Poly1& b);
    static Poly1 gcd(const Poly1& a, const Poly1& b);  // monic

    // Upper bound > all real root magnitudes (Cauchy bound).
    Rat root_bound() const;

private:
    std::vector<Rat> c_;
    void trim();
};

struct RootInterval {
    Rat lo, hi;       // lo <= root <= hi; lo == hi means exact rational root
    bool exact() const { return lo == hi; }
    Rat mid() const { return (lo + hi) / 2; }
    Rat width() const { return hi - lo; }
};

/// Sturm chain of the squarefree part; counts and isolates real roots with
/// exact sign arithmetic.
class SturmChain {
public:
    explicit SturmChain(const Poly1& p);  // p nonzero

    // Number of distinct real roots in (lo, hi].
    int count_roots(const Rat& lo, const Rat& hi) const;

    const Poly1& squarefree() const { return sf_; }

private:
    std::vector<Poly1> chain_;
    Poly1 sf_;
    int variations_at(const Rat& x) const;
};

// Disjoint intervals, each containing exactly one distinct real root of p in
// (lo, hi]. Multiple roots are collapsed via the squarefree part.
// Throws UsageError on the zero polynomial.
std::vector<RootInterval> isolate_real_roots(const Poly1& p, const Rat& lo, const Rat& hi);

// Bisects an isolating interval until its width is below tol. The returned
// interval brackets the root with certified signs (or is an exact root).
RootInterval refine_root(const Poly1& p, RootInterval iv, const Rat& tol);

/// Sparse bivariate polynomial over the rationals; exponents (i, j) of x^i y^j.
class Poly2 {
public:
    using Key = std::pair<int, int>;

    Poly2() = default;

    void add_term(int i, int j, const Rat& c);
    const std::map<Key, Rat>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int total_degree() const;

    Rat eval(const Rat& x, const Rat& y) const;
    BigFloat eval(const BigFloat& x, const BigFloat& y) const;

    Poly2 dx() const;
    Poly2 dy() const;

    friend Poly2 operator+(const Poly2& a, const Poly2& b);
    friend Poly2 operator-(const Poly2& a, const Poly2& b);
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    Poly2 scaled(const Rat& c) const;
    Poly2 pow(int e) const;

private:
    std::map<Key, Rat> t_;
    void strip_zero(const Key& k);
};

}  // namespace latq
