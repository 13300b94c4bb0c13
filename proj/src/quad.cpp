#include "latq/quad.hpp"

#include <cctype>
#include <cmath>

namespace latq {

Rat parse_rational(std::string_view text) {
    size_t a = 0, b = text.size();
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) a++;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) b--;
    std::string s(text.substr(a, b - a));
    if (s.empty()) throw UsageError("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(Int(s));
        }
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        return ratq(num, den);
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed rational literal: '" + s + "'");
    }
}

std::string to_string(const Rat& r) {
    return r.get_str();
}

Rat pow_rat(const Rat& r, long e) {
    if (e == 0) return ratq(1);
    if (r == 0 && e < 0) throw UsageError("0 raised to a negative power");
    Rat base = e > 0 ? r : Rat(1) / r;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rat acc = ratq(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

namespace {
bool squarefree_small(int d) {
    for (int p = 2; p * p <= d; p++)
        if (d % (p * p) == 0) return false;
    return true;
}
}  // namespace

Quad::Quad(Rat r, Rat s, int d) : r_(std::move(r)), s_(std::move(s)), d_(d) {
    if (d_ < 1) throw UsageError("quadratic field discriminant must be >= 1");
    if (d_ == 1) {
        r_ += s_;
        s_ = 0;
    } else if (s_ == 0) {
        d_ = 1;
    } else if (!squarefree_small(d_)) {
        throw UsageError("field discriminant must be squarefree: " + std::to_string(d_));
    }
}

Quad Quad::sqrt_of(int d) { return Quad(ratq(0), ratq(1), d); }

bool Quad::is_integer() const {
    return s_ == 0 && r_.get_den() == 1;
}

int Quad::unify(int d1, int d2) {
    if (d1 == d2) return d1;
    if (d1 == 1) return d2;
    if (d2 == 1) return d1;
    throw FieldMismatch("mixed quadratic fields sqrt(" + std::to_string(d1) +
                        ") and sqrt(" + std::to_string(d2) + ")");
}

int Quad::sign() const {
    if (s_ == 0) return sgn(r_);
    if (r_ == 0) return sgn(s_);
    int sr = sgn(r_), ss = sgn(s_);
    if (sr == ss) return sr;
    // Signs differ: compare r^2 against d s^2.
    int c = cmp(r_ * r_, d_ * s_ * s_);
    if (c == 0) return 0;  // cannot happen for squarefree d > 1, but harmless
    return c > 0 ? sr : ss;
}

double Quad::to_double() const {
    if (s_ == 0) return r_.get_d();
    return r_.get_d() + s_.get_d() * std::sqrt(static_cast<double>(d_));
}

std::string Quad::str() const {
    if (s_ == 0) return to_string(r_);
    std::string root = "sqrt(" + std::to_string(d_) + ")";
    std::string st;
    if (s_ == 1)
        st = root;
    else if (s_ == -1)
        st = "-" + root;
    else
        st = to_string(s_) + "*" + root;
    if (r_ == 0) return st;
    if (sgn(s_) > 0) return to_string(r_) + " + " + st;
    Rat neg = -s_;
    std::string stn = (neg == 1) ? root : to_string(neg) + "*" + root;
    return to_string(r_) + " - " + stn;
}

Quad& Quad::operator+=(const Quad& o) {
    d_ = unify(d_, o.d_);
    r_ += o.r_;
    s_ += o.s_;
    if (s_ == 0) d_ = 1;
    return *this;
}

Quad& Quad::operator-=(const Quad& o) {
    d_ = unify(d_, o.d_);
    r_ -= o.r_;
    s_ -= o.s_;
    if (s_ == 0) d_ = 1;
    return *this;
}

Quad& Quad::operator*=(const Quad& o) {
    int d = unify(d_, o.d_);
    Rat nr = r_ * o.r_ + Rat(d) * s_ * o.s_;
    Rat ns = r_ * o.s_ + s_ * o.r_;
    r_ = nr;
    s_ = ns;
    d_ = (ns == 0) ? 1 : d;
    return *this;
}

Quad& Quad::operator/=(const Quad& o) {
    if (o.is_zero()) throw UsageError("division by zero");
    if (o.s_ == 0) {
        r_ /= o.r_;
        s_ /= o.r_;
        return *this;
    }
    int d = unify(d_, o.d_);
    Rat nrm = o.field_norm();  // nonzero for squarefree d
    Quad num = *this * o.conj();
    r_ = num.r_ / nrm;
    s_ = num.s_ / nrm;
    d_ = (s_ == 0) ? 1 : d;
    return *this;
}

namespace {

struct QuadLexer {
    std::string_view s;
    size_t i = 0;
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) i++;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
};

// term := [sign] (rational ['*' sqrt] | sqrt)
// expr := term (('+'|'-') term)*
Quad parse_term(QuadLexer& lx) {
    int sign = 1;
    while (lx.peek() == '+' || lx.peek() == '-') {
        if (lx.s[lx.i] == '-') sign = -sign;
        lx.i++;
    }
    lx.skip();
    auto parse_sqrt = [&]() -> int {
        lx.i += 4;  // "sqrt"
        if (lx.peek() != '(') throw UsageError("expected '(' after sqrt");
        lx.i++;
        size_t j = lx.i;
        while (j < lx.s.size() && lx.s[j] != ')') j++;
        if (j >= lx.s.size()) throw UsageError("unterminated sqrt(");
        int d = std::stoi(std::string(lx.s.substr(lx.i, j - lx.i)));
        lx.i = j + 1;
        return d;
    };
    if (lx.s.substr(lx.i, 4) == "sqrt") {
        int d = parse_sqrt();
        return Quad(ratq(0), ratq(sign), d);
    }
    size_t j = lx.i;
    while (j < lx.s.size() &&
           (std::isdigit(static_cast<unsigned char>(lx.s[j])) || lx.s[j] == '/'))
        j++;
    if (j == lx.i) throw UsageError("malformed scalar literal");
    Rat coef = parse_rational(lx.s.substr(lx.i, j - lx.i)) * sign;
    lx.i = j;
    if (lx.peek() == '*') {
        lx.i++;
        lx.skip();
        if (lx.s.substr(lx.i, 4) != "sqrt") throw UsageError("expected sqrt after '*'");
        int d = parse_sqrt();
        return Quad(ratq(0), coef, d);
    }
    return Quad(coef);
}

}  // namespace

Quad parse_quad(std::string_view text) {
    QuadLexer lx{text};
    Quad acc = parse_term(lx);
    while (!lx.eof()) {
        char c = lx.peek();
        if (c != '+' && c != '-') throw UsageError("trailing characters in scalar literal");
        acc += parse_term(lx);
    }
    return acc;
}

}  // namespace latq
