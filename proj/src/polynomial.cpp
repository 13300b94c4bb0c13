#include "latq/polynomial.hpp"

#include <algorithm>

namespace latq {

Poly1::Poly1(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly1 Poly1::constant(const Rat& c) { return Poly1({c}); }
Poly1 Poly1::x() { return Poly1({ratq(0), ratq(1)}); }

void Poly1::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat& Poly1::coeff(int k) const {
    static const Rat zero;
    if (k < 0 || k > degree()) return zero;
    return c_[static_cast<size_t>(k)];
}

Rat Poly1::eval(const Rat& x) const {
    Rat acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Poly1::eval(double x) const {
    double acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

BigFloat Poly1::eval(const BigFloat& x) const {
    BigFloat acc = BigFloat::of(0L, x.digits());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * x + BigFloat::of(*it, x.digits());
    return acc;
}

Poly1 Poly1::derivative() const {
    if (c_.size() <= 1) return Poly1();
    std::vector<Rat> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); k++) d[k - 1] = c_[k] * Rat(static_cast<long>(k));
    return Poly1(std::move(d));
}

Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t k = 0; k < c.size(); k++) {
        if (k < a.c_.size()) c[k] += a.c_[k];
        if (k < b.c_.size()) c[k] += b.c_[k];
    }
    return Poly1(std::move(c));
}

Poly1 operator-(const Poly1& a, const Poly1& b) { return a + b.scaled(ratq(-1)); }

Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return Poly1();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); i++)
        for (size_t j = 0; j < b.c_.size(); j++) c[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(c));
}

Poly1 Poly1::scaled(const Rat& s) const {
    std::vector<Rat> c(c_);
    for (auto& x : c) x *= s;
    return Poly1(std::move(c));
}

Poly1 Poly1::rem(const Poly1& a, const Poly1& b) {
    if (b.is_zero()) throw UsageError("polynomial division by zero");
    std::vector<Rat> r = a.c_;
    int db = b.degree();
    const Rat& lb = b.c_.back();
    for (int k = static_cast<int>(r.size()) - 1; k >= db; k--) {
        if (r[static_cast<size_t>(k)] == 0) continue;
        Rat q = r[static_cast<size_t>(k)] / lb;
        for (int j = 0; j <= db; j++)
            r[static_cast<size_t>(k - db + j)] -= q * b.c_[static_cast<size_t>(j)];
        r[static_cast<size_t>(k)] = 0;
    }
    r.resize(static_cast<size_t>(std::max(db, 0)));
    return Poly1(std::move(r));
}

Poly1 Poly1::gcd(const Poly1& a, const Poly1& b) {
    Poly1 x = a, y = b;
    while (!y.is_zero()) {
        Poly1 r = rem(x, y);
        x = y;
        y = r;
    }
    if (x.is_zero()) return x;
    return x.scaled(Rat(1) / x.c_.back());  // monic
}

Poly1 Poly1::squarefree_part() const {
    if (degree() <= 1) return *this;
    Poly1 g = gcd(*this, derivative());
    if (g.degree() <= 0) return *this;
    // Exact division this / g.
    std::vector<Rat> r = c_;
    int dg = g.degree();
    int dq = degree() - dg;
    std::vector<Rat> q(static_cast<size_t>(dq) + 1);
    const Rat& lg = g.c_.back();
    for (int k = degree(); k >= dg; k--) {
        Rat f = r[static_cast<size_t>(k)] / lg;
        q[static_cast<size_t>(k - dg)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= dg; j++)
            r[static_cast<size_t>(k - dg + j)] -= f * g.c_[static_cast<size_t>(j)];
    }
    return Poly1(std::move(q));
}

Rat Poly1::root_bound() const {
    if (degree() < 1) return ratq(1);
    Rat m;
    const Rat& lead = c_.back();
    for (size_t k = 0; k + 1 < c_.size(); k++) {
        Rat t = abs(c_[k] / lead);
        if (t > m) m = t;
    }
    return m + 1;
}

SturmChain::SturmChain(const Poly1& p) {
    if (p.is_zero()) throw UsageError("Sturm chain of the zero polynomial");
    sf_ = p.squarefree_part();
    chain_.push_back(sf_);
    if (sf_.degree() >= 1) {
        chain_.push_back(sf_.derivative());
        while (chain_.back().degree() >= 1) {
            Poly1 r = Poly1::rem(chain_[chain_.size() - 2], chain_.back());
            if (r.is_zero()) break;
            chain_.push_back(r.scaled(ratq(-1)));
        }
    }
}

int SturmChain::variations_at(const Rat& x) const {
    int v = 0, prev = 0;
    for (const auto& p : chain_) {
        int s = p.sign_at(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) v++;
        prev = s;
    }
    return v;
}

int SturmChain::count_roots(const Rat& lo, const Rat& hi) const {
    if (lo >= hi) return 0;
    return variations_at(lo) - variations_at(hi);
}

std::vector<RootInterval> isolate_real_roots(const Poly1& p, const Rat& lo, const Rat& hi) {
    if (p.is_zero()) throw UsageError("cannot isolate roots of the zero polynomial");
    SturmChain chain(p);
    const Poly1& sf = chain.squarefree();
    std::vector<RootInterval> out;

    // Bisect (a, b] until each piece holds at most one root.
    struct Seg { Rat a, b; int count; };
    std::vector<Seg> work;
    // An endpoint that is itself a root is reported as an exact interval.
    if (sf.sign_at(lo) == 0) out.push_back({lo, lo});
    int total = chain.count_roots(lo, hi);
    if (total > 0) work.push_back({lo, hi, total});
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        if (s.count == 1) {
            // Shrink a few times so the interval is tight-ish before returning.
            Rat a = s.a, b = s.b;
            for (int it = 0; it < 4; it++) {
                Rat m = (a + b) / 2;
                if (sf.sign_at(m) == 0) {
                    a = b = m;
                    break;
                }
                if (chain.count_roots(a, m) == 1)
                    b = m;
                else
                    a = m;
            }
            out.push_back({a, b});
            continue;
        }
        Rat m = (s.a + s.b) / 2;
        int left = chain.count_roots(s.a, m);  // counts m itself if it is a root
        if (sf.sign_at(m) == 0) {
            out.push_back({m, m});
            left--;
        }
        int right = s.count - left - (sf.sign_at(m) == 0 ? 1 : 0);
        if (left > 0) work.push_back({s.a, m, left});
        if (right > 0) work.push_back({m, s.b, right});
    }
    std::sort(out.begin(), out.end(),
              [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    return out;
}

RootInterval refine_root(const Poly1& p, RootInterval iv, const Rat& tol) {
    if (tol <= 0) throw UsageError("refine_root requires tol > 0");
    Poly1 sf = p.squarefree_part();
    if (iv.exact()) return iv;
    int slo = sf.sign_at(iv.lo);
    int shi = sf.sign_at(iv.hi);
    if (slo == 0) return {iv.lo, iv.lo};
    if (shi == 0) return {iv.hi, iv.hi};
    if (slo == shi)
        throw ComputeError("refine_root: no certified sign change over the interval");
    while (iv.hi - iv.lo > tol) {
        Rat m = (iv.lo + iv.hi) / 2;
        int sm = sf.sign_at(m);
        if (sm == 0) return {m, m};
        if (sm == slo)
            iv.lo = m;
        else
            iv.hi = m;
    }
    return iv;
}

// ---- Poly2 ----

void Poly2::strip_zero(const Key& k) {
    auto it = t_.find(k);
    if (it != t_.end() && it->second == 0) t_.erase(it);
}

void Poly2::add_term(int i, int j, const Rat& c) {
    if (c == 0) return;
    Key k{i, j};
    t_[k] += c;
    strip_zero(k);
}

int Poly2::total_degree() const {
    int d = -1;
    for (const auto& [k, c] : t_) d = std::max(d, k.first + k.second);
    return d;
}

Rat Poly2::eval(const Rat& x, const Rat& y) const {
    // Horner in x over coefficient polynomials in y would be faster; sizes
    // here are tiny so direct powers are fine.
    int dx = 0, dy = 0;
    for (const auto& [k, c] : t_) {
        dx = std::max(dx, k.first);
        dy = std::max(dy, k.second);
    }
    std::vector<Rat> px(static_cast<size_t>(dx) + 1), py(static_cast<size_t>(dy) + 1);
    px[0] = ratq(1);
    for (int i = 1; i <= dx; i++) px[static_cast<size_t>(i)] = px[static_cast<size_t>(i - 1)] * x;
    py[0] = ratq(1);
    for (int j = 1; j <= dy; j++) py[static_cast<size_t>(j)] = py[static_cast<size_t>(j - 1)] * y;
    Rat acc;
    for (const auto& [k, c] : t_)
        acc += c * px[static_cast<size_t>(k.first)] * py[static_cast<size_t>(k.second)];
    return acc;
}

BigFloat Poly2::eval(const BigFloat& x, const BigFloat& y) const {
    int dx = 0, dy = 0;
    for (const auto& [k, c] : t_) {
        dx = std::max(dx, k.first);
        dy = std::max(dy, k.second);
    }
    std::vector<BigFloat> px, py;
    px.reserve(static_cast<size_t>(dx) + 1);
    py.reserve(static_cast<size_t>(dy) + 1);
    px.push_back(BigFloat::of(1L, x.digits()));
    for (int i = 1; i <= dx; i++) px.push_back(px.back() * x);
    py.push_back(BigFloat::of(1L, y.digits()));
    for (int j = 1; j <= dy; j++) py.push_back(py.back() * y);
    BigFloat acc = BigFloat::of(0L, std::max(x.digits(), y.digits()));
    for (const auto& [k, c] : t_)
        acc = acc + px[static_cast<size_t>(k.first)] * py[static_cast<size_t>(k.second)].mul_rat(c);
    return acc;
}

Poly2 Poly2::dx() const {
    Poly2 r;
    for (const auto& [k, c] : t_)
        if (k.first > 0) r.add_term(k.first - 1, k.second, c * Rat(k.first));
    return r;
}

Poly2 Poly2::dy() const {
    Poly2 r;
    for (const auto& [k, c] : t_)
        if (k.second > 0) r.add_term(k.first, k.second - 1, c * Rat(k.second));
    return r;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 r = a;
    for (const auto& [k, c] : b.t_) r.add_term(k.first, k.second, c);
    return r;
}

Poly2 operator-(const Poly2& a, const Poly2& b) {
    Poly2 r = a;
    for (const auto& [k, c] : b.t_) r.add_term(k.first, k.second, -c);
    return r;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    for (const auto& [ka, ca] : a.t_)
        for (const auto& [kb, cb] : b.t_)
            r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
}

Poly2 Poly2::scaled(const Rat& c) const {
    Poly2 r;
    for (const auto& [k, v] : t_) r.add_term(k.first, k.second, v * c);
    return r;
}

Poly2 Poly2::pow(int e) const {
    Poly2 acc;
    acc.add_term(0, 0, ratq(1));
    Poly2 base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

}  // namespace latq
