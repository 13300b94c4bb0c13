#include "latq/exact_nsm.hpp"

#include <cmath>

#include "latq/catalog.hpp"
#include "latq/error.hpp"

namespace latq::exactnsm {

namespace {
#include "nsm14_tables.inc"

Int big(const char* s) { return Int(s); }

const Rat& moment14_den_impl() {
    static const Rat d = [] {
        return Rat(pow_int(2, 24) * pow_int(3, 13) * pow_int(5, 6) * pow_int(7, 4) *
                   pow_int(11, 2) * pow_int(13, 1));
    }();
    return d;
}

const Rat& f14_den() {
    static const Rat d = [] {
        return Rat(pow_int(2, 24) * pow_int(3, 15) * pow_int(5, 5) * pow_int(7, 6) *
                   pow_int(11, 2) * pow_int(13, 1));
    }();
    return d;
}

const Int& k13_den_a() {  // denominator constant of the phase-A closed form
    static const Int d = pow_int(2, 81) * pow_int(3, 10) * pow_int(5, 4) * pow_int(7, 4) *
                         pow_int(11, 2) * pow_int(13, 3);
    return d;
}

const Int& k13_den_b() {  // constant of the phase-B correction term
    static const Int d = pow_int(2, 78) * pow_int(3, 5) * pow_int(5, 3) * pow_int(7, 2) *
                         pow_int(11, 1) * pow_int(13, 2);
    return d;
}

}  // namespace

const Poly1& moment14_numerator() {
    static const Poly1 p = [] {
        std::vector<Rat> c(16);
        for (int k = 0; k < 16; k++) c[static_cast<size_t>(k)] = Rat(big(kMoment14Coeffs[k]));
        return Poly1(std::move(c));
    }();
    return p;
}

const Rat& moment14_den() { return moment14_den_impl(); }

const Poly1& f14() {
    static const Poly1 f = [] {
        // Printed coefficients.
        std::vector<Rat> c(16);
        for (int k = 0; k < 16; k++)
            c[static_cast<size_t>(k)] = Rat(big(kF14Coeffs[k])) / f14_den();
        Poly1 printed(std::move(c));
        // Independent derivation from the second-moment numerator P(v):
        // G is proportional to P(v) v^{-30/7}, so the stationarity numerator
        // picks up (7k - 30) p_k with the constant 3^3 * 7^2 * den.
        Rat derived_den = moment14_den_impl() * Rat(pow_int(3, 3)) * ratq(49);
        const Poly1& p = moment14_numerator();
        for (int k = 0; k <= 15; k++) {
            Rat derived = p.coeff(k) * ratq(7 * k - 30) / derived_den;
            if (derived != printed.coeff(k))
                throw ComputeError("stationarity polynomial mismatch at degree " +
                                   std::to_string(k));
        }
        return printed;
    }();
    return f;
}

namespace {
// G(a) = 3^{-33/14} P(v) / (14 den v^{30/7}) with v = a^2.
BigFloat g14_from(const BigFloat& v, const Rat& pv_over_den, int digits) {
    BigFloat three = BigFloat::of(3L, digits);
    BigFloat scale = three.pow(ratq(-33, 14));
    return BigFloat::of(pv_over_den, digits) * scale * v.pow(ratq(-30, 7));
}
}  // namespace

BigFloat g14(const Rat& a, int digits, bool* in_phase) {
    if (a <= 0) throw UsageError("g14 requires a > 0");
    Rat v = a * a;
    if (in_phase) *in_phase = v > ratq(5, 3) && v < ratq(13, 7);
    Rat pv = moment14_numerator().eval(v) / (14 * moment14_den_impl());
    return g14_from(BigFloat::of(v, digits), pv, digits);
}

BigFloat g14_v(const BigFloat& v, int digits) {
    BigFloat pv = moment14_numerator().eval(v);
    BigFloat den = BigFloat::of(14 * moment14_den_impl(), digits);
    BigFloat three = BigFloat::of(3L, digits);
    return pv / den * three.pow(ratq(-33, 14)) * v.pow(ratq(-30, 7));
}

Opt14 optimize_g14(const Rat& tol) {
    if (tol > ratq(1, 1000000000L)) throw UsageError("tolerance must be <= 1e-9");
    const Poly1& f = f14();
    SturmChain chain(f);
    const Rat phase_lo = ratq(5, 3), phase_hi = ratq(13, 7);
    int in_phase_count = chain.count_roots(phase_lo, phase_hi);
    if (in_phase_count != 1)
        throw ComputeError("expected exactly one stationary point inside the phase, found " +
                           std::to_string(in_phase_count));
    auto roots = isolate_real_roots(f, phase_lo, phase_hi);
    if (roots.size() != 1) throw ComputeError("phase root isolation failed");
    RootInterval phase_root = roots[0];
    Opt14 out;
    // 1-based index among the positive roots, counted by Sturm. For a strict
    // bracket the count up to lo excludes the root itself.
    int before = chain.count_roots(ratq(0), phase_root.lo);
    out.positive_root_index = phase_root.exact() ? before : before + 1;

    // Refine well past the requested tolerance so the NSM inherits it too.
    Rat vtol = tol * tol;
    if (vtol > ratq(1, Int("100000000000000000000000000"))) {
        Rat tiny = ratq(1, Int("100000000000000000000000000"));
        vtol = tiny;
    }
    out.v0 = refine_root(f, phase_root, vtol);

    const int digits = 80;
    BigFloat vmid = BigFloat::of(out.v0.mid(), digits);
    out.a_opt = vmid.sqrt();
    double halfwidth = Rat(out.v0.width() / 2).get_d();
    out.a_opt.set_err(out.a_opt.err() + halfwidth);  // da <= dv / (2 sqrt v), sqrt v > 1
    BigFloat glo = g14_v(BigFloat::of(out.v0.lo, digits), digits);
    BigFloat ghi = g14_v(BigFloat::of(out.v0.hi, digits), digits);
    out.g_opt = glo;
    out.g_opt.set_err(glo.err() + ghi.err() +
                      std::fabs(glo.to_double() - ghi.to_double()));
    return out;
}

SecondMomentAbg alpha_beta_14(const Rat& a, int digits) {
    if (a <= 0) throw UsageError("alpha_beta_14 requires a > 0");
    Rat v = a * a;
    BigFloat g = g14(a, digits);
    // V = 9 sqrt(3) a^4; V^{1/7} and V^{-2} via exact pieces.
    BigFloat three = BigFloat::of(3L, digits);
    BigFloat v14 = BigFloat::of(ratq(9) * pow_rat(a, 4), digits);  // 9 a^4
    BigFloat vol = v14 * three.sqrt();
    BigFloat v17 = vol.pow(ratq(1, 7));
    BigFloat vm2 = vol.pow(ratq(-2));
    Rat fv = f14().eval(v);
    SecondMomentAbg out;
    BigFloat base = v17 * g;
    BigFloat corr = vm2.mul_rat(ratq(5103) * fv);
    out.alpha = base - corr.mul_rat(ratq(1, 10));
    out.beta = base + corr.mul_rat(ratq(1, 4));
    out.gamma = BigFloat::of(0L, digits);
    out.has_gamma = false;
    return out;
}

// ---------- 13-dim ----------

namespace {

// H(v2, v3) = N_A / K_A - Q^14 / K_B with Q = 8 v2 - 83 v3 + 76: the
// phase-B NSM equals H / V^{28/13}.
const Poly2& h13() {
    static const Poly2 h = [] {
        Poly2 na = catalog::g13_numerator().scaled(ratq(Int(1), k13_den_a()));
        Poly2 q;
        q.add_term(1, 0, ratq(8));
        q.add_term(0, 1, ratq(-83));
        q.add_term(0, 0, ratq(76));
        Poly2 corr = q.pow(14).scaled(ratq(Int(1), k13_den_b()));
        return na - corr;
    }();
    return h;
}

BigFloat pow_v(const BigFloat& v2, const BigFloat& v3, const Rat& e2, const Rat& e3) {
    return v2.pow(e2) * v3.pow(e3);
}

// ---- minimal directed-rounding interval arithmetic for the certification ----

constexpr mpfr_prec_t kIvPrec = 512;

class IV {
public:
    IV() {
        mpfr_init2(lo_, kIvPrec);
        mpfr_init2(hi_, kIvPrec);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    IV(const IV& o) : IV() {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    IV& operator=(const IV& o) {
        if (this != &o) {
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }
    ~IV() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }
    static IV thin(const BigFloat& b) {
        IV r;
        mpfr_set(r.lo_, b.raw(), MPFR_RNDD);
        mpfr_set(r.hi_, b.raw(), MPFR_RNDU);
        if (b.err() > 0) {
            mpfr_sub_d(r.lo_, r.lo_, b.err(), MPFR_RNDD);
            mpfr_add_d(r.hi_, r.hi_, b.err(), MPFR_RNDU);
        }
        return r;
    }
    static IV of_rat(const Rat& q) {
        IV r;
        mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
        return r;
    }
    static IV pm(double delta) {
        IV r;
        mpfr_set_d(r.lo_, -delta, MPFR_RNDD);
        mpfr_set_d(r.hi_, delta, MPFR_RNDU);
        return r;
    }
    friend IV operator+(const IV& a, const IV& b) {
        IV r;
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend IV operator-(const IV& a, const IV& b) {
        IV r;
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend IV operator*(const IV& a, const IV& b) {
        IV r;
        mpfr_t t;
        mpfr_init2(t, kIvPrec);
        bool first = true;
        for (const auto* x : {&a.lo_, &a.hi_})
            for (const auto* y : {&b.lo_, &b.hi_}) {
                mpfr_mul(t, *x, *y, MPFR_RNDD);
                if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
                mpfr_mul(t, *x, *y, MPFR_RNDU);
                if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
                first = false;
            }
        mpfr_clear(t);
        return r;
    }
    bool inside_pm(double delta) const {
        // Strict containment in (-delta, delta).
        return mpfr_cmp_d(lo_, -delta) > 0 && mpfr_cmp_d(hi_, delta) < 0;
    }

private:
    mpfr_t lo_, hi_;
};

IV iv_eval(const Poly2& p, const IV& x, const IV& y) {
    int dx = 0, dy = 0;
    for (const auto& [k, c] : p.terms()) {
        dx = std::max(dx, k.first);
        dy = std::max(dy, k.second);
    }
    std::vector<IV> px(static_cast<size_t>(dx) + 1), py(static_cast<size_t>(dy) + 1);
    px[0] = IV::of_rat(ratq(1));
    for (int i = 1; i <= dx; i++) px[static_cast<size_t>(i)] = px[static_cast<size_t>(i - 1)] * x;
    py[0] = IV::of_rat(ratq(1));
    for (int j = 1; j <= dy; j++) py[static_cast<size_t>(j)] = py[static_cast<size_t>(j - 1)] * y;
    IV acc;
    for (const auto& [k, c] : p.terms())
        acc = acc + IV::of_rat(c) * px[static_cast<size_t>(k.first)] * py[static_cast<size_t>(k.second)];
    return acc;
}

// Krawczyk test: K(X) - y = -Y F(y) + (I - Y J(X)) (X - y) must map the box
// strictly into itself; contraction proves a unique root inside X.
bool certify_root_box(const BigFloat& x, const BigFloat& y, double delta) {
    const Poly2& f2 = fB2();
    const Poly2& f3 = fB3();
    const Poly2 j11p = f2.dx(), j12p = f2.dy(), j21p = f3.dx(), j22p = f3.dy();

    IV tx = IV::thin(x), ty = IV::thin(y);
    IV bx = tx + IV::pm(delta), by = ty + IV::pm(delta);

    // Point inverse Jacobian (any fixed matrix is admissible).
    double a = j11p.eval(x, y).to_double(), b = j12p.eval(x, y).to_double();
    double c = j21p.eval(x, y).to_double(), d = j22p.eval(x, y).to_double();
    double det = a * d - b * c;
    if (det == 0) return false;
    IV y11 = IV::thin(BigFloat::of_double(d / det)), y12 = IV::thin(BigFloat::of_double(-b / det));
    IV y21 = IV::thin(BigFloat::of_double(-c / det)), y22 = IV::thin(BigFloat::of_double(a / det));

    IV f1 = iv_eval(f2, tx, ty), f1b = iv_eval(f3, tx, ty);
    IV jj11 = iv_eval(j11p, bx, by), jj12 = iv_eval(j12p, bx, by);
    IV jj21 = iv_eval(j21p, bx, by), jj22 = iv_eval(j22p, bx, by);

    IV one = IV::of_rat(ratq(1));
    IV g11 = one - (y11 * jj11 + y12 * jj21);
    IV g12 = IV() - (y11 * jj12 + y12 * jj22);
    IV g21 = IV() - (y21 * jj11 + y22 * jj21);
    IV g22 = one - (y21 * jj12 + y22 * jj22);

    IV dm = IV::pm(delta);
    IV k1 = (IV() - (y11 * f1 + y12 * f1b)) + g11 * dm + g12 * dm;
    IV k2 = (IV() - (y21 * f1 + y22 * f1b)) + g21 * dm + g22 * dm;
    return k1.inside_pm(delta) && k2.inside_pm(delta);
}

}  // namespace

const Poly2& fB2() {
    static const Poly2 f = [] {
        const Poly2& h = h13();
        Poly2 v2h2;
        {
            Poly2 mono;
            mono.add_term(1, 0, ratq(1));
            v2h2 = mono * h.dx();
        }
        Poly2 f2 = (v2h2.scaled(ratq(13)) - h.scaled(ratq(70))).scaled(ratq(2, 13));
        if (f2.total_degree() != 14)
            throw ComputeError("first stationarity polynomial has unexpected degree " +
                               std::to_string(f2.total_degree()));
        return f2;
    }();
    return f;
}

const Poly2& fB3() {
    static const Poly2 f = [] {
        const Poly2& h = h13();
        Poly2 v3h3;
        {
            Poly2 mono;
            mono.add_term(0, 1, ratq(1));
            v3h3 = mono * h.dy();
        }
        Poly2 f3 = (v3h3.scaled(ratq(13)) - h.scaled(ratq(14))).scaled(ratq(2, 13));
        if (f3.total_degree() != 14)
            throw ComputeError("second stationarity polynomial has unexpected degree " +
                               std::to_string(f3.total_degree()));
        return f3;
    }();
    return f;
}

BigFloat gA13(const Rat& a2, const Rat& a3, int digits) {
    if (a2 <= 0 || a3 <= 0) throw UsageError("gA13 requires positive scales");
    Rat v2 = a2 * a2, v3 = a3 * a3;
    Rat num = catalog::g13_numerator().eval(v2, v3) / Rat(k13_den_a());
    BigFloat b2 = BigFloat::of(v2, digits), b3 = BigFloat::of(v3, digits);
    return BigFloat::of(num, digits) * pow_v(b2, b3, ratq(-70, 13), ratq(-14, 13));
}

BigFloat gB13(const Rat& a2, const Rat& a3, int digits) {
    if (a2 <= 0 || a3 <= 0) throw UsageError("gB13 requires positive scales");
    Rat v2 = a2 * a2, v3 = a3 * a3;
    Rat num = h13().eval(v2, v3);
    BigFloat b2 = BigFloat::of(v2, digits), b3 = BigFloat::of(v3, digits);
    return BigFloat::of(num, digits) * pow_v(b2, b3, ratq(-70, 13), ratq(-14, 13));
}

BigFloat gB13_v(const BigFloat& v2, const BigFloat& v3, int digits) {
    BigFloat num = h13().eval(v2, v3);
    return num * pow_v(v2, v3, ratq(-70, 13), ratq(-14, 13));
    (void)digits;
}

BigFloat gap13_v(const BigFloat& v2, const BigFloat& v3, int digits) {
    // gA - gB = Q^14 / (K_B V^{28/13}), nonnegative by construction.
    BigFloat q = v2.mul_rat(ratq(8)) - v3.mul_rat(ratq(83)) + BigFloat::of(76L, digits);
    BigFloat q14 = q.pow(ratq(14));
    return q14 / BigFloat::of(Rat(k13_den_b()), digits) *
           pow_v(v2, v3, ratq(-70, 13), ratq(-14, 13));
}

Opt13 optimize_g13(const Rat& tol, int digits) {
    if (tol > ratq(1, 1000000000L)) throw UsageError("tolerance must be <= 1e-9");
    const Poly2& f2 = fB2();
    const Poly2& f3 = fB3();
    const Poly2 j11 = f2.dx(), j12 = f2.dy(), j21 = f3.dx(), j22 = f3.dy();

    BigFloat x = BigFloat::of(1L, digits), y = BigFloat::of(1L, digits);
    double last_step = 1.0;
    for (int it = 0; it < 80; it++) {
        BigFloat fx = f2.eval(x, y), fy = f3.eval(x, y);
        BigFloat a = j11.eval(x, y), b = j12.eval(x, y);
        BigFloat c = j21.eval(x, y), d = j22.eval(x, y);
        BigFloat det = a * d - b * c;
        if (std::fabs(det.to_double()) < 1e-300) throw ComputeError("singular Jacobian");
        BigFloat dx = (d * fx - b * fy) / det;
        BigFloat dy = (a * fy - c * fx) / det;
        // Damping: the optimum is near (1, 1); cap the step length.
        double sn = std::hypot(dx.to_double(), dy.to_double());
        if (sn > 0.05) {
            Rat cap = ratq(1, 20);
            Rat scale = cap / ratq(static_cast<long>(sn * 1000000 + 1), 1000000);
            dx = dx.mul_rat(scale);
            dy = dy.mul_rat(scale);
        }
        x = x - dx;
        y = y - dy;
        last_step = std::fabs(dx.to_double()) + std::fabs(dy.to_double());
        if (last_step < 1e-40) break;
    }
    if (last_step > 1e-30) throw ComputeError("Newton iteration did not converge");

    Opt13 out;
    out.v2 = x;
    out.v3 = y;
    out.a2 = x.sqrt();
    out.a3 = y.sqrt();
    out.g = gB13_v(x, y, digits);

    // A posteriori certification: interval Newton (Krawczyk) contraction on a
    // small box around the solution.
    double delta = std::max(1e-30, last_step * 100);
    out.box_radius = delta;
    out.certified = certify_root_box(x, y, delta);
    out.a2.set_err(out.a2.err() + delta);
    out.a3.set_err(out.a3.err() + delta);

    // Positive-definite Hessian of the NSM via central differences.
    const int hd = 90;
    BigFloat h = BigFloat::of(ratq(1, 1000000), hd);
    BigFloat a2b(out.a2), a3b(out.a3);
    auto gb = [&](const BigFloat& s2, const BigFloat& s3) {
        return gB13_v(s2 * s2, s3 * s3, hd);
    };
    BigFloat g0 = gb(a2b, a3b);
    BigFloat gpp = gb(a2b + h, a3b + h), gpm = gb(a2b + h, a3b - h);
    BigFloat gmp = gb(a2b - h, a3b + h), gmm = gb(a2b - h, a3b - h);
    BigFloat gp0 = gb(a2b + h, a3b), gm0 = gb(a2b - h, a3b);
    BigFloat g0p = gb(a2b, a3b + h), g0m = gb(a2b, a3b - h);
    BigFloat h2 = h * h;
    double h11 = ((gp0 + gm0 - g0 - g0) / h2).to_double();
    double h22 = ((g0p + g0m - g0 - g0) / h2).to_double();
    double h12 = ((gpp - gpm - gmp + gmm) / (h2.mul_rat(ratq(4)))).to_double();
    out.hessian_pd = h11 > 0 && h11 * h22 - h12 * h12 > 0;
    return out;
}

SecondMomentAbg abg13_v(const BigFloat& v2, const BigFloat& v3, int digits) {
    BigFloat g = gB13_v(v2, v3, digits);
    BigFloat vol2 = v2.pow(ratq(5)) * v3;                    // V^2
    BigFloat v213 = pow_v(v2, v3, ratq(5, 13), ratq(1, 13));  // V^{2/13}
    BigFloat fb2 = fB2().eval(v2, v3);
    BigFloat fb3 = fB3().eval(v2, v3);
    SecondMomentAbg out;
    BigFloat base = v213 * g;
    out.alpha = base + (fb2 / vol2).mul_rat(ratq(13, 10));
    out.beta = base - (fb2 / vol2).mul_rat(ratq(13, 16));
    out.gamma = ((fb2 + fb3.mul_rat(ratq(8))) / vol2).mul_rat(ratq(13, 112));
    out.has_gamma = true;
    return out;
}

SecondMomentAbg abg13(const Rat& a2, const Rat& a3, int digits) {
    if (a2 <= 0 || a3 <= 0) throw UsageError("abg13 requires positive scales");
    return abg13_v(BigFloat::of(a2 * a2, digits), BigFloat::of(a3 * a3, digits), digits);
}

EpsilonSteps epsilon_steps(const Rat& alpha, const Rat& beta, const Rat& gamma, int digits) {
    EpsilonSteps out;
    Rat d1 = 2 * (-5 * alpha + 18 * beta + 78 * gamma);
    Rat d2 = 2 * (-8 * alpha * alpha + 3 * alpha * beta + 5 * beta * beta +
                  91 * gamma * gamma);
    Rat n2 = 13 * (beta - alpha);
    if (d1 == 0 || (d2 == 0 && n2 == 0)) {
        out.finite = false;
        out.e1 = BigFloat::of(0L, digits);
        out.e2 = BigFloat::of(0L, digits);
        return out;
    }
    if (d2 == 0) throw ComputeError("second step-size rule has a vanishing denominator");
    out.e1 = BigFloat::of(ratq(13) / d1, digits);
    out.e2 = BigFloat::of(n2 / d2, digits);
    return out;
}

}  // namespace latq::exactnsm
