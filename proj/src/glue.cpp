#include "latq/glue.hpp"

#include <cmath>
#include <set>

#include "latq/hnf.hpp"

namespace latq {

namespace {

Rat mod1(const Rat& x) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return x - f;
}

std::vector<Rat> canon(const std::vector<Rat>& v) {
    std::vector<Rat> r(v.size());
    for (size_t i = 0; i < v.size(); i++) r[i] = mod1(v[i]);
    return r;
}

// Nearest rational with denominator <= cap (continued fractions).
Rat snap_rational(double x, long cap) {
    double a0 = std::floor(x);
    double frac = x - a0;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double y = frac;
    for (int it = 0; it < 64; it++) {
        if (q1 > cap) break;
        long a = (it == 0) ? 0 : static_cast<long>(std::floor(y));
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > cap) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = y - std::floor(y);
        if (rem < 1e-15) break;
        y = 1.0 / rem;
    }
    return ratq(p1, q1) + Rat(static_cast<long>(a0));
}

}  // namespace

GlueResult glue(const GlueSpec& spec) {
    const Lattice& lp = spec.product;
    const int n = lp.dim();
    const bool exact = lp.is_exact() && spec.generators_f.empty();

    // Coordinates of each glue generator in the product basis; rational with
    // denominator dividing the group order.
    std::vector<std::vector<Rat>> coords;
    if (exact) {
        QMat binv = lp.exact_basis().inverse();
        for (const auto& g : spec.generators) {
            if (static_cast<int>(g.size()) != n) throw UsageError("glue vector dimension mismatch");
            std::vector<Quad> c = mul_row(g, binv);
            std::vector<Rat> cr(static_cast<size_t>(n));
            for (int j = 0; j < n; j++) {
                if (!c[static_cast<size_t>(j)].is_rational())
                    throw ComputeError("glue generator has irrational product coordinates");
                cr[static_cast<size_t>(j)] = c[static_cast<size_t>(j)].r();
            }
            coords.push_back(std::move(cr));
        }
    } else {
        Eigen::MatrixXd binv = lp.basis().inverse();
        double scale = lp.basis().cwiseAbs().maxCoeff();
        auto add_float_gen = [&](const Eigen::VectorXd& g) {
            Eigen::RowVectorXd c = g.transpose() * binv;
            std::vector<Rat> cr(static_cast<size_t>(n));
            for (int j = 0; j < n; j++) {
                Rat s = snap_rational(c(j), spec.order_cap);
                if (std::fabs(s.get_d() - c(j)) > 1e-9 * std::max(1.0, scale))
                    throw ComputeError("glue generator is not a finite-order coset (no close rational coordinates)");
                cr[static_cast<size_t>(j)] = s;
            }
            coords.push_back(std::move(cr));
        };
        for (const auto& g : spec.generators_f) add_float_gen(g);
        for (const auto& g : spec.generators) {
            Eigen::VectorXd gf(n);
            for (int j = 0; j < n; j++) gf(j) = g[static_cast<size_t>(j)].to_double();
            add_float_gen(gf);
        }
    }

    // Generate the glue group modulo Z^n; bounded by order_cap.
    std::set<std::vector<Rat>> group;
    group.insert(std::vector<Rat>(static_cast<size_t>(n), Rat()));
    std::vector<std::vector<Rat>> frontier;
    for (const auto& c : coords) {
        auto cc = canon(c);
        if (group.insert(cc).second) frontier.push_back(cc);
    }
    while (!frontier.empty()) {
        std::vector<std::vector<Rat>> next;
        for (const auto& g : frontier) {
            for (const auto& c : coords) {
                std::vector<Rat> s(static_cast<size_t>(n));
                for (int j = 0; j < n; j++) s[static_cast<size_t>(j)] = mod1(g[static_cast<size_t>(j)] + c[static_cast<size_t>(j)]);
                if (group.insert(s).second) next.push_back(std::move(s));
            }
            if (static_cast<long>(group.size()) > spec.order_cap)
                throw ComputeError("glue generator exceeds the order cap (nonlattice packing or runaway order)");
        }
        frontier = std::move(next);
    }

    // Closure check: all pairwise sums stay in the generated set.
    for (const auto& g : group)
        for (const auto& h : coords) {
            std::vector<Rat> s(static_cast<size_t>(n));
            for (int j = 0; j < n; j++) s[static_cast<size_t>(j)] = mod1(g[static_cast<size_t>(j)] + h[static_cast<size_t>(j)]);
            if (!group.count(s))
                throw ComputeError("glue group not closed under addition modulo the product lattice");
        }

    // Clear denominators, stack with the identity block, integer HNF.
    Int d(1);
    for (const auto& g : group)
        for (const auto& x : g) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den().get_mpz_t());
    IntMat rows;
    for (int i = 0; i < n; i++) {
        std::vector<Int> r(static_cast<size_t>(n));
        r[static_cast<size_t>(i)] = d;
        rows.push_back(std::move(r));
    }
    for (const auto& g : group) {
        std::vector<Int> r(static_cast<size_t>(n));
        for (int j = 0; j < n; j++) {
            Rat t = g[static_cast<size_t>(j)] * d;
            r[static_cast<size_t>(j)] = t.get_num();  // exact: d cleared all denominators
        }
        rows.push_back(std::move(r));
    }
    IntMat h = hnf_row_basis(rows, n);

    // |det(D I)| / |det H| must equal the group order.
    Int dh = int_det(h);
    Int dn;
    mpz_pow_ui(dn.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(n));
    if (dn % abs(dh) != 0 || dn / abs(dh) != Int(static_cast<long>(group.size())))
        throw ComputeError("glue index mismatch (nonlattice packing)");

    // Map back: glued basis = (H / D) * product basis.
    GlueResult out{lp, static_cast<long>(group.size())};
    if (exact) {
        QMat hq(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) hq.at(i, j) = Quad(ratq(h[static_cast<size_t>(i)][static_cast<size_t>(j)], d));
        QMat bg = hq * lp.exact_basis();
        LatticeMeta meta = lp.meta();
        out.lattice = Lattice::from_exact(std::move(bg), std::move(meta));
        // Membership of every product row and every glue generator.
        QMat ginv = out.lattice.exact_basis().inverse();
        for (int i = 0; i < n; i++) {
            std::vector<Quad> c = mul_row(lp.exact_basis().row(i), ginv);
            for (const auto& x : c)
                if (!x.is_integer()) throw ComputeError("product basis row missing from glued lattice");
        }
        for (const auto& g : spec.generators) {
            std::vector<Quad> c = mul_row(g, ginv);
            for (const auto& x : c)
                if (!x.is_integer()) throw ComputeError("glue generator missing from glued lattice");
        }
    } else {
        Eigen::MatrixXd hq(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++)
                hq(i, j) = Rat(ratq(h[static_cast<size_t>(i)][static_cast<size_t>(j)], d)).get_d();
        out.lattice = Lattice::from_float(hq * lp.basis(), lp.meta());
    }
    return out;
}

}  // namespace latq
