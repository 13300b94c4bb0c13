#include "latq/catalog.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "g13_table_data.hpp"

namespace latq::catalog {

namespace {
#include "appendix_b_data.inc"

Quad q(long n, long d = 1) { return Quad(ratq(n, d)); }
Quad qs3(long n, long d) { return Quad(ratq(0), ratq(n, d), 3); }  // (n/d) sqrt(3)

QMat int_matrix(const int* data, int n) {
    QMat m(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) m.at(i, j) = q(data[i * n + j]);
    return m;
}
}  // namespace

Lattice zn(int n) {
    if (n < 1) throw UsageError("Z^n requires n >= 1");
    LatticeMeta meta{"Z", {{"n", q(n)}}, {}};
    return Lattice::from_exact(QMat::identity(n), meta);
}

Lattice dn(int n) {
    if (n < 3) throw UsageError("D_n requires n >= 3");
    QMat b(n, n);
    b.at(0, 0) = q(2);
    for (int i = 1; i < n; i++) {
        b.at(i, 0) = q(1);
        b.at(i, i) = q(1);
    }
    LatticeMeta meta{"D", {{"n", q(n)}}, {}};
    return Lattice::from_exact(std::move(b), meta);
}

Lattice a2() {
    QMat b(2, 2);
    b.at(0, 0) = q(1);
    b.at(1, 0) = q(1, 2);
    b.at(1, 1) = qs3(1, 2);
    return Lattice::from_exact(std::move(b), {"A2", {}, {}});
}

Lattice sqrt2z() {
    QMat b(1, 1);
    b.at(0, 0) = Quad::sqrt_of(2);
    return Lattice::from_exact(std::move(b), {"sqrt2Z", {}, {}});
}

namespace {

// Entries of the 14-dim parametric generator decomposed as
// c0 + c1*sqrt(3) + (c2 + c3*sqrt(3)) * a.
struct Term14 {
    Rat c0, c1, c2, c3;
};

const std::vector<std::vector<Term14>>& b14_terms() {
    static const std::vector<std::vector<Term14>> t = [] {
        std::vector<std::vector<Term14>> m(14, std::vector<Term14>(14));
        auto set = [&](int i, int j, long n0, long d0, long n1, long d1) {
            m[static_cast<size_t>(i)][static_cast<size_t>(j)].c0 = ratq(n0, d0);
            m[static_cast<size_t>(i)][static_cast<size_t>(j)].c1 = ratq(n1, d1);
        };
        auto seta = [&](int i, int j, long n2, long d2) {
            m[static_cast<size_t>(i)][static_cast<size_t>(j)].c2 = ratq(n2, d2);
        };
        // Three 2x2 hexagonal blocks.
        for (int k = 0; k < 3; k++) {
            set(2 * k, 2 * k, 2, 1, 0, 1);
            set(2 * k + 1, 2 * k, 1, 1, 0, 1);
            set(2 * k + 1, 2 * k + 1, 0, 1, 1, 1);
        }
        // Rows 7..10 of the 10-dim component.
        set(6, 0, 1, 1, 0, 1); set(6, 2, 1, 2, 0, 1); set(6, 3, 0, 1, -1, 2);
        set(6, 4, 1, 2, 0, 1); set(6, 5, 0, 1, -1, 2); set(6, 6, 1, 1, 0, 1);
        set(7, 0, 1, 2, 0, 1); set(7, 1, 0, 1, 1, 2); set(7, 2, 1, 1, 0, 1);
        set(7, 4, 1, 1, 0, 1); set(7, 6, 1, 2, 0, 1); set(7, 7, 0, 1, 1, 2);
        set(8, 0, 1, 2, 0, 1); set(8, 1, 0, 1, -1, 2); set(8, 2, 1, 1, 0, 1);
        set(8, 4, 1, 2, 0, 1); set(8, 5, 0, 1, -1, 2); set(8, 8, 1, 1, 0, 1);
        set(9, 0, 1, 1, 0, 1); set(9, 2, 1, 2, 0, 1); set(9, 3, 0, 1, 1, 2);
        set(9, 4, 1, 1, 0, 1); set(9, 8, 1, 2, 0, 1); set(9, 9, 0, 1, 1, 2);
        // Parametric rows (the scaled 4-dim block and the two glue rows).
        set(10, 0, 1, 1, 0, 1); set(10, 2, 1, 1, 0, 1); set(10, 4, 1, 2, 0, 1);
        set(10, 5, 0, 1, 1, 2);
        seta(10, 10, 1, 1);
        seta(11, 10, -1, 1); seta(11, 11, 1, 1);
        seta(12, 10, -1, 1); seta(12, 12, 1, 1);
        set(13, 0, 1, 2, 0, 1); set(13, 1, 0, 1, -1, 2); set(13, 2, 1, 2, 0, 1);
        set(13, 3, 0, 1, -1, 2); set(13, 4, 1, 1, 0, 1);
        for (int j = 10; j < 14; j++) seta(13, j, 1, 2);
        return m;
    }();
    return t;
}

}  // namespace

Lattice k10prime() {
    const auto& t = b14_terms();
    QMat b(10, 10);
    for (int i = 0; i < 10; i++)
        for (int j = 0; j < 10; j++) {
            const Term14& e = t[static_cast<size_t>(i)][static_cast<size_t>(j)];
            b.at(i, j) = Quad(e.c0, e.c1, 3);
        }
    return Lattice::from_exact(std::move(b), {"K10prime", {}, {}});
}

Lattice b14(const Quad& a) {
    if (!a.is_rational()) throw UsageError("B14 catalog parameter must be rational");
    if (a.sign() <= 0) throw UsageError("B14 requires a > 0");
    const auto& t = b14_terms();
    QMat b(14, 14);
    for (int i = 0; i < 14; i++)
        for (int j = 0; j < 14; j++) {
            const Term14& e = t[static_cast<size_t>(i)][static_cast<size_t>(j)];
            b.at(i, j) = Quad(e.c0, e.c1, 3) + a * Quad(e.c2, e.c3, 3);
        }
    LatticeMeta meta{"B14", {{"a", a}}, {}};
    return Lattice::from_exact(std::move(b), meta);
}

Lattice b14_f(double a) {
    if (!(a > 0)) throw UsageError("B14 requires a > 0");
    const double s3 = std::sqrt(3.0);
    const auto& t = b14_terms();
    Eigen::MatrixXd b(14, 14);
    for (int i = 0; i < 14; i++)
        for (int j = 0; j < 14; j++) {
            const Term14& e = t[static_cast<size_t>(i)][static_cast<size_t>(j)];
            b(i, j) = e.c0.get_d() + e.c1.get_d() * s3 + (e.c2.get_d() + e.c3.get_d() * s3) * a;
        }
    LatticeMeta meta{"B14", {}, {{"a", a}}};
    return Lattice::from_float(std::move(b), meta);
}

bool b14_in_phase(double a) {
    return a * a > 5.0 / 3.0 && a * a < 13.0 / 7.0;
}

GlueSpec b14_gluespec(const Quad& a) {
    GlueSpec spec;
    spec.product = product_scaled({{k10prime(), q(1)}, {dn(4), a}});
    // Nonzero glue vectors as printed: the parametric rows of the generator
    // and their completing fourth coset representative.
    auto row = [&](std::initializer_list<Quad> v) {
        spec.generators.emplace_back(v);
    };
    Quad ah = a * q(1, 2);
    row({q(1), q(0), q(1), q(0), q(1, 2), qs3(1, 2), q(0), q(0), q(0), q(0), a, q(0), q(0), q(0)});
    row({q(1, 2), qs3(-1, 2), q(1, 2), qs3(-1, 2), q(1), q(0), q(0), q(0), q(0), q(0), ah, ah, ah, ah});
    row({q(1, 2), qs3(1, 2), q(1, 2), qs3(1, 2), q(-1, 2), qs3(1, 2), q(0), q(0), q(0), q(0), ah, -ah, -ah, -ah});
    return spec;
}

namespace {
// Entries of the 13-dim generator as ca1*a1 + ca2*a2 + ca3*a3.
struct Term13 {
    Rat ca1, ca2, ca3;
};

const std::vector<std::vector<Term13>>& b13_terms() {
    static const std::vector<std::vector<Term13>> t = [] {
        std::vector<std::vector<Term13>> m(13, std::vector<Term13>(13));
        for (int i = 0; i < 7; i++) {
            m[static_cast<size_t>(i)][0].ca1 = ratq(-1);
            m[static_cast<size_t>(i)][static_cast<size_t>(i + 1)].ca1 = ratq(1);
        }
        m[7][8].ca2 = ratq(2);
        for (int i = 1; i < 5; i++) {
            m[static_cast<size_t>(7 + i)][8].ca2 = ratq(1);
            m[static_cast<size_t>(7 + i)][static_cast<size_t>(8 + i)].ca2 = ratq(1);
        }
        // Last row: b = (10 a1 + a3)/16 in the first three entries,
        // b' = b - a1 in the next five, then a2/2 in the last five.
        for (int j = 0; j < 8; j++) {
            m[12][static_cast<size_t>(j)].ca1 = j < 3 ? ratq(10, 16) : ratq(-6, 16);
            m[12][static_cast<size_t>(j)].ca3 = ratq(1, 16);
        }
        for (int j = 8; j < 13; j++) m[12][static_cast<size_t>(j)].ca2 = ratq(1, 2);
        return m;
    }();
    return t;
}
}  // namespace

Lattice b13_general(const Quad& a1, const Quad& a2, const Quad& a3) {
    for (const Quad* a : {&a1, &a2, &a3}) {
        if (!a->is_rational()) throw UsageError("B13 catalog parameters must be rational");
        if (a->sign() <= 0) throw UsageError("B13 requires positive scales");
    }
    const auto& t = b13_terms();
    QMat b(13, 13);
    for (int i = 0; i < 13; i++)
        for (int j = 0; j < 13; j++) {
            const Term13& e = t[static_cast<size_t>(i)][static_cast<size_t>(j)];
            b.at(i, j) = a1 * Quad(e.ca1) + a2 * Quad(e.ca2) + a3 * Quad(e.ca3);
        }
    LatticeMeta meta{"B13", {{"a1", a1}, {"a2", a2}, {"a3", a3}}, {}};
    return Lattice::from_exact(std::move(b), meta);
}

Lattice b13(const Quad& a2, const Quad& a3) { return b13_general(q(1), a2, a3); }

Lattice b13_f(double a2, double a3) {
    if (!(a2 > 0) || !(a3 > 0)) throw UsageError("B13 requires positive scales");
    const auto& t = b13_terms();
    Eigen::MatrixXd b(13, 13);
    for (int i = 0; i < 13; i++)
        for (int j = 0; j < 13; j++) {
            const Term13& e = t[static_cast<size_t>(i)][static_cast<size_t>(j)];
            b(i, j) = e.ca1.get_d() + e.ca2.get_d() * a2 + e.ca3.get_d() * a3;
        }
    LatticeMeta meta{"B13", {}, {{"a1", 1.0}, {"a2", a2}, {"a3", a3}}};
    return Lattice::from_float(std::move(b), meta);
}

Lattice b13prime() {
    Lattice l = b13(q(1), q(1));
    l.meta_mut().family = "B13prime";
    return l;
}

GlueSpec b13_gluespec(const Quad& a1, const Quad& a2, const Quad& a3) {
    Lattice full = b13_general(a1, a2, a3);
    const QMat& fb = full.exact_basis();
    // The product lattice replaces the glue row with the sqrt(2)Z generator
    // a3 * [1 x8, 0 x5] / 2, orthogonal to the other components.
    QMat pb = fb;
    for (int j = 0; j < 13; j++) pb.at(12, j) = j < 8 ? a3 * q(1, 2) : q(0);
    GlueSpec spec;
    spec.product = Lattice::from_exact(std::move(pb));
    spec.generators.push_back(fb.row(12));
    return spec;
}

// ---- data tables ----

namespace {
struct G13Data {
    std::vector<G13Row> rows;
    uint64_t checksum;
};

const G13Data& g13_data() {
    static const G13Data data = [] {
        G13Data d;
        uint64_t h = 0xcbf29ce484222325ULL;
        std::istringstream in(detail::kG13TableText);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            G13Row row;
            std::string c;
            if (!(ls >> row.i >> row.j >> c)) throw ComputeError("bad 13-dim coefficient row");
            row.c = Int(c);
            std::string canonical =
                std::to_string(row.i) + " " + std::to_string(row.j) + " " + c + "\n";
            for (unsigned char ch : canonical) h = (h ^ ch) * 0x100000001b3ULL;
            d.rows.push_back(std::move(row));
        }
        d.checksum = h;
        if (d.rows.size() != 120)
            throw ComputeError("13-dim coefficient table has wrong row count");
        if (h != 0xc3549682456c1cf6ULL)
            throw ComputeError("13-dim coefficient table failed its checksum");
        return d;
    }();
    return data;
}
}  // namespace

const std::vector<G13Row>& g13_rows() { return g13_data().rows; }
uint64_t g13_checksum() { return g13_data().checksum; }

Poly2 g13_numerator() {
    Poly2 p;
    for (const auto& row : g13_rows()) p.add_term(row.i, row.j, Rat(row.c));
    return p;
}

const EquivalenceData& appendix_equivalences() {
    static const EquivalenceData data = [] {
        EquivalenceData d;
        d.a1 = int_matrix(&kA1[0][0], 10);
        d.a2 = int_matrix(&kA2[0][0], 10);
        d.u1 = int_matrix(&kU1[0][0], 10);
        d.u2 = int_matrix(&kU2[0][0], 10);
        d.b4 = int_matrix(&kB4[0][0], 12);
        d.b5 = int_matrix(&kB5[0][0], 12);
        d.u4 = int_matrix(&kU4[0][0], 12);
        d.u5 = int_matrix(&kU5[0][0], 12);
        return d;
    }();
    return data;
}

namespace {
QMat embed14(const QMat& m, int offset) {
    QMat e = QMat::identity(14);
    for (int i = 0; i < m.rows(); i++)
        for (int j = 0; j < m.cols(); j++) e.at(offset + i, offset + j) = m.at(i, j);
    return e;
}
}  // namespace

std::vector<SymmetryGen> b14_symmetries() {
    // 2x2 building blocks.
    QMat w(2, 2), m2(2, 2), m2p(2, 2), m2pp(2, 2);
    w.at(0, 0) = q(1, 4); w.at(0, 1) = qs3(-1, 4);
    w.at(1, 0) = qs3(1, 4); w.at(1, 1) = q(1, 4);
    m2.at(0, 0) = q(1, 2); m2.at(0, 1) = qs3(-1, 2);
    m2.at(1, 0) = qs3(-1, 2); m2.at(1, 1) = q(-1, 2);
    m2p.at(0, 0) = q(1, 2); m2p.at(0, 1) = qs3(1, 2);
    m2p.at(1, 0) = qs3(1, 2); m2p.at(1, 1) = q(-1, 2);
    m2pp.at(0, 0) = q(1); m2pp.at(1, 1) = q(-1);

    auto put_block = [](QMat& m, int bi, int bj, const QMat& blk) {
        for (int i = 0; i < 2; i++)
            for (int j = 0; j < 2; j++) m.at(2 * bi + i, 2 * bj + j) = blk.at(i, j);
    };
    auto scaled_i2 = [&](const Rat& c) {
        QMat m(2, 2);
        m.at(0, 0) = Quad(c);
        m.at(1, 1) = Quad(c);
        return m;
    };

    QMat refl(10, 10);
    put_block(refl, 0, 0, scaled_i2(ratq(1, 2)));
    put_block(refl, 0, 1, w);
    put_block(refl, 0, 2, w);
    put_block(refl, 0, 3, scaled_i2(ratq(-1, 2)));
    put_block(refl, 1, 0, w.transpose());
    put_block(refl, 1, 1, scaled_i2(ratq(1, 2)));
    put_block(refl, 1, 2, scaled_i2(ratq(-1, 2)));
    put_block(refl, 1, 3, w.transpose());
    put_block(refl, 2, 0, w.transpose());
    put_block(refl, 2, 1, scaled_i2(ratq(-1, 2)));
    put_block(refl, 2, 2, scaled_i2(ratq(1, 2)));
    put_block(refl, 2, 3, w.transpose());
    put_block(refl, 3, 0, scaled_i2(ratq(-1, 2)));
    put_block(refl, 3, 1, w);
    put_block(refl, 3, 2, w);
    put_block(refl, 3, 3, scaled_i2(ratq(1, 2)));
    put_block(refl, 4, 4, scaled_i2(ratq(1)));

    QMat m10(10, 10);
    put_block(m10, 0, 0, m2);
    put_block(m10, 1, 2, m2pp);
    put_block(m10, 2, 1, m2pp);
    put_block(m10, 3, 3, m2);
    put_block(m10, 4, 4, m2p);

    QMat m10p(10, 10);
    put_block(m10p, 0, 0, m2);
    put_block(m10p, 1, 4, m2);
    put_block(m10p, 2, 1, m2);
    put_block(m10p, 3, 2, m2);
    put_block(m10p, 4, 3, m2);

    QMat m4(4, 4);
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) m4.at(i, j) = q(1, 2);
    m4.at(1, 1) = q(-1, 2); m4.at(1, 3) = q(-1, 2);
    m4.at(2, 2) = q(-1, 2); m4.at(2, 3) = q(-1, 2);
    m4.at(3, 1) = q(-1, 2); m4.at(3, 2) = q(-1, 2);

    QMat m4p = QMat::identity(4);
    m4p.at(3, 3) = q(-1);

    QMat signpair = QMat::identity(10);
    signpair.at(0, 0) = q(-1);
    signpair.at(1, 1) = q(-1);

    auto pair_perm = [](std::initializer_list<std::pair<int, int>> moves) {
        QMat m(10, 10);
        std::vector<bool> placed(5, false);
        for (auto [from, to] : moves) {
            m.at(2 * from, 2 * to) = Quad(ratq(1));
            m.at(2 * from + 1, 2 * to + 1) = Quad(ratq(1));
            placed[static_cast<size_t>(from)] = true;
        }
        for (int k = 0; k < 5; k++)
            if (!placed[static_cast<size_t>(k)]) {
                m.at(2 * k, 2 * k) = Quad(ratq(1));
                m.at(2 * k + 1, 2 * k + 1) = Quad(ratq(1));
            }
        return m;
    };
    QMat swap_a = pair_perm({{0, 1}, {1, 0}, {3, 4}, {4, 3}});
    QMat swap_b = pair_perm({{1, 3}, {3, 1}, {2, 4}, {4, 2}});

    QMat perm4 = QMat(4, 4);
    perm4.at(0, 1) = q(1); perm4.at(1, 0) = q(1);
    perm4.at(2, 2) = q(1); perm4.at(3, 3) = q(1);
    QMat evensign4 = QMat::identity(4);
    evensign4.at(0, 0) = q(-1);
    evensign4.at(1, 1) = q(-1);

    auto combine = [](const QMat& top, const QMat& bottom) {
        QMat m = embed14(top, 0);
        for (int i = 0; i < 4; i++)
            for (int j = 0; j < 4; j++) m.at(10 + i, 10 + j) = bottom.at(i, j);
        return m;
    };

    std::vector<SymmetryGen> out;
    out.push_back({"identity", QMat::identity(14), true});
    out.push_back({"sign_pair_12", embed14(signpair, 0), true});
    out.push_back({"swap_12_34_and_78_910", embed14(swap_a, 0), true});
    out.push_back({"swap_34_78_and_56_910", embed14(swap_b, 0), true});
    out.push_back({"block_reflection", embed14(refl, 0), true});
    out.push_back({"last4_swap_12", embed14(perm4, 10), true});
    out.push_back({"last4_even_signs", embed14(evensign4, 10), true});
    out.push_back({"m10_alone", embed14(m10, 0), false});
    out.push_back({"m10_prime_alone", embed14(m10p, 0), false});
    out.push_back({"hadamard4_alone", embed14(m4, 10), false});
    out.push_back({"sign_last_alone", embed14(m4p, 10), false});
    out.push_back({"m10_with_hadamard4", combine(m10, m4), true});
    out.push_back({"m10_prime_with_sign_last", combine(m10p, m4p), true});
    return out;
}

const Abg13Unit& abg13_unit() {
    static const Abg13Unit v = [] {
        Abg13Unit u;
        Int d81 = pow_int(2, 81) * pow_int(3, 10) * pow_int(5, 4) * pow_int(7, 4) *
                  pow_int(11, 2) * pow_int(13, 2);
        Int d83a = pow_int(2, 83) * pow_int(3, 10) * pow_int(5, 1) * pow_int(7, 4) *
                   pow_int(11, 2) * pow_int(13, 2);
        Int d83g = pow_int(2, 83) * pow_int(3, 10) * pow_int(5, 4) * pow_int(7, 4) *
                   pow_int(11, 2) * pow_int(13, 2);
        Int dg = pow_int(2, 81) * pow_int(3, 9) * pow_int(5, 3) * pow_int(7, 4) *
                 pow_int(11, 2) * pow_int(13, 3);
        u.alpha = ratq(Int("304547502154926541417266582464260350511"), d81);
        u.beta = ratq(Int("9787631469390979346380560690239381767"), d83a);
        u.gamma = ratq(Int("-972574414727556817448919098411598577"), d83g);
        u.g = ratq(Int("264643025208158502912098205658743146287"), dg);
        return u;
    }();
    return v;
}

// ---- string-keyed access ----

namespace {
Quad param_quad(const std::map<std::string, std::string>& params, const std::string& key,
                const Quad& dflt) {
    auto it = params.find(key);
    if (it == params.end()) return dflt;
    return parse_quad(it->second);
}

bool is_float_literal(const std::string& s) {
    return s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
           s.find('E') != std::string::npos;
}

double param_double(const std::map<std::string, std::string>& params, const std::string& key) {
    return std::stod(params.at(key));
}
}  // namespace

CatalogValue get(const std::string& name, const std::map<std::string, std::string>& params) {
    auto has_float = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            auto it = params.find(k);
            if (it != params.end() && is_float_literal(it->second)) return true;
        }
        return false;
    };
    if (name == "Z") return zn(std::stoi(params.at("n")));
    if (name == "D") return dn(std::stoi(params.at("n")));
    if (name == "A2" || name == "hex") return a2();
    if (name == "sqrt2Z") return sqrt2z();
    if (name == "K10prime") return k10prime();
    if (name == "B14") {
        if (has_float({"a"})) return b14_f(param_double(params, "a"));
        return b14(param_quad(params, "a", q(25, 19)));
    }
    if (name == "B14glue") return b14_gluespec(param_quad(params, "a", q(25, 19)));
    if (name == "B13") {
        if (has_float({"a2", "a3"}))
            return b13_f(param_double(params, "a2"), param_double(params, "a3"));
        return b13(param_quad(params, "a2", q(1)), param_quad(params, "a3", q(1)));
    }
    if (name == "B13prime") return b13prime();
    if (name == "B13glue")
        return b13_gluespec(param_quad(params, "a1", q(1)), param_quad(params, "a2", q(1)),
                            param_quad(params, "a3", q(1)));
    if (name == "AppendixA") return DataTableRef{"AppendixA"};
    if (name == "AppendixB") return DataTableRef{"AppendixB"};
    if (name == "B14sym") return DataTableRef{"B14sym"};
    throw UsageError("unknown catalog entry '" + name + "'");
}

std::vector<std::string> list_names() {
    return {"Z",   "D",        "A2",      "sqrt2Z",  "K10prime", "B14",    "B14glue",
            "B13", "B13prime", "B13glue", "AppendixA", "AppendixB", "B14sym"};
}

}  // namespace latq::catalog
