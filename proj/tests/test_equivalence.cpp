#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "latq/catalog.hpp"
#include "latq/equivalence.hpp"

using namespace latq;
using namespace latq::equivalence;
namespace cat = latq::catalog;

TEST_CASE("trivial congruence certificate") {
    QMat a = cat::dn(4).gram_exact();
    CHECK(verify_congruence({a, a, QMat::identity(4), ratq(1)}));
    // Scaled copy: A' = 9 A with U = I, c = 9.
    CHECK(verify_congruence({a, a.scaled(Quad(ratq(9))), QMat::identity(4), ratq(9)}));
    CHECK_FALSE(verify_congruence({a, a, QMat::identity(4), ratq(2)}));
}

TEST_CASE("certificate inversion symmetry") {
    const auto& eq = cat::appendix_equivalences();
    QMat g10 = cat::k10prime().gram_exact();
    CongruenceCert fwd{eq.a1, g10, eq.u1, ratq(1)};
    REQUIRE(verify_congruence(fwd));
    CongruenceCert inv{g10, eq.a1, eq.u1.inverse(), ratq(1)};
    CHECK(verify_congruence(inv));
}

TEST_CASE("appendix certificates all verify") {
    AppendixReport rep = appendix_checks();
    for (const auto& item : rep.items) {
        INFO(item.name);
        CHECK(item.pass);
    }
    CHECK(rep.all_pass);
    CHECK(rep.items.size() == 5);
}

TEST_CASE("mutating any single entry of a map breaks verification") {
    const auto& eq = cat::appendix_equivalences();
    QMat g10 = cat::k10prime().gram_exact();
    std::mt19937_64 rng(17);
    for (int it = 0; it < 10; it++) {
        QMat u = eq.u1;
        int i = static_cast<int>(rng() % 10), j = static_cast<int>(rng() % 10);
        u.at(i, j) += Quad(ratq(1));
        CHECK_FALSE(verify_congruence({eq.a1, g10, u, ratq(1)}));
    }
}

TEST_CASE("congruence rejects malformed input") {
    QMat a = cat::zn(2).gram_exact();
    QMat b = cat::zn(3).gram_exact();
    CHECK_THROWS_AS(verify_congruence({a, b, QMat::identity(2), ratq(1)}), UsageError);
    // Non-integer map fails cleanly.
    QMat half = QMat::identity(2).scaled(Quad(ratq(1, 2)));
    CHECK_FALSE(verify_congruence({a, a.scaled(Quad(ratq(1, 4))), half, ratq(1)}));
}

TEST_CASE("fingerprints: basic discrimination and invariance") {
    Fingerprint z2 = lattice_fingerprint(cat::zn(2));
    Fingerprint hex = lattice_fingerprint(cat::a2());
    CHECK(z2.kissing == 4);
    CHECK(hex.kissing == 6);
    CHECK_FALSE(fingerprints_match(z2, hex));
    // Scaling is normalized away.
    Fingerprint z2s = lattice_fingerprint(cat::zn(2).scaled(Quad(ratq(3))));
    CHECK(fingerprints_match(z2, z2s));
}

TEST_CASE("fingerprints are invariant under random unimodular transforms") {
    Lattice d4 = cat::dn(4);
    Fingerprint ref = lattice_fingerprint(d4);
    std::mt19937_64 rng(23);
    for (int it = 0; it < 20; it++) {
        // Random product of elementary row operations.
        std::vector<std::vector<long>> t(4, std::vector<long>(4, 0));
        for (int i = 0; i < 4; i++) t[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        for (int k = 0; k < 6; k++) {
            int i = static_cast<int>(rng() % 4), j = static_cast<int>(rng() % 4);
            if (i == j) continue;
            long q = static_cast<long>(rng() % 5) - 2;
            for (int c = 0; c < 4; c++) t[static_cast<size_t>(i)][static_cast<size_t>(c)] += q * t[static_cast<size_t>(j)][static_cast<size_t>(c)];
        }
        Fingerprint f = lattice_fingerprint(d4.transformed(t));
        CHECK(fingerprints_match(ref, f));
    }
}

TEST_CASE("fingerprint of the 14-dim optimum") {
    Fingerprint f = lattice_fingerprint(cat::b14_f(1.314224989311), 3);
    CHECK(f.kissing == 24);
    CHECK(f.min_norm2 == doctest::Approx(1.99599).epsilon(1e-5));
}
