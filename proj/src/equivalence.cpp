#include "latq/equivalence.hpp"

#include <cmath>

#include "latq/catalog.hpp"
#include "latq/enumerate.hpp"
#include "latq/error.hpp"

namespace latq::equivalence {

bool verify_congruence(const CongruenceCert& cert) {
    const int n = cert.a.rows();
    if (!cert.a.is_square() || !cert.a_prime.is_square() || !cert.u.is_square())
        throw UsageError("congruence certificate requires square matrices");
    if (cert.a_prime.rows() != n || cert.u.rows() != n)
        throw UsageError("congruence certificate dimension mismatch");
    if (cert.c <= 0) return false;
    if (!cert.u.is_integer()) return false;
    Quad det = cert.u.det();
    if (!(det == Quad(ratq(1)) || det == Quad(ratq(-1)))) return false;
    QMat rhs = (cert.u * cert.a * cert.u.transpose()).scaled(Quad(cert.c));
    return cert.a_prime == rhs;
}

AppendixReport appendix_checks() {
    const auto& eq = catalog::appendix_equivalences();
    AppendixReport rep;
    QMat g10 = catalog::k10prime().gram_exact();

    rep.items.push_back(
        {"kappa10_congruence", verify_congruence({eq.a1, g10, eq.u1, ratq(1)})});
    rep.items.push_back(
        {"su42_congruence", verify_congruence({eq.a2, g10, eq.u2, ratq(1)})});

    // Mutual congruence of the two 12-dim generators: U4 G4 U4^T = U5 G5 U5^T,
    // i.e. G4 = (U4^{-1} U5) G5 (U4^{-1} U5)^T.
    QMat g4 = eq.b4 * eq.b4.transpose();
    QMat g5 = eq.b5 * eq.b5.transpose();
    QMat map = eq.u4.inverse() * eq.u5;
    rep.items.push_back({"twelve_dim_mutual", verify_congruence({g5, g4, map, ratq(1)})});

    rep.items.push_back({"u_determinants",
                         eq.u1.det() == Quad(ratq(1)) && eq.u2.det() == Quad(ratq(1)) &&
                             eq.u4.det().abs() == Quad(ratq(1)) &&
                             eq.u5.det().abs() == Quad(ratq(1))});

    // Necessary-condition screen: the two 12-dim lattices share a fingerprint.
    Fingerprint f4 = lattice_fingerprint(Lattice::from_exact(eq.b4), 10);
    Fingerprint f5 = lattice_fingerprint(Lattice::from_exact(eq.b5), 10);
    rep.items.push_back({"twelve_dim_fingerprints", fingerprints_match(f4, f5)});

    rep.all_pass = true;
    for (const auto& item : rep.items) rep.all_pass = rep.all_pass && item.pass;
    return rep;
}

Fingerprint lattice_fingerprint(const Lattice& lattice, int shells) {
    Lattice unit = lattice.unit_volume();
    Prepared prep(unit);
    Fingerprint out;
    ShortestInfo si = shortest_vectors(prep);
    out.min_norm2 = si.min_norm2;
    out.kissing = si.kissing;
    double r2 = si.min_norm2 * 1.5;
    for (int tries = 0; tries < 16; tries++) {
        ThetaImage img = theta_image(prep, r2);
        if (static_cast<int>(img.steps.size()) >= shells) {
            img.steps.resize(static_cast<size_t>(shells));
            out.theta_prefix = std::move(img.steps);
            return out;
        }
        r2 *= 1.5;
    }
    throw ComputeError("fingerprint shell search did not converge");
}

bool fingerprints_match(const Fingerprint& a, const Fingerprint& b, double rel_tol) {
    if (a.kissing != b.kissing) return false;
    if (std::fabs(a.min_norm2 - b.min_norm2) > rel_tol * a.min_norm2) return false;
    size_t k = std::min(a.theta_prefix.size(), b.theta_prefix.size());
    for (size_t i = 0; i < k; i++) {
        if (a.theta_prefix[i].second != b.theta_prefix[i].second) return false;
        if (std::fabs(a.theta_prefix[i].first - b.theta_prefix[i].first) >
            rel_tol * a.theta_prefix[i].first)
            return false;
    }
    return true;
}

}  // namespace latq::equivalence
