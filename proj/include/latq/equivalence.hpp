#pragma once
#include "latq/lattice.hpp"

namespace latq::equivalence {

/// Certificate that two Gram matrices describe equivalent lattices:
/// A' = c U A U^T for an integer U with det U = +-1 and a positive scale c.
struct CongruenceCert {
    QMat a, a_prime;
    QMat u;
    Rat c = 1;
};

// Exact verification of a certificate.
bool verify_congruence(const CongruenceCert& cert);

struct AppendixReport {
    struct Item {
        std::string name;
        bool pass = false;
    };
    std::vector<Item> items;
    bool all_pass = false;
};

// Runs every equivalence certificate shipped in the catalog: the two
// congruences of the 10-dim component and the mutual congruence of the two
// 12-dim generators, plus the unimodularity of each map.
AppendixReport appendix_checks();

struct Fingerprint {
    double min_norm2 = 0.0;       // after rescaling to unit volume
    long kissing = 0;
    std::vector<std::pair<double, long>> theta_prefix;  // (r^2, cumulative)
};

// Cheap necessary-condition screen: equivalent lattices have equal
// fingerprints; distinct fingerprints prove inequivalence.
Fingerprint lattice_fingerprint(const Lattice& lattice, int shells = 5);
bool fingerprints_match(const Fingerprint& a, const Fingerprint& b, double rel_tol = 1e-9);

}  // namespace latq::equivalence
