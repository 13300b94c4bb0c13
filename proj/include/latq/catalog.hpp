#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "latq/glue.hpp"
#include "latq/polynomial.hpp"

namespace latq::catalog {

// ---- elementary lattices ----
Lattice zn(int n);
Lattice dn(int n);            // checkerboard, n >= 3
Lattice a2();                 // hexagonal, field sqrt(3)
Lattice sqrt2z();             // 1-dim sqrt(2) Z, field sqrt(2)
Lattice k10prime();           // 10-dim component of the 14-dim family

// ---- the 14-dim one-parameter family ----
Lattice b14(const Quad& a);   // a rational > 0 (stored exactly)
Lattice b14_f(double a);
GlueSpec b14_gluespec(const Quad& a);
// Parametric-facet phase of the closed-form expressions: sqrt(5/3) < a < sqrt(13/7).
bool b14_in_phase(double a);

// ---- the 13-dim two-parameter family (a1 = 1) ----
Lattice b13(const Quad& a2, const Quad& a3);
Lattice b13_f(double a2, double a3);
Lattice b13_general(const Quad& a1, const Quad& a2, const Quad& a3);
Lattice b13prime();           // unit scales
GlueSpec b13_gluespec(const Quad& a1, const Quad& a2, const Quad& a3);

// ---- data tables ----
struct G13Row {
    int i, j;
    Int c;
};
// The 120 integer coefficients of the 13-dim second-moment numerator,
// checksum-verified at load.
const std::vector<G13Row>& g13_rows();
Poly2 g13_numerator();        // sum c_ij v2^i v3^j
uint64_t g13_checksum();      // FNV-1a over the canonical row text

struct EquivalenceData {
    QMat a1, a2, u1, u2;      // 10-dim Gram matrices and unimodular maps
    QMat b4, b5, u4, u5;      // 12-dim generators and unimodular maps
};
const EquivalenceData& appendix_equivalences();

struct SymmetryGen {
    std::string name;
    QMat m;                   // 14 x 14 orthogonal candidate
    bool is_automorphism;     // expected verdict for the glued 14-dim lattice
};
std::vector<SymmetryGen> b14_symmetries();

// Exact second-moment entries of the 13-dim lattice at unit scales
// (block structure: diag beta on the first 8, off-diagonal gamma, alpha I5).
struct Abg13Unit {
    Rat alpha, beta, gamma;
    Rat g;                    // the exact NSM at unit scales
};
const Abg13Unit& abg13_unit();

// ---- string-keyed access for the CLI ----
struct DataTableRef {
    std::string name;
};
using CatalogValue = std::variant<Lattice, GlueSpec, DataTableRef>;

// Resolves "B14" with params {a: "25/19"}, "Z" with {n: "3"}, etc.
// Numeric parameter strings are parsed exactly when rational, as floats when
// they contain '.' or 'e'.
CatalogValue get(const std::string& name, const std::map<std::string, std::string>& params);
std::vector<std::string> list_names();

}  // namespace latq::catalog
