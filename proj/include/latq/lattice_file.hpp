#pragma once
#include <string>
#include <variant>

#include "latq/glue.hpp"

namespace latq {

using ParsedLattice = std::variant<Lattice, GlueSpec>;

// Text format for exact lattices:
//
//   # comment
//   lattice myname            (optional)
//   field sqrt(3)             (optional; default pure rational)
//   param a = 25/19           (zero or more)
//   rows:
//   2 0
//   1 sqrt(3)
//   glue:                     (optional block; rows above are the product)
//   gen 1 0 1 0 1/2 1/2*sqrt(3) ...
//
// Row entries are expressions over rationals, sqrt(d), bound parameters,
// + - * / and parentheses. Errors carry line and column.
ParsedLattice parse_lattice_file(const std::string& text);

std::string print_lattice_file(const Lattice& lattice);
std::string print_lattice_file(const GlueSpec& spec);

}  // namespace latq
