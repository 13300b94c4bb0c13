#pragma once
#include <gmpxx.h>

#include <string>
#include <string_view>

#include "latq/error.hpp"

namespace latq {

using Int = mpz_class;
using Rat = mpq_class;

// Canonical reduced rational n/d with d > 0.
inline Rat ratq(long n, long d = 1) {
    if (d == 0) throw UsageError("rational with zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline Rat ratq(const Int& n, const Int& d) {
    if (d == 0) throw UsageError("rational with zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

// Parses "p", "p/q" or "-p/q" (arbitrary precision).
Rat parse_rational(std::string_view text);

std::string to_string(const Rat& r);

// r^e for integer e (e < 0 requires r != 0).
Rat pow_rat(const Rat& r, long e);

inline double to_double(const Rat& r) { return r.get_d(); }

inline Int pow_int(long base, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

inline int sign(const Rat& r) { return sgn(r); }

}  // namespace latq
