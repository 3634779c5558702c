#pragma once

#include <gmpxx.h>

#include <string>

namespace ariel {

using Integer = mpz_class;
using Rational = mpq_class;

/// Exact rational value of a finite double.
inline Rational exact_rational(double value) {
    Rational r(value);
    r.canonicalize();
    return r;
}

/// Canonical p/q.
inline Rational ratio(const Integer& p, const Integer& q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p/q" or an integer; canonicalizes. Throws InvalidArgument.
Rational parse_rational(const std::string& text);

/// Nearest double to an exact rational (round-to-nearest, unlike mpq_get_d).
double to_double(const Rational& r);

}  // namespace ariel
