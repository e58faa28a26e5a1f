#pragma once

#include <gmpxx.h>

#include <string>

namespace spin7 {

// Exact rational backed by GMP; mpq_class keeps lowest terms after every operation.
using Rational = mpq_class;

// p/q in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Rational make_rational(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Parses "3", "-3/8", "1.25", "1e-3", "2.5E+4" exactly.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact binary value of a finite double.
Rational exact_rational(double x);

// Best rational approximation with denominator <= max_den (continued fractions).
Rational rationalize(double x, long max_den);

int sign(const Rational& q);

}  // namespace spin7
