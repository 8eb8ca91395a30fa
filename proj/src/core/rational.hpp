#pragma once

#include <gmpxx.h>

#include <string>

#include "core/error.hpp"

namespace oscdecay {

/// Exact rational scalar used for all symbolic coefficients. GMP keeps
/// values canonical (reduced, positive denominator) after every operation.
using Rational = mpq_class;

/// Renders q as "p" or "p/q" with no spaces, matching the phase grammar.
inline std::string rational_to_string(const Rational& q) {
  return q.get_str();
}

/// Exact conversion of a decimal literal "123" / "1.25" to a rational.
/// Accepts only digits with at most one '.', no sign, no exponent.
inline Rational rational_from_decimal(const std::string& text) {
  std::string digits;
  long frac_digits = -1;
  for (char c : text) {
    if (c == '.') {
      if (frac_digits >= 0) {
        throw Error(ErrorCode::invalid_argument,
                    "malformed decimal literal: " + text);
      }
      frac_digits = 0;
      continue;
    }
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::invalid_argument,
                  "malformed decimal literal: " + text);
    }
    digits.push_back(c);
    if (frac_digits >= 0) ++frac_digits;
  }
  if (digits.empty()) {
    throw Error(ErrorCode::invalid_argument, "empty numeric literal");
  }
  mpz_class num(digits, 10);
  mpz_class den(1);
  for (long i = 0; i < frac_digits; ++i) den *= 10;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace oscdecay
