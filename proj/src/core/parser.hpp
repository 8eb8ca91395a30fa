#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/error.hpp"
#include "core/polynomial.hpp"

namespace oscdecay {

/// Parse failure with the byte range of the offending input and the token
/// classes that would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t begin, std::size_t end,
             std::vector<std::string> expected)
      : Error(ErrorCode::parse, std::move(message)),
        begin_(begin),
        end_(end),
        expected_(std::move(expected)) {}

  /// Half-open byte span [begin, end) of the offending token.
  std::size_t begin() const { return begin_; }
  std::size_t end() const { return end_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t begin_;
  std::size_t end_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  int dim = 1;
  /// Accept t1..td variables in addition to x1..xd, y1..yd. Off for
  /// user-supplied phases; on when reading back serialized derived
  /// polynomials, which live in the shift variables.
  bool allow_tau = false;
};

/// Parses the phase grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := base ('^' integer)?
///   base   := rational | variable | '(' expr ')'
/// Rational literals are integers, integer fractions like 3/2, or exact
/// decimals like 0.25. There is no implicit multiplication. Exponents are
/// non-negative integers (capped at 4096).
Polynomial parse_polynomial(std::string_view text, const ParseOptions& opts);

}  // namespace oscdecay
