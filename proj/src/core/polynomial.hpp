#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace oscdecay {

/// Which block a variable belongs to. Phases are polynomials in the x and y
/// blocks; the t block holds the shift variables introduced by the library
/// when it forms shifted differences. User-facing phase input never
/// contains t variables, but serialized derived polynomials may.
enum class VarRole { x, y, t };

struct VarId {
  VarRole role;
  int index;  // 1-based, in 1..dim
};

/// Dense exponent vector over the 3*dim flattened variable list
/// [x1..xd, y1..yd, t1..td].
using Exponents = std::vector<std::uint32_t>;

/// Flat position of a variable inside an exponent vector.
int flat_index(VarId v, int dim);

/// Printable name ("x1", "y3", "t2") for the flat variable position.
std::string flat_var_name(int flat, int dim);

/// Graded lexicographic order: lower total degree sorts first; among equal
/// degrees the monomial whose leftmost differing exponent is smaller sorts
/// first. This is the canonical term order for storage and serialization.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class AffineMap;

/// Immutable-by-convention sparse polynomial with exact rational
/// coefficients over the 3*dim variables of a fixed dimension. The term map
/// never stores a zero coefficient, so structural equality is semantic
/// equality.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GrlexLess>;

  explicit Polynomial(int dim);

  static Polynomial zero(int dim) { return Polynomial(dim); }
  static Polynomial constant(int dim, const Rational& c);
  static Polynomial variable(int dim, VarId v);
  static Polynomial monomial(int dim, const Exponents& exps, const Rational& c);

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Max total degree over all terms; empty for the zero polynomial
  /// (conventionally degree minus infinity).
  std::optional<int> degree() const;

  /// Smallest total t-degree over terms; empty for the zero polynomial.
  std::optional<int> min_t_degree() const;

  bool uses_t() const;
  /// True when every term is free of x and y variables.
  bool t_only() const;
  /// Per-flat-variable occurrence flags (length 3*dim).
  std::vector<bool> used_vars() const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(unsigned e) const;
  bool operator==(const Polynomial& rhs) const;
  bool operator!=(const Polynomial& rhs) const { return !(*this == rhs); }

  /// Partial derivative with respect to one variable.
  Polynomial differentiate(VarId v) const;

  /// Substitutes every variable by an affine expression in the variables of
  /// the same dimension.
  Polynomial substitute(const AffineMap& map) const;

  /// Exact evaluation at a rational point (length 3*dim).
  Rational evaluate(std::span<const Rational> point) const;
  /// Floating evaluation at a double point (length 3*dim), round-to-nearest
  /// per term with coefficients converted once.
  double evaluate(std::span<const double> point) const;

  /// Sum of the terms whose total degree in the x and y blocks is exactly m
  /// (t exponents do not count toward m). Summing over all m >= 0 recovers
  /// the polynomial.
  Polynomial homogeneous_part(int m) const;

  /// Canonical text form in the phase grammar (descending graded-lex term
  /// order). The zero polynomial prints as "0".
  std::string to_string() const;

 private:
  void add_term(const Exponents& exps, const Rational& c);
  void check_same_dim(const Polynomial& rhs) const;

  int dim_;
  TermMap terms_;

  friend class AffineMap;
};

/// Affine substitution target: one expression c + sum(lin[i] * var_i) per
/// variable, over the flattened 3*dim variable list.
struct AffineExpr {
  std::vector<Rational> lin;  // length 3*dim
  Rational constant;
};

/// A simultaneous affine change of variables v_i -> expr_i for all 3*dim
/// variables of one dimension.
class AffineMap {
 public:
  explicit AffineMap(int dim);  // identity

  int dim() const { return dim_; }
  const AffineExpr& target(int flat) const { return targets_[flat]; }

  /// Replaces the target expression of one variable.
  void set_target(VarId v, AffineExpr expr);
  void set_target_flat(int flat, AffineExpr expr);

  /// Map sending x -> x + t and y -> y - t (t fixed), used to form shifted
  /// phase differences.
  static AffineMap shift_by_t(int dim);

  /// Composition: substituting with the result equals substituting with
  /// outer first and then inner. In symbols, for all p:
  ///   p.substitute(outer).substitute(inner) == p.substitute(compose(outer, inner)).
  static AffineMap compose(const AffineMap& outer, const AffineMap& inner);

  /// Turns the target of variable `flat` into a polynomial.
  Polynomial target_polynomial(int flat) const;

 private:
  int dim_;
  std::vector<AffineExpr> targets_;
};

/// Flattened evaluation form for hot loops: rational coefficients folded to
/// doubles once, exponents kept sparse per term.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Polynomial& p);

  /// point must have 3*dim entries (same layout as Polynomial::evaluate).
  double evaluate(const double* point) const;

  bool is_zero() const { return terms_.empty(); }

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, std::uint32_t>> powers;  // (flat var, exponent)
  };
  std::vector<Term> terms_;

  friend CompiledPoly fold_xy(const Polynomial& p, std::span<const double> xy);
};

/// Partially evaluates p at fixed x,y values (length 2*dim), returning a
/// compiled polynomial in the t variables only. Used by the worst-case
/// sublevel evaluator, which pins a grid point and sweeps shifts.
CompiledPoly fold_xy(const Polynomial& p, std::span<const double> xy);

/// Exact quotient p / q for q a known divisor of p; throws
/// ErrorCode::internal when the division does not come out exact. Needed by
/// fraction-free determinant elimination.
Polynomial exact_divide(const Polynomial& p, const Polynomial& q);

}  // namespace oscdecay
