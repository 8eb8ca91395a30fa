#pragma once

#include <vector>

#include "core/polynomial.hpp"

namespace oscdecay {

/// Square matrix of polynomials sharing one dimension.
using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// A k x k minor: row and column index sets, 1-based, strictly increasing.
struct MinorSelection {
  std::vector<int> rows;
  std::vector<int> cols;

  int k() const { return static_cast<int>(rows.size()); }
};

/// The shifted difference S(x,y) - S(x+t, y-t).
///
/// Sign convention: this is the difference with the shift applied to the
/// second copy, which reproduces the worked d=2 quartic example exactly
/// (including the +t1/50 term). The opposite shift differs by t -> -t and
/// an overall sign, leaving |P| sublevel sets unchanged.
Polynomial shift_difference(const Polynomial& S);

/// Mixed Hessian of the shifted difference: entry (i,j) is
/// d^2/dx_i dy_j of shift_difference(S). Vanishes identically at t = 0.
PolyMatrix mixed_hessian(const Polynomial& S);

/// Third-order operator d/dx_i d/dy_j (d/dx_l - d/dy_l) applied to S.
Polynomial d_operator(const Polynomial& S, int i, int j, int l);

/// All C(d,k)^2 minors for k in [k_min, k_max], ordered k descending, then
/// rows lexicographic, then cols lexicographic.
std::vector<MinorSelection> enumerate_minors(int d, int k_min, int k_max);

/// Exact determinant of the selected submatrix.
Polynomial minor_determinant(const PolyMatrix& m, const MinorSelection& sel);

/// Exact determinant of a square polynomial matrix: cofactor expansion for
/// k <= 3, fraction-free elimination (exact quotients) above.
Polynomial poly_det(const PolyMatrix& m);

/// Dense rational matrix with exact determinant, for linear changes of
/// variables.
class RationalMatrix {
 public:
  RationalMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int r, int c) { return data_[r * cols_ + c]; }
  const Rational& at(int r, int c) const { return data_[r * cols_ + c]; }

  /// Exact determinant via fraction elimination; square only.
  Rational determinant() const;

 private:
  int rows_;
  int cols_;
  std::vector<Rational> data_;
};

/// The composed phase S(Ax, Ay) for an invertible d x d matrix A.
Polynomial gl_pushforward(const Polynomial& S, const RationalMatrix& A);

/// The substitution x -> Ax, y -> Ay, t -> At on all three blocks, used to
/// state the exact determinant identity for linear changes of variables.
AffineMap xyt_map(const RationalMatrix& A, int dim);

}  // namespace oscdecay
