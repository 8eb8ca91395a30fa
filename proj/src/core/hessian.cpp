#include "core/hessian.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace oscdecay {

namespace {

void check_phase_vars(const Polynomial& S) {
  if (S.uses_t()) {
    throw Error(ErrorCode::invalid_argument,
                "phase must use only x and y variables");
  }
}

void check_index(int i, int d) {
  if (i < 1 || i > d) {
    throw Error(ErrorCode::invalid_argument,
                "index " + std::to_string(i) + " out of range [1, " +
                    std::to_string(d) + "]");
  }
}

/// All strictly increasing k-subsets of {1..d}, lexicographic.
std::vector<std::vector<int>> subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int pos = k - 1;
    while (pos >= 0 && cur[pos] == d - (k - 1 - pos)) --pos;
    if (pos < 0) break;
    ++cur[pos];
    for (int i = pos + 1; i < k; ++i) cur[i] = cur[i - 1] + 1;
  }
  return out;
}

Polynomial det_cofactor(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  // n == 3
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Bareiss fraction-free elimination: every division is exact over the
/// polynomial ring, so no rational functions appear.
Polynomial det_bareiss(PolyMatrix m) {
  const std::size_t n = m.size();
  const int dim = m[0][0].dim();
  Polynomial prev = Polynomial::constant(dim, Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return Polynomial::zero(dim);
      std::swap(m[k], m[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Polynomial num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = num.is_zero() ? std::move(num) : exact_divide(num, prev);
      }
      m[i][k] = Polynomial::zero(dim);
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

}  // namespace

Polynomial shift_difference(const Polynomial& S) {
  check_phase_vars(S);
  return S - S.substitute(AffineMap::shift_by_t(S.dim()));
}

PolyMatrix mixed_hessian(const Polynomial& S) {
  const int d = S.dim();
  Polynomial s_tau = shift_difference(S);
  PolyMatrix m(d, std::vector<Polynomial>(d, Polynomial::zero(d)));
  for (int i = 1; i <= d; ++i) {
    Polynomial dx = s_tau.differentiate({VarRole::x, i});
    for (int j = 1; j <= d; ++j) {
      m[i - 1][j - 1] = dx.differentiate({VarRole::y, j});
    }
  }
  return m;
}

Polynomial d_operator(const Polynomial& S, int i, int j, int l) {
  const int d = S.dim();
  check_index(i, d);
  check_index(j, d);
  check_index(l, d);
  Polynomial diff = S.differentiate({VarRole::x, l}) -
                    S.differentiate({VarRole::y, l});
  return diff.differentiate({VarRole::x, i}).differentiate({VarRole::y, j});
}

std::vector<MinorSelection> enumerate_minors(int d, int k_min, int k_max) {
  if (d < 1 || d > 6) {
    throw Error(ErrorCode::guard,
                "minor enumeration limited to dimensions 1 through 6");
  }
  if (k_min < 1 || k_max > d || k_min > k_max) {
    throw Error(ErrorCode::invalid_argument, "invalid minor size range");
  }
  std::vector<MinorSelection> out;
  for (int k = k_max; k >= k_min; --k) {
    auto rows = subsets(d, k);
    auto cols = rows;
    for (const auto& r : rows) {
      for (const auto& c : cols) out.push_back({r, c});
    }
  }
  return out;
}

Polynomial minor_determinant(const PolyMatrix& m, const MinorSelection& sel) {
  const int d = static_cast<int>(m.size());
  const int k = sel.k();
  if (k < 1 || k > d || static_cast<int>(sel.cols.size()) != k) {
    throw Error(ErrorCode::invalid_argument, "invalid minor selection");
  }
  for (int idx : sel.rows) check_index(idx, d);
  for (int idx : sel.cols) check_index(idx, d);
  PolyMatrix sub(k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      sub[r].push_back(m[sel.rows[r] - 1][sel.cols[c] - 1]);
    }
  }
  return poly_det(sub);
}

Polynomial poly_det(const PolyMatrix& m) {
  if (m.empty() || m.size() != m[0].size()) {
    throw Error(ErrorCode::invalid_argument, "determinant needs a square matrix");
  }
  return m.size() <= 3 ? det_cofactor(m) : det_bareiss(m);
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Rational RationalMatrix::determinant() const {
  if (rows_ != cols_) {
    throw Error(ErrorCode::invalid_argument, "determinant needs a square matrix");
  }
  RationalMatrix m = *this;
  const int n = rows_;
  Rational det(1);
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    while (pivot < n && m.at(pivot, k) == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != k) {
      for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(pivot, c));
      det = -det;
    }
    det *= m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      Rational factor = m.at(i, k) / m.at(k, k);
      for (int c = k; c < n; ++c) m.at(i, c) -= factor * m.at(k, c);
    }
  }
  return det;
}

Polynomial gl_pushforward(const Polynomial& S, const RationalMatrix& A) {
  check_phase_vars(S);
  const int d = S.dim();
  if (A.rows() != d || A.cols() != d) {
    throw Error(ErrorCode::invalid_argument,
                "matrix size does not match phase dimension");
  }
  if (A.determinant() == 0) {
    throw Error(ErrorCode::invalid_argument,
                "change of variables must be invertible");
  }
  AffineMap map(d);
  for (int i = 1; i <= d; ++i) {
    AffineExpr ex, ey;
    ex.lin.assign(3 * d, Rational(0));
    ey.lin.assign(3 * d, Rational(0));
    ex.constant = 0;
    ey.constant = 0;
    for (int j = 1; j <= d; ++j) {
      ex.lin[flat_index({VarRole::x, j}, d)] = A.at(i - 1, j - 1);
      ey.lin[flat_index({VarRole::y, j}, d)] = A.at(i - 1, j - 1);
    }
    map.set_target({VarRole::x, i}, std::move(ex));
    map.set_target({VarRole::y, i}, std::move(ey));
  }
  return S.substitute(map);
}

AffineMap xyt_map(const RationalMatrix& A, int dim) {
  if (A.rows() != dim || A.cols() != dim) {
    throw Error(ErrorCode::invalid_argument,
                "matrix size does not match dimension");
  }
  AffineMap map(dim);
  for (int i = 1; i <= dim; ++i) {
    for (VarRole role : {VarRole::x, VarRole::y, VarRole::t}) {
      AffineExpr e;
      e.lin.assign(3 * dim, Rational(0));
      e.constant = 0;
      for (int j = 1; j <= dim; ++j) {
        e.lin[flat_index({role, j}, dim)] = A.at(i - 1, j - 1);
      }
      map.set_target({role, i}, std::move(e));
    }
  }
  return map;
}

}  // namespace oscdecay
