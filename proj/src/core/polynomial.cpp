#include "core/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace oscdecay {

namespace {

constexpr int kMaxDim = 6;

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorCode::guard,
                "dimension must be between 1 and " + std::to_string(kMaxDim) +
                    ", got " + std::to_string(dim));
  }
}

int total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

}  // namespace

int flat_index(VarId v, int dim) {
  if (v.index < 1 || v.index > dim) {
    throw Error(ErrorCode::invalid_argument,
                "variable index " + std::to_string(v.index) +
                    " out of range for dimension " + std::to_string(dim));
  }
  int block = v.role == VarRole::x ? 0 : v.role == VarRole::y ? 1 : 2;
  return block * dim + (v.index - 1);
}

std::string flat_var_name(int flat, int dim) {
  int block = flat / dim;
  int index = flat % dim + 1;
  const char letter = block == 0 ? 'x' : block == 1 ? 'y' : 't';
  return letter + std::to_string(index);
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  int da = total_degree(a);
  int db = total_degree(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

Polynomial::Polynomial(int dim) : dim_(dim) { check_dim(dim); }

Polynomial Polynomial::constant(int dim, const Rational& c) {
  Polynomial p(dim);
  p.add_term(Exponents(3 * dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(int dim, VarId v) {
  Polynomial p(dim);
  Exponents e(3 * dim, 0);
  e[flat_index(v, dim)] = 1;
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::monomial(int dim, const Exponents& exps,
                                const Rational& c) {
  Polynomial p(dim);
  if (exps.size() != static_cast<std::size_t>(3 * dim)) {
    throw Error(ErrorCode::invalid_argument,
                "exponent vector length does not match dimension");
  }
  p.add_term(exps, c);
  return p;
}

void Polynomial::add_term(const Exponents& exps, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::check_same_dim(const Polynomial& rhs) const {
  if (dim_ != rhs.dim_) {
    throw Error(ErrorCode::invalid_argument,
                "polynomial dimensions differ: " + std::to_string(dim_) +
                    " vs " + std::to_string(rhs.dim_));
  }
}

std::optional<int> Polynomial::degree() const {
  if (terms_.empty()) return std::nullopt;
  // Grlex order puts the highest total degree last.
  return total_degree(terms_.rbegin()->first);
}

std::optional<int> Polynomial::min_t_degree() const {
  if (terms_.empty()) return std::nullopt;
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int td = 0;
    for (int i = 2 * dim_; i < 3 * dim_; ++i) td += static_cast<int>(e[i]);
    if (best < 0 || td < best) best = td;
  }
  return best;
}

bool Polynomial::uses_t() const {
  for (const auto& [e, c] : terms_) {
    for (int i = 2 * dim_; i < 3 * dim_; ++i) {
      if (e[i] != 0) return true;
    }
  }
  return false;
}

bool Polynomial::t_only() const {
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < 2 * dim_; ++i) {
      if (e[i] != 0) return false;
    }
  }
  return true;
}

std::vector<bool> Polynomial::used_vars() const {
  std::vector<bool> used(3 * dim_, false);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < 3 * dim_; ++i) {
      if (e[i] != 0) used[i] = true;
    }
  }
  return used;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  check_same_dim(rhs);
  Polynomial out = *this;
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  check_same_dim(rhs);
  Polynomial out = *this;
  for (const auto& [e, c] : rhs.terms_) out.add_term(e, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  check_same_dim(rhs);
  Polynomial out(dim_);
  Exponents sum(3 * dim_, 0);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (int i = 0; i < 3 * dim_; ++i) sum[i] = ea[i] + eb[i];
      out.add_term(sum, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial out(dim_);
  if (c == 0) return out;
  for (const auto& [e, coeff] : terms_) out.terms_.emplace(e, coeff * c);
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial acc = Polynomial::constant(dim_, Rational(1));
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return acc;
}

bool Polynomial::operator==(const Polynomial& rhs) const {
  return dim_ == rhs.dim_ && terms_ == rhs.terms_;
}

Polynomial Polynomial::differentiate(VarId v) const {
  int flat = flat_index(v, dim_);
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[flat] == 0) continue;
    Exponents d = e;
    d[flat] -= 1;
    out.add_term(d, c * Rational(static_cast<long>(e[flat])));
  }
  return out;
}

Polynomial Polynomial::substitute(const AffineMap& map) const {
  if (map.dim() != dim_) {
    throw Error(ErrorCode::invalid_argument,
                "affine map dimension does not match polynomial");
  }
  // Precompute powers of each target expression up to the largest exponent
  // that actually occurs for that variable.
  std::vector<std::uint32_t> max_exp(3 * dim_, 0);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < 3 * dim_; ++i) max_exp[i] = std::max(max_exp[i], e[i]);
  }
  std::vector<std::vector<Polynomial>> powers(3 * dim_);
  for (int i = 0; i < 3 * dim_; ++i) {
    if (max_exp[i] == 0) continue;
    powers[i].reserve(max_exp[i] + 1);
    powers[i].push_back(Polynomial::constant(dim_, Rational(1)));
    Polynomial t = map.target_polynomial(i);
    for (std::uint32_t k = 1; k <= max_exp[i]; ++k) {
      powers[i].push_back(powers[i].back() * t);
    }
  }
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    Polynomial term = Polynomial::constant(dim_, c);
    for (int i = 0; i < 3 * dim_; ++i) {
      if (e[i] != 0) term = term * powers[i][e[i]];
    }
    out = out + term;
  }
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != static_cast<std::size_t>(3 * dim_)) {
    throw Error(ErrorCode::invalid_argument,
                "evaluation point must have 3*dim coordinates");
  }
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < 3 * dim_; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= point[i];
    }
    acc += term;
  }
  return acc;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != static_cast<std::size_t>(3 * dim_)) {
    throw Error(ErrorCode::invalid_argument,
                "evaluation point must have 3*dim coordinates");
  }
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (int i = 0; i < 3 * dim_; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= point[i];
    }
    acc += term;
  }
  return acc;
}

Polynomial Polynomial::homogeneous_part(int m) const {
  Polynomial out(dim_);
  for (const auto& [e, c] : terms_) {
    int xy_deg = 0;
    for (int i = 0; i < 2 * dim_; ++i) xy_deg += static_cast<int>(e[i]);
    if (xy_deg == m) out.terms_.emplace(e, c);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Descending canonical order for display.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << '-';
      first = false;
    } else {
      os << (negative ? " - " : " + ");
    }
    std::string vars;
    for (int i = 0; i < 3 * dim_; ++i) {
      if (e[i] == 0) continue;
      if (!vars.empty()) vars += '*';
      vars += flat_var_name(i, dim_);
      if (e[i] > 1) vars += '^' + std::to_string(e[i]);
    }
    if (vars.empty()) {
      os << rational_to_string(mag);
    } else {
      if (mag != 1) os << rational_to_string(mag) << '*';
      os << vars;
    }
  }
  return os.str();
}

AffineMap::AffineMap(int dim) : dim_(dim) {
  check_dim(dim);
  targets_.resize(3 * dim);
  for (int i = 0; i < 3 * dim; ++i) {
    targets_[i].lin.assign(3 * dim, Rational(0));
    targets_[i].lin[i] = 1;
    targets_[i].constant = 0;
  }
}

void AffineMap::set_target(VarId v, AffineExpr expr) {
  set_target_flat(flat_index(v, dim_), std::move(expr));
}

void AffineMap::set_target_flat(int flat, AffineExpr expr) {
  if (expr.lin.size() != static_cast<std::size_t>(3 * dim_)) {
    throw Error(ErrorCode::invalid_argument,
                "affine expression length does not match dimension");
  }
  targets_[flat] = std::move(expr);
}

AffineMap AffineMap::shift_by_t(int dim) {
  AffineMap map(dim);
  for (int i = 1; i <= dim; ++i) {
    int x = flat_index({VarRole::x, i}, dim);
    int y = flat_index({VarRole::y, i}, dim);
    int t = flat_index({VarRole::t, i}, dim);
    map.targets_[x].lin[t] = 1;   // x_i -> x_i + t_i
    map.targets_[y].lin[t] = -1;  // y_i -> y_i - t_i
  }
  return map;
}

AffineMap AffineMap::compose(const AffineMap& outer, const AffineMap& inner) {
  if (outer.dim_ != inner.dim_) {
    throw Error(ErrorCode::invalid_argument,
                "affine map dimensions differ in composition");
  }
  const int n = 3 * outer.dim_;
  AffineMap out(outer.dim_);
  for (int v = 0; v < n; ++v) {
    AffineExpr expr;
    expr.lin.assign(n, Rational(0));
    expr.constant = outer.targets_[v].constant;
    for (int w = 0; w < n; ++w) {
      const Rational& a = outer.targets_[v].lin[w];
      if (a == 0) continue;
      expr.constant += a * inner.targets_[w].constant;
      for (int u = 0; u < n; ++u) {
        const Rational& b = inner.targets_[w].lin[u];
        if (b != 0) expr.lin[u] += a * b;
      }
    }
    out.targets_[v] = std::move(expr);
  }
  return out;
}

Polynomial AffineMap::target_polynomial(int flat) const {
  Polynomial p(dim_);
  const AffineExpr& e = targets_[flat];
  if (e.constant != 0) p = p + Polynomial::constant(dim_, e.constant);
  for (int i = 0; i < 3 * dim_; ++i) {
    if (e.lin[i] == 0) continue;
    Exponents exps(3 * dim_, 0);
    exps[i] = 1;
    p = p + Polynomial::monomial(dim_, exps, e.lin[i]);
  }
  return p;
}

CompiledPoly::CompiledPoly(const Polynomial& p) {
  for (const auto& [e, c] : p.terms()) {
    Term t;
    t.coeff = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) t.powers.emplace_back(static_cast<int>(i), e[i]);
    }
    terms_.push_back(std::move(t));
  }
}

double CompiledPoly::evaluate(const double* point) const {
  double acc = 0.0;
  for (const Term& t : terms_) {
    double v = t.coeff;
    for (const auto& [flat, exp] : t.powers) {
      double base = point[flat];
      for (std::uint32_t k = 0; k < exp; ++k) v *= base;
    }
    acc += v;
  }
  return acc;
}

CompiledPoly fold_xy(const Polynomial& p, std::span<const double> xy) {
  const int dim = p.dim();
  if (xy.size() != static_cast<std::size_t>(2 * dim)) {
    throw Error(ErrorCode::invalid_argument,
                "fold_xy expects 2*dim coordinates");
  }
  // Collapse each term's x,y factor to a double and merge equal t-parts.
  std::map<Exponents, double, GrlexLess> folded;
  for (const auto& [e, c] : p.terms()) {
    double v = c.get_d();
    for (int i = 0; i < 2 * dim; ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) v *= xy[i];
    }
    Exponents t_part(3 * dim, 0);
    for (int i = 2 * dim; i < 3 * dim; ++i) t_part[i] = e[i];
    folded[t_part] += v;
  }
  CompiledPoly out;
  for (const auto& [e, v] : folded) {
    if (v == 0.0) continue;
    CompiledPoly::Term t;
    t.coeff = v;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) t.powers.emplace_back(static_cast<int>(i), e[i]);
    }
    out.terms_.push_back(std::move(t));
  }
  return out;
}

Polynomial exact_divide(const Polynomial& p, const Polynomial& q) {
  if (q.is_zero()) {
    throw Error(ErrorCode::internal, "exact_divide by zero polynomial");
  }
  Polynomial rem = p;
  Polynomial quot(p.dim());
  const auto q_lead_it = q.terms().rbegin();
  const Exponents& q_exp = q_lead_it->first;
  const Rational& q_coeff = q_lead_it->second;
  while (!rem.is_zero()) {
    const auto& r_lead = *rem.terms().rbegin();
    Exponents diff(r_lead.first.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
      if (r_lead.first[i] < q_exp[i]) {
        throw Error(ErrorCode::internal,
                    "exact_divide: leading term not divisible");
      }
      diff[i] = r_lead.first[i] - q_exp[i];
    }
    Polynomial factor =
        Polynomial::monomial(p.dim(), diff, r_lead.second / q_coeff);
    quot = quot + factor;
    rem = rem - factor * q;
  }
  return quot;
}

}  // namespace oscdecay
