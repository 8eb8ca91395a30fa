#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/polynomial.hpp"
#include "core/rational.hpp"
#include "core/rng.hpp"
#include "test_util.hpp"

using namespace oscdecay;
using namespace oscdecay::testutil;

TEST_CASE("rational helpers are exact") {
  CHECK(rational_to_string(Rational(3) / Rational(6)) == "1/2");
  CHECK(rational_from_decimal("0.25") == Rational(1) / Rational(4));
  CHECK(rational_from_decimal("12") == Rational(12));
  CHECK(rational_from_decimal("1.300") == Rational(13) / Rational(10));
  CHECK_THROWS_AS(rational_from_decimal("1.2.3"), Error);
  CHECK_THROWS_AS(rational_from_decimal(""), Error);
  CHECK_THROWS_AS(rational_from_decimal("1e3"), Error);
}

TEST_CASE("ring laws hold on random polynomials") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 1200; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    Polynomial a = random_polynomial(dim, 4, 3, true, rng);
    Polynomial b = random_polynomial(dim, 4, 3, true, rng);
    Polynomial c = random_polynomial(dim, 4, 3, true, rng);
    const Polynomial one = Polynomial::constant(dim, 1);
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE(a + b == b + a);
    REQUIRE(a * b == b * a);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a - a == Polynomial::zero(dim));
    REQUIRE(one * a == a);
    REQUIRE(a + Polynomial::zero(dim) == a);
    REQUIRE(-(-a) == a);
  }
}

TEST_CASE("derivative satisfies the Leibniz rule") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    Polynomial a = random_polynomial(dim, 4, 4, true, rng);
    Polynomial b = random_polynomial(dim, 4, 4, true, rng);
    VarRole role = static_cast<VarRole>(rng() % 3);
    VarId v{role, 1 + static_cast<int>(rng() % dim)};
    REQUIRE((a * b).differentiate(v) ==
            a.differentiate(v) * b + a * b.differentiate(v));
  }
}

TEST_CASE("derivative matches central finite differences") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    Polynomial p = random_polynomial(dim, 5, 5, true, rng);
    VarRole role = static_cast<VarRole>(rng() % 3);
    VarId v{role, 1 + static_cast<int>(rng() % dim)};
    std::vector<double> point = random_point(dim, rng);
    const int flat = flat_index(v, dim);
    const double h = 1e-5;
    std::vector<double> hi = point, lo = point;
    hi[flat] += h;
    lo[flat] -= h;
    double fd = (p.evaluate(std::span<const double>(hi)) -
                 p.evaluate(std::span<const double>(lo))) /
                (2 * h);
    double exact = p.differentiate(v).evaluate(std::span<const double>(point));
    double scale = std::max({1.0, std::fabs(exact), std::fabs(fd)});
    REQUIRE(std::fabs(fd - exact) <= 5e-6 * scale);
  }
}

TEST_CASE("rational and double evaluation agree") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    Polynomial p = random_polynomial(dim, 5, 4, true, rng);
    std::vector<Rational> qpt = random_rational_point(dim, rng);
    std::vector<double> dpt(qpt.size());
    for (std::size_t i = 0; i < qpt.size(); ++i) dpt[i] = qpt[i].get_d();
    double exact = Rational(p.evaluate(std::span<const Rational>(qpt))).get_d();
    double approx = p.evaluate(std::span<const double>(dpt));
    REQUIRE(std::fabs(exact - approx) <=
            1e-10 * std::max(1.0, std::fabs(exact)));
  }
}

TEST_CASE("substitution composes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    Polynomial p = random_polynomial(dim, 4, 3, true, rng);
    AffineMap outer(dim), inner(dim);
    for (int flat = 0; flat < 3 * dim; ++flat) {
      AffineExpr eo, ei;
      eo.lin.assign(3 * dim, Rational(0));
      ei.lin.assign(3 * dim, Rational(0));
      for (int k = 0; k < 3 * dim; ++k) {
        if (rng() % 3 == 0) eo.lin[k] = random_rational(rng);
        if (rng() % 3 == 0) ei.lin[k] = random_rational(rng);
      }
      eo.constant = random_rational(rng);
      ei.constant = random_rational(rng);
      outer.set_target_flat(flat, eo);
      inner.set_target_flat(flat, ei);
    }
    REQUIRE(p.substitute(outer).substitute(inner) ==
            p.substitute(AffineMap::compose(outer, inner)));
  }
}

TEST_CASE("shift substitution expands as expected") {
  // S = x1^2 y1 shifted: S(x1 + t1, y1 - t1).
  Polynomial x = Polynomial::variable(1, {VarRole::x, 1});
  Polynomial y = Polynomial::variable(1, {VarRole::y, 1});
  Polynomial t = Polynomial::variable(1, {VarRole::t, 1});
  Polynomial S = x * x * y;
  Polynomial shifted = S.substitute(AffineMap::shift_by_t(1));
  REQUIRE(shifted == (x + t) * (x + t) * (y - t));
}

TEST_CASE("homogeneous parts partition a polynomial") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    Polynomial p = random_polynomial(dim, 6, 4, false, rng);
    Polynomial sum = Polynomial::zero(dim);
    for (int m = 0; m <= 4; ++m) sum = sum + p.homogeneous_part(m);
    REQUIRE(sum == p);
  }
}

TEST_CASE("exact division inverts multiplication") {
  std::mt19937_64 rng(555);
  int done = 0;
  while (done < 300) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    Polynomial a = random_polynomial(dim, 3, 3, true, rng);
    Polynomial b = random_polynomial(dim, 3, 3, true, rng);
    if (b.is_zero()) continue;
    REQUIRE(exact_divide(a * b, b) == a);
    ++done;
  }
  Polynomial x = Polynomial::variable(1, {VarRole::x, 1});
  Polynomial y = Polynomial::variable(1, {VarRole::y, 1});
  CHECK_THROWS_AS(exact_divide(x, y), Error);
}

TEST_CASE("degree bookkeeping") {
  Polynomial z = Polynomial::zero(2);
  CHECK_FALSE(z.degree().has_value());
  Polynomial c = Polynomial::constant(2, Rational(7));
  CHECK(c.degree() == 0);
  Polynomial x = Polynomial::variable(2, {VarRole::x, 2});
  Polynomial t = Polynomial::variable(2, {VarRole::t, 1});
  Polynomial p = x * x * t + t * t;
  CHECK(p.degree() == 3);
  CHECK(p.min_t_degree() == 1);
  CHECK(p.uses_t());
  CHECK_FALSE(p.t_only());
  CHECK((t * t).t_only());
  auto used = p.used_vars();
  CHECK(used[flat_index({VarRole::x, 2}, 2)]);
  CHECK(used[flat_index({VarRole::t, 1}, 2)]);
  CHECK_FALSE(used[flat_index({VarRole::y, 1}, 2)]);
}

TEST_CASE("dimension guard rejects out-of-range dimensions") {
  CHECK_THROWS_AS(Polynomial(0), Error);
  CHECK_THROWS_AS(Polynomial(7), Error);
  try {
    Polynomial p(9);
    FAIL("expected a guard error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::guard);
  }
}

TEST_CASE("compiled polynomials match direct evaluation") {
  std::mt19937_64 rng(31415);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    Polynomial p = random_polynomial(dim, 6, 4, true, rng);
    CompiledPoly cp(p);
    std::vector<double> pt = random_point(dim, rng);
    double a = p.evaluate(std::span<const double>(pt));
    double b = cp.evaluate(pt.data());
    REQUIRE(std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("folding out x,y leaves the t-dependence intact") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    Polynomial p = random_polynomial(dim, 6, 4, true, rng);
    std::vector<double> pt = random_point(dim, rng);
    CompiledPoly folded =
        fold_xy(p, std::span<const double>(pt.data(), 2 * dim));
    double a = p.evaluate(std::span<const double>(pt));
    double b = folded.evaluate(pt.data());
    REQUIRE(std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("canonical text form is stable and sign-correct") {
  Polynomial x = Polynomial::variable(2, {VarRole::x, 1});
  Polynomial y2 = Polynomial::variable(2, {VarRole::y, 2});
  Polynomial p = x * x * y2.scaled(Rational(-3) / Rational(2)) +
                 Polynomial::constant(2, Rational(1));
  CHECK(p.to_string() == "-3/2*x1^2*y2 + 1");
  CHECK(Polynomial::zero(2).to_string() == "0");
  CHECK((-x).to_string() == "-x1");
}

TEST_CASE("seed mixing is deterministic and spreads") {
  CHECK(seed_mix(42, 0) == seed_mix(42, 0));
  CHECK(seed_mix(42, 0) != seed_mix(42, 1));
  CHECK(seed_mix(42, 0) != seed_mix(43, 0));
  SplitMix64 a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    double u = a.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.next_unit());
  }
}
