// Integration acceptance suite. Each criterion prints one [PASS]/[FAIL]
// line; the exit status is the number of failed criteria. Tolerances are
// pinned here and must not be loosened to make a run green.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "core/decay.hpp"
#include "core/hessian.hpp"
#include "core/parser.hpp"
#include "core/report.hpp"
#include "core/sublevel.hpp"
#include "core/trilinear.hpp"
#include "test_util.hpp"

using namespace oscdecay;
using namespace oscdecay::testutil;

namespace {

std::vector<std::string> g_fails;

void require(bool cond, const std::string& message) {
  if (!cond) g_fails.push_back(message);
}

Polynomial parse_t(const std::string& text, int dim) {
  return parse_polynomial(text, {dim, true});
}

Polynomial parse_phase(const std::string& text, int dim) {
  return parse_polynomial(text, {dim, false});
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) { return format_double(v); }

// ---- C1: symbolic fidelity on the benchmark phases (under 1 second) ----

void criterion_symbolic_fidelity() {
  auto start = std::chrono::steady_clock::now();

  {
    Polynomial S = parse_phase("1/2*(x1*y1*y2 + x2*y2^2 - x2*y1^2)", 2);
    Polynomial det = poly_det(mixed_hessian(S));
    Polynomial radial = parse_t("t1^2 + t2^2", 2);
    Polynomial quotient = exact_divide(det, radial);
    require(quotient.degree() == 0,
            "rotational phase: determinant is not a constant multiple of "
            "t1^2 + t2^2");
    if (quotient.degree() == 0) {
      const std::vector<Rational> origin(6, Rational(0));
      Rational c = quotient.evaluate(origin);
      require(c > 0, "rotational phase: determinant constant is not "
                     "positive, got " + rational_to_string(c));
    }
  }
  {
    Polynomial S = parse_phase("1/2*(x1*y1^2 + x2*y2^2)", 2);
    require(poly_det(mixed_hessian(S)) == parse_t("t1*t2", 2),
            "diagonal phase: determinant is not t1*t2");
  }
  {
    Polynomial S = parse_phase("1/2*(x1*y2^2 + x2^2*y1)", 2);
    require(poly_det(mixed_hessian(S)) == parse_t("t2^2", 2),
            "rank-one phase: determinant is not t2^2");
  }
  {
    Polynomial S = parse_phase("1/2*x1^2*y1", 1);
    PolyMatrix M = mixed_hessian(S);
    require(M[0][0] == parse_t("-t1", 1),
            "fold phase: entry is not -t1 (sign convention (-1)^k)");
  }
  {
    Polynomial S = parse_phase("x1^2*y1 + x2^2*y2 + 1/300*x1^3*y1", 2);
    Polynomial det = poly_det(mixed_hessian(S));
    require(det == parse_t("t1*t2*(4 + 1/25*x1 + 1/50*t1)", 2),
            "worked quartic example: determinant mismatch");
  }
  {
    Polynomial S = parse_phase(
        "x1*x2*y2 + x1*x3*y3 + 1/2*x1*y3^2 + 1/2*x1^2*y1 - 1/2*x2^2*y1 - "
        "1/2*x3*y1^2 - 1/2*x2^2*y3",
        3);
    PolyMatrix M = mixed_hessian(S);
    const char* expected[3][3] = {{"-t1", "-t2", "0"},
                                  {"t2", "-t1", "t2"},
                                  {"-t1", "0", "-t1"}};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        require(M[i][j] == parse_t(expected[i][j], 3),
                "3d benchmark: entry (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ") mismatch");
      }
    }
    require(poly_det(M) == parse_t("-t1^3", 3),
            "3d benchmark: full determinant is not -t1^3");
    require(minor_determinant(M, {{1, 2}, {1, 2}}) ==
                parse_t("t1^2 + t2^2", 3),
            "3d benchmark: top-left 2x2 minor is not t1^2 + t2^2");
  }

  double elapsed = seconds_since(start);
  require(elapsed < 1.0,
          "symbolic checks took " + fmt(elapsed) + "s (budget 1s)");
}

// ---- C2: exact exponent formula values ----

void criterion_exponent_formula() {
  struct Quad {
    int k;
    Rational alpha;
    Rational expected;
  };
  const Quad quads[] = {
      {2, Rational(1), Rational(1) / 3},
      {2, Rational(1) / 2, Rational(1) / 4},
      {1, Rational(1), Rational(1) / 6},
      {3, Rational(1) / 3, Rational(3) / 10},
  };
  for (const Quad& q : quads) {
    Rational got = predicted_exponent_exact(q.k, q.alpha);
    require(got == q.expected,
            "exact exponent (k=" + std::to_string(q.k) + ", alpha=" +
                rational_to_string(q.alpha) + ") = " +
                rational_to_string(got) + ", expected " +
                rational_to_string(q.expected));
    double gd = predicted_exponent(q.k, q.alpha.get_d());
    require(std::fabs(gd - q.expected.get_d()) < 1e-15,
            "floating exponent mismatch at k=" + std::to_string(q.k));
  }
  const double inf = std::numeric_limits<double>::infinity();
  require(predicted_exponent(2, inf) == 0.5, "limit k=2, alpha=inf != 1/2");
  require(predicted_exponent(3, inf) == 0.75, "limit k=3, alpha=inf != 3/4");
  require(predicted_exponent(2, 0.0) == 0.0, "alpha=0 must give 0");
}

// ---- C3: sublevel estimator calibration windows (under 5 minutes) ----

void criterion_calibration() {
  auto start = std::chrono::steady_clock::now();
  SupportGeometry geom;
  LadderConfig ladder;
  SampleConfig config;  // seed 42, 200000 samples, ball

  {
    AlphaEstimate est =
        estimate_alpha(parse_t("t1^2 + t2^2", 2), geom, ladder, config);
    require(est.status == AlphaStatus::ok, "radial: estimator not ok");
    require(est.alpha_hat >= 0.93 && est.alpha_hat <= 1.00,
            "radial: alpha_hat " + fmt(est.alpha_hat) +
                " outside [0.93, 1.00]");
  }
  {
    AlphaEstimate est =
        estimate_alpha(parse_t("t1^2", 2), geom, ladder, config);
    require(est.status == AlphaStatus::ok, "square: estimator not ok");
    require(est.alpha_hat >= 0.45 && est.alpha_hat <= 0.55,
            "square: alpha_hat " + fmt(est.alpha_hat) +
                " outside [0.45, 0.55]");
  }
  {
    AlphaEstimate est =
        estimate_alpha(parse_t("t1*t2", 2), geom, ladder, config);
    require(est.status == AlphaStatus::ok, "product: estimator not ok");
    require(est.alpha_hat >= 0.80 && est.alpha_hat < 1.00,
            "product: alpha_hat " + fmt(est.alpha_hat) +
                " outside [0.80, 1.00)");
    require(est.slopes_increasing,
            "product: log-corrected slopes must increase toward small eps");
  }
  double elapsed = seconds_since(start);
  require(elapsed < 300.0,
          "calibration took " + fmt(elapsed) + "s (budget 300s)");
}

// ---- C4: a minor can beat the full determinant ----

void criterion_minor_beats_determinant() {
  Polynomial S = parse_phase(
      "x1*x2*y2 + x1*x3*y3 + 1/2*x1*y3^2 + 1/2*x1^2*y1 - 1/2*x2^2*y1 - "
      "1/2*x3*y1^2 - 1/2*x2^2*y3",
      3);
  SupportGeometry geom;
  LadderConfig ladder;
  SampleConfig config;
  PhaseAnalysis analysis = analyze_phase(S, geom, ladder, config);

  double det_exp = -1.0, minor_exp = -1.0;
  for (const MinorReport& m : analysis.minors) {
    if (m.selection.k() == 3) det_exp = m.exponent;
    if (m.selection.rows == std::vector<int>{1, 2} &&
        m.selection.cols == std::vector<int>{1, 2}) {
      minor_exp = m.exponent;
    }
  }
  require(det_exp >= 0.27 && det_exp <= 0.31,
          "full determinant exponent " + fmt(det_exp) +
              " outside [0.27, 0.31]");
  require(minor_exp >= 0.30 && minor_exp <= 0.34,
          "2x2 minor exponent " + fmt(minor_exp) + " outside [0.30, 0.34]");
  require(minor_exp > det_exp,
          "minor exponent must beat the full determinant");
  require(analysis.best_index >= 0 &&
              analysis.minors[analysis.best_index].selection.k() == 2,
          "best prediction must come from a 2x2 minor");
  require(std::fabs(analysis.best_exponent - minor_exp) < 1e-12,
          "best exponent must equal the winning minor's");
}

// ---- C5: exact determinant identity under linear changes of variables ----

void criterion_gl_invariance() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xA5A5A5);
  std::uniform_int_distribution<int> entry(-3, 3);
  int done = 0;
  while (done < 50) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    RationalMatrix A(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) A.at(r, c) = entry(rng);
    }
    Rational det = A.determinant();
    if (det == 0 || abs(det.get_num()) > 5) continue;
    Polynomial S = random_homogeneous_cubic(dim, rng);
    Polynomial lhs = poly_det(mixed_hessian(gl_pushforward(S, A)));
    Polynomial rhs = poly_det(mixed_hessian(S)).substitute(xyt_map(A, dim));
    if (lhs != rhs.scaled(det * det)) {
      require(false, "determinant identity failed at trial " +
                         std::to_string(done) + " (dim " +
                         std::to_string(dim) + ")");
      break;
    }
    ++done;
  }
  double elapsed = seconds_since(start);
  require(elapsed < 30.0,
          "linear-invariance sweep took " + fmt(elapsed) + "s (budget 30s)");
}

// ---- C6: fold phase decays at the predicted 1/6 rate ----

void criterion_fold_ladder() {
  Polynomial S = parse_phase("1/2*x1^2*y1", 1);
  CutoffSpec one;
  one.kind = CutoffKind::one;
  TestFamily fam;
  fam.kind = FamilyKind::scaled_box;
  LambdaLadder ladder;  // 1e2 .. 1e5, 8 rungs
  QuadConfig quad;
  DecayFit fit = run_ladder(S, one, fam, ladder, quad);
  require(fit.usable_rungs == 8,
          "fold ladder: expected 8 usable rungs, got " +
              std::to_string(fit.usable_rungs));
  require(std::fabs(fit.slope + 1.0 / 6.0) <= 0.02,
          "fold ladder slope " + fmt(fit.slope) +
              " not within 0.02 of -1/6");
}

// ---- C7: full-rank phase decays at 1/3 and is sharp ----

void criterion_full_rank_ladder() {
  Polynomial S = parse_phase("1/2*(x1*y1*y2 + x2*y2^2 - x2*y1^2)", 2);
  CutoffSpec one;
  one.kind = CutoffKind::one;
  TestFamily fam;
  fam.kind = FamilyKind::scaled_box;
  LambdaLadder ladder;
  ladder.lambda_max = 1e4;
  QuadConfig quad;
  DecayFit fit = run_ladder(S, one, fam, ladder, quad);
  require(std::fabs(fit.slope + 1.0 / 3.0) <= 0.05,
          "full-rank ladder slope " + fmt(fit.slope) +
              " not within 0.05 of -1/3");
  // Sharpness: ratio * lambda^{1/3} must stay bounded below.
  double floor_seen = std::numeric_limits<double>::infinity();
  for (const IntegralValue& v : fit.ladder) {
    floor_seen = std::min(floor_seen, v.ratio * std::cbrt(v.lambda));
  }
  require(floor_seen >= 0.02,
          "normalized ratio floor " + fmt(floor_seen) + " fell below 0.02");
}

// ---- C8: rank-one phase with the anisotropic family decays at 1/4 ----

void criterion_aniso_ladder() {
  Polynomial S = parse_phase("x1*y2^2 + x2^2*y1", 2);
  CutoffSpec one;
  one.kind = CutoffKind::one;
  TestFamily fam;
  fam.kind = FamilyKind::aniso_box;
  LambdaLadder ladder;
  ladder.lambda_max = 1e4;
  QuadConfig quad;
  DecayFit fit = run_ladder(S, one, fam, ladder, quad);
  require(std::fabs(fit.slope + 0.25) <= 0.05,
          "anisotropic ladder slope " + fmt(fit.slope) +
              " not within 0.05 of -1/4");
}

// ---- C9: quadrature agrees with the midpoint reference ----

void criterion_oracle_agreement() {
  std::mt19937_64 rng(0xC9C9C9);
  CutoffSpec bump;
  TestFamily unit;
  unit.kind = FamilyKind::custom_box;
  unit.widths = {1.0};
  unit.scales = {0.0};
  QuadConfig quad;
  quad.points = std::size_t{1} << 18;

  // Random degree-<=3 phases with small integer-over-2 coefficients keep
  // the gradient bound low enough for the midpoint guard at lambda <= 50.
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> nterms(1, 3);
  std::uniform_int_distribution<int> pick(0, 1);
  std::uniform_real_distribution<double> lam(0.0, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    Polynomial S(1);
    const int m = nterms(rng);
    for (int t = 0; t < m; ++t) {
      Exponents e(3, 0);
      for (int i = 0; i < 3; ++i) e[pick(rng)] += 1;
      S = S + Polynomial::monomial(1, e, Rational(num(rng)) / 2);
    }
    double lambda = lam(rng);
    FamilyInstance inst = instantiate_family(unit, 1, lambda);
    IntegralValue q = evaluate_trilinear(S, bump, inst, quad);
    OracleValue o = brute_force_oracle(S, bump, inst, 4000);
    double diff = std::abs(q.value - o.value);
    double budget = 3.0 * (q.err + o.err) + 1e-9;
    if (diff > budget) {
      require(false, "trial " + std::to_string(trial) + " (lambda " +
                         fmt(lambda) + "): |q - oracle| = " + fmt(diff) +
                         " > " + fmt(budget));
    }
  }

  // Phase-free sanity value: the unit simplex has volume 1/2.
  CutoffSpec one;
  one.kind = CutoffKind::one;
  FamilyInstance inst = instantiate_family(unit, 1, 0.0);
  OracleValue o = brute_force_oracle(parse_phase("x1^2*y1", 1), one, inst,
                                     6000);
  require(std::fabs(o.value.real() - 0.5) <= 1e-4,
          "midpoint simplex value " + fmt(o.value.real()) +
              " not within 1e-4 of 1/2");
}

// ---- C10: property suites at >= 1000 trials ----

void criterion_property_suites() {
  // Ring laws.
  {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 1000; ++trial) {
      const int dim = 1 + static_cast<int>(rng() % 2);
      Polynomial a = random_polynomial(dim, 4, 3, true, rng);
      Polynomial b = random_polynomial(dim, 4, 3, true, rng);
      Polynomial c = random_polynomial(dim, 4, 3, true, rng);
      if ((a + b) + c != a + (b + c) || a * b != b * a ||
          a * (b + c) != a * b + a * c || !(a - a).is_zero()) {
        require(false, "ring law failed at trial " + std::to_string(trial));
        return;
      }
    }
  }
  // Parser round-trip.
  {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 1000; ++trial) {
      const int dim = 1 + static_cast<int>(rng() % 3);
      Polynomial p = random_polynomial(dim, 6, 5, true, rng);
      if (parse_polynomial(p.to_string(), {dim, true}) != p) {
        require(false,
                "round-trip failed for: " + p.to_string());
        return;
      }
    }
  }
  // Parser totality under fuzzing.
  {
    std::mt19937_64 rng(303);
    const std::string alphabet = "xyt0123456789+-*/^(). ";
    std::uniform_int_distribution<std::size_t> pickc(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 32);
    for (int trial = 0; trial < 1000; ++trial) {
      std::string text;
      const int n = len(rng);
      for (int i = 0; i < n; ++i) text.push_back(alphabet[pickc(rng)]);
      try {
        parse_polynomial(text, {2, true});
      } catch (const ParseError& e) {
        if (e.begin() > e.end() || e.end() > text.size() + 1) {
          require(false, "parse error span out of bounds for: " + text);
          return;
        }
      } catch (const Error&) {
      }
    }
  }
  // Shift Hessian vanishes at t = 0 (checked through the t-degree).
  {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 1000; ++trial) {
      const int dim = 1 + static_cast<int>(rng() % 2);
      Polynomial S = random_polynomial(dim, 5, 4, false, rng);
      for (const auto& row : mixed_hessian(S)) {
        for (const Polynomial& entry : row) {
          auto deg = entry.min_t_degree();
          if (deg.has_value() && *deg < 1) {
            require(false, "shift Hessian entry has a t-free term");
            return;
          }
        }
      }
    }
  }
  // Additively split phases are annihilated.
  {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 1000; ++trial) {
      const int dim = 1 + static_cast<int>(rng() % 2);
      AffineMap drop_y(dim), drop_x(dim), diag(dim);
      for (int i = 1; i <= dim; ++i) {
        AffineExpr z;
        z.lin.assign(3 * dim, Rational(0));
        z.constant = 0;
        drop_y.set_target({VarRole::y, i}, z);
        drop_x.set_target({VarRole::x, i}, z);
        AffineExpr sum;
        sum.lin.assign(3 * dim, Rational(0));
        sum.lin[flat_index({VarRole::x, i}, dim)] = 1;
        sum.lin[flat_index({VarRole::y, i}, dim)] = 1;
        sum.constant = 0;
        diag.set_target({VarRole::x, i}, sum);
      }
      Polynomial S =
          random_polynomial(dim, 4, 4, false, rng).substitute(drop_y) +
          random_polynomial(dim, 4, 4, false, rng).substitute(drop_x) +
          random_polynomial(dim, 4, 4, false, rng)
              .substitute(drop_y)
              .substitute(diag);
      for (const auto& row : mixed_hessian(S)) {
        for (const Polynomial& entry : row) {
          if (!entry.is_zero()) {
            require(false, "split phase not annihilated");
            return;
          }
        }
      }
    }
  }
  // Homogeneous cubics linearize exactly.
  {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 1000; ++trial) {
      const int dim = 1 + static_cast<int>(rng() % 2);
      Polynomial S = random_homogeneous_cubic(dim, rng);
      PolyMatrix M = mixed_hessian(S);
      for (int i = 1; i <= dim; ++i) {
        for (int j = 1; j <= dim; ++j) {
          Polynomial expect(dim);
          for (int l = 1; l <= dim; ++l) {
            expect = expect - Polynomial::variable(dim, {VarRole::t, l}) *
                                  d_operator(S, i, j, l);
          }
          if (M[i - 1][j - 1] != expect) {
            require(false, "cubic linearization failed");
            return;
          }
        }
      }
    }
  }
  // Sublevel monotonicity and scale covariance.
  {
    std::mt19937_64 rng(707);
    SupportGeometry geom;
    SampleConfig config;
    config.samples = 1500;
    config.grid_n = 1;
    LadderConfig ladder;
    for (int trial = 0; trial < 1000; ++trial) {
      const int dim = 1 + static_cast<int>(rng() % 2);
      Polynomial P = random_polynomial(dim, 4, 3, true, rng);
      config.seed = rng();
      AlphaEstimate est = estimate_alpha(P, geom, ladder, config);
      if (!est.monotone_ok) {
        require(false, "measure ladder not monotone for " + P.to_string());
        return;
      }
      if (!P.is_zero()) {
        MeasureSample a =
            sublevel_measure(P.scaled(Rational(5)), 0.05, geom, config);
        MeasureSample b = sublevel_measure(P, 0.01, geom, config);
        if (a.hits != b.hits) {
          require(false, "scale covariance failed for " + P.to_string());
          return;
        }
      }
    }
  }
  // Report reproducibility, bit for bit apart from the timestamp.
  {
    RunConfig config;
    config.command = "analyze";
    config.phase = "x1^2*y1 + x2^2*y2 + 1/300*x1^3*y1";
    config.dim = 2;
    config.samples = 20000;
    auto strip = [](std::string text) {
      auto pos = text.find("\"generated_at\"");
      auto end = text.find('\n', pos);
      text.erase(pos, end - pos);
      return text;
    };
    std::string a = strip(run_analyze(config).dump(2));
    std::string b = strip(run_analyze(config).dump(2));
    require(a == b, "analyze reports differ between identical runs");
  }
}

struct Criterion {
  const char* name;
  std::function<void()> fn;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"C1 symbolic fidelity of shift Hessians", criterion_symbolic_fidelity},
      {"C2 exact exponent formula", criterion_exponent_formula},
      {"C3 sublevel estimator calibration", criterion_calibration},
      {"C4 minor beats determinant in 3d", criterion_minor_beats_determinant},
      {"C5 determinant identity under linear maps", criterion_gl_invariance},
      {"C6 fold ladder decays at 1/6", criterion_fold_ladder},
      {"C7 full-rank ladder decays at 1/3 and is sharp",
       criterion_full_rank_ladder},
      {"C8 anisotropic ladder decays at 1/4", criterion_aniso_ladder},
      {"C9 quadrature matches the midpoint reference",
       criterion_oracle_agreement},
      {"C10 property suites (1000+ trials each)", criterion_property_suites},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    g_fails.clear();
    auto start = std::chrono::steady_clock::now();
    try {
      c.fn();
    } catch (const std::exception& e) {
      g_fails.push_back(std::string("unhandled exception: ") + e.what());
    }
    double elapsed = seconds_since(start);
    if (g_fails.empty()) {
      std::printf("[PASS] %s (%.2fs)\n", c.name, elapsed);
    } else {
      ++failures;
      std::printf("[FAIL] %s (%.2fs)\n", c.name, elapsed);
      for (const std::string& reason : g_fails) {
        std::printf("       - %s\n", reason.c_str());
      }
    }
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n",
                sizeof(criteria) / sizeof(criteria[0]));
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
