#include "core/sublevel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace oscdecay {

namespace {

constexpr double kRungRelErrGate = 0.25;   // rung usable below this rel. SE
constexpr double kSlopeSigmaGate = 0.03;   // slope usable below this sigma
constexpr std::size_t kMaxGridPoints = 200000;

/// Pre-folds P at every support grid point so the per-sample work is a
/// minimum of cheap univariate-in-t evaluations.
class WorstCaseEvaluator {
 public:
  WorstCaseEvaluator(const Polynomial& P, const SupportGeometry& geom,
                     int grid_n) {
    if (grid_n < 1) {
      throw Error(ErrorCode::invalid_argument, "grid_n must be at least 1");
    }
    const int dim = P.dim();
    const double r = geom.half_width;
    std::vector<int> active;
    std::vector<bool> used = P.used_vars();
    for (int i = 0; i < 2 * dim; ++i) {
      if (used[i]) active.push_back(i);
    }
    const int per_axis = 2 * grid_n + 1;
    double total = 1.0;
    for (std::size_t i = 0; i < active.size(); ++i) total *= per_axis;
    if (total > static_cast<double>(kMaxGridPoints)) {
      throw Error(ErrorCode::guard,
                  "support grid too large: reduce grid resolution or the "
                  "number of x,y variables in the polynomial");
    }
    std::vector<double> axis(per_axis);
    for (int i = 0; i < per_axis; ++i) axis[i] = -r + i * (r / grid_n);

    std::vector<double> xy(2 * dim, 0.0);
    if (active.empty()) {
      polys_.push_back(fold_xy(P, xy));
      return;
    }
    std::vector<int> odo(active.size(), 0);
    while (true) {
      for (std::size_t a = 0; a < active.size(); ++a) {
        xy[active[a]] = axis[odo[a]];
      }
      polys_.push_back(fold_xy(P, xy));
      std::size_t pos = 0;
      while (pos < odo.size() && ++odo[pos] == per_axis) {
        odo[pos] = 0;
        ++pos;
      }
      if (pos == odo.size()) break;
    }
  }

  /// point is a full 3*dim layout buffer whose t block holds the shift.
  double min_abs(const double* point) const {
    double best = std::numeric_limits<double>::infinity();
    for (const CompiledPoly& p : polys_) {
      best = std::min(best, std::fabs(p.evaluate(point)));
    }
    return best;
  }

 private:
  std::vector<CompiledPoly> polys_;
};

/// Jittered-grid point in [0,1)^k for k <= 3: index < G^k gets one point per
/// grid cell, the tail is plain uniform. The empirical measure over all
/// `total` points is unbiased for Lebesgue measure, with far lower variance
/// than iid sampling for sets with smooth boundaries.
template <int K>
void stratified_unit(std::size_t index, std::size_t total, SplitMix64& rng,
                     double* u) {
  std::size_t g = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(total), 1.0 / K)));
  while (g > 1) {
    std::size_t cells = g;
    for (int i = 1; i < K; ++i) cells *= g;
    if (cells <= total) break;
    --g;
  }
  std::size_t cells = g;
  for (int i = 1; i < K; ++i) cells *= g;
  if (g >= 1 && index < cells) {
    std::size_t rem = index;
    for (int i = K - 1; i >= 0; --i) {
      u[i] = (static_cast<double>(rem % g) + rng.next_unit()) /
             static_cast<double>(g);
      rem /= g;
    }
  } else {
    for (int i = 0; i < K; ++i) u[i] = rng.next_unit();
  }
}

void gaussian_pair(SplitMix64& rng, double& a, double& b) {
  double u1 = 1.0 - rng.next_unit();  // (0, 1]
  double u2 = rng.next_unit();
  double m = std::sqrt(-2.0 * std::log(u1));
  a = m * std::cos(2.0 * std::numbers::pi * u2);
  b = m * std::sin(2.0 * std::numbers::pi * u2);
}

/// One shift point, marginally uniform over the domain, fully determined by
/// (seed, index) so thread schedule cannot affect results.
void sample_shift(int dim, double radius, ShiftDomain domain,
                  std::uint64_t seed, std::size_t index, std::size_t total,
                  double* out) {
  SplitMix64 rng(seed_mix(seed, index));
  if (domain == ShiftDomain::box || dim == 1) {
    std::array<double, 3> u{};
    switch (std::min(dim, 3)) {
      case 1: stratified_unit<1>(index, total, rng, u.data()); break;
      case 2: stratified_unit<2>(index, total, rng, u.data()); break;
      default: stratified_unit<3>(index, total, rng, u.data()); break;
    }
    for (int i = 0; i < dim; ++i) {
      double ui = i < 3 ? u[i] : rng.next_unit();
      out[i] = radius * (2.0 * ui - 1.0);
    }
    return;
  }
  if (dim == 2) {
    std::array<double, 2> u{};
    stratified_unit<2>(index, total, rng, u.data());
    double r = radius * std::sqrt(u[0]);
    double phi = 2.0 * std::numbers::pi * u[1];
    out[0] = r * std::cos(phi);
    out[1] = r * std::sin(phi);
    return;
  }
  if (dim == 3) {
    std::array<double, 3> u{};
    stratified_unit<3>(index, total, rng, u.data());
    double r = radius * std::cbrt(u[0]);
    double z = 2.0 * u[1] - 1.0;
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = 2.0 * std::numbers::pi * u[2];
    out[0] = r * s * std::cos(phi);
    out[1] = r * s * std::sin(phi);
    out[2] = r * z;
    return;
  }
  // dim in 4..6: stratified radius, Gaussian direction.
  double u0;
  stratified_unit<1>(index, total, rng, &u0);
  double r = radius * std::pow(u0, 1.0 / dim);
  std::array<double, 6> dir{};
  for (int i = 0; i < dim; i += 2) {
    double a, b;
    gaussian_pair(rng, a, b);
    dir[i] = a;
    if (i + 1 < dim) dir[i + 1] = b;
  }
  double norm = 0.0;
  for (int i = 0; i < dim; ++i) norm += dir[i] * dir[i];
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    dir[0] = 1.0;
    norm = 1.0;
  }
  for (int i = 0; i < dim; ++i) out[i] = r * dir[i] / norm;
}

/// Worst-case |P| at every sample point; one pass shared by all eps rungs.
std::vector<double> worst_values(const Polynomial& P,
                                 const SupportGeometry& geom,
                                 const SampleConfig& config) {
  if (config.samples == 0) {
    throw Error(ErrorCode::invalid_argument, "sample count must be positive");
  }
  const int dim = P.dim();
  const double radius = geom.radius(dim);
  WorstCaseEvaluator evaluator(P, geom, config.grid_n);
  std::vector<double> values(config.samples);
  constexpr std::size_t kBlock = 2048;
  const std::size_t blocks = (config.samples + kBlock - 1) / kBlock;
  run_parallel(blocks, [&](std::size_t b) {
    std::array<double, 18> point{};  // 3 * dim, dim <= 6
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(config.samples, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      sample_shift(dim, radius, config.domain, config.seed, i, config.samples,
                   point.data() + 2 * dim);
      values[i] = evaluator.min_abs(point.data());
    }
  });
  return values;
}

MeasureSample rung_from_counts(double eps, std::uint64_t hits, std::size_t n,
                               double volume) {
  MeasureSample s;
  s.eps = eps;
  s.hits = hits;
  s.n = n;
  double p = static_cast<double>(hits) / static_cast<double>(n);
  s.m_hat = volume * p;
  s.rel_std_error = hits > 0
                        ? std::sqrt((1.0 - p) / static_cast<double>(hits))
                        : std::numeric_limits<double>::infinity();
  s.usable = hits > 0 && s.rel_std_error < kRungRelErrGate;
  return s;
}

}  // namespace

double SupportGeometry::radius(int dim) const {
  if (ball_radius > 0.0) return ball_radius;
  return 2.0 * half_width * std::sqrt(2.0 * dim);
}

std::vector<double> geometric_ladder(double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi > lo) || steps < 2) {
    throw Error(ErrorCode::invalid_argument,
                "ladder needs 0 < lo < hi and at least 2 steps");
  }
  std::vector<double> out(steps);
  double log_hi = std::log(hi);
  double log_lo = std::log(lo);
  for (int i = 0; i < steps; ++i) {
    out[i] = std::exp(log_hi + (log_lo - log_hi) * i / (steps - 1));
  }
  out.front() = hi;
  out.back() = lo;
  return out;
}

double ball_volume(int dim, double R) {
  return std::pow(std::numbers::pi, dim / 2.0) * std::pow(R, dim) /
         std::tgamma(dim / 2.0 + 1.0);
}

double domain_volume(int dim, const SupportGeometry& geom, ShiftDomain domain) {
  double R = geom.radius(dim);
  if (domain == ShiftDomain::box) return std::pow(2.0 * R, dim);
  return ball_volume(dim, R);
}

double worst_case_abs(const Polynomial& P, std::span<const double> tau,
                      const SupportGeometry& geom, int grid_n) {
  const int dim = P.dim();
  if (tau.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::invalid_argument,
                "shift point must have dim coordinates");
  }
  WorstCaseEvaluator evaluator(P, geom, grid_n);
  std::array<double, 18> point{};
  std::copy(tau.begin(), tau.end(), point.begin() + 2 * dim);
  return evaluator.min_abs(point.data());
}

MeasureSample sublevel_measure(const Polynomial& P, double eps,
                               const SupportGeometry& geom,
                               const SampleConfig& config) {
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "eps must be positive");
  }
  std::vector<double> values = worst_values(P, geom, config);
  std::uint64_t hits = 0;
  for (double v : values) {
    if (v < eps) ++hits;
  }
  return rung_from_counts(eps, hits, config.samples,
                          domain_volume(P.dim(), geom, config.domain));
}

AlphaEstimate estimate_alpha(const Polynomial& P, const SupportGeometry& geom,
                             const LadderConfig& ladder,
                             const SampleConfig& config) {
  if (ladder.steps < 4) {
    throw Error(ErrorCode::invalid_argument,
                "alpha estimation needs a ladder of at least 4 rungs");
  }
  AlphaEstimate est;
  if (P.is_zero()) {
    est.status = AlphaStatus::no_decay;
    return est;
  }
  std::vector<double> eps =
      geometric_ladder(ladder.eps_min, ladder.eps_max, ladder.steps);
  std::vector<double> values = worst_values(P, geom, config);
  const double volume = domain_volume(P.dim(), geom, config.domain);

  std::uint64_t any_hits = 0;
  for (double e : eps) {
    std::uint64_t hits = 0;
    for (double v : values) {
      if (v < e) ++hits;
    }
    any_hits += hits;
    est.ladder.push_back(rung_from_counts(e, hits, config.samples, volume));
  }
  for (std::size_t i = 0; i + 1 < est.ladder.size(); ++i) {
    if (est.ladder[i].m_hat < est.ladder[i + 1].m_hat) est.monotone_ok = false;
  }
  if (any_hits == 0) {
    est.status = AlphaStatus::infinite;
    return est;
  }

  std::vector<int> usable;
  for (std::size_t i = 0; i < est.ladder.size(); ++i) {
    if (est.ladder[i].usable) usable.push_back(static_cast<int>(i));
  }
  for (std::size_t u = 0; u + 1 < usable.size(); ++u) {
    const MeasureSample& a = est.ladder[usable[u]];      // larger eps
    const MeasureSample& b = est.ladder[usable[u + 1]];  // smaller eps
    double dlog = std::log(a.eps) - std::log(b.eps);
    SlopeSample s;
    s.from_rung = usable[u];
    s.to_rung = usable[u + 1];
    s.value = (std::log(a.m_hat) - std::log(b.m_hat)) / dlog;
    s.sigma = std::sqrt(a.rel_std_error * a.rel_std_error +
                        b.rel_std_error * b.rel_std_error) /
              dlog;
    s.usable = s.sigma <= kSlopeSigmaGate;
    est.slopes.push_back(s);
  }

  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  double prev = -std::numeric_limits<double>::infinity();
  for (const SlopeSample& s : est.slopes) {
    if (!s.usable) continue;
    if (s.value < prev - 1e-9) est.slopes_increasing = false;
    prev = s.value;
    best = std::min(best, s.value - s.sigma);
    found = true;
  }
  if (!found) {
    est.status = AlphaStatus::unusable;
    return est;
  }
  est.status = AlphaStatus::ok;
  est.alpha_hat = std::max(0.0, best);
  return est;
}

}  // namespace oscdecay
