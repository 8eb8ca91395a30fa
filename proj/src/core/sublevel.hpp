#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/polynomial.hpp"

namespace oscdecay {

/// Geometry of the cutoff support and the shift domain derived from it.
struct SupportGeometry {
  /// Half-width r of the support box: supp(cutoff) is [-r, r]^{2d}.
  double half_width = 0.5;
  /// Radius of the shift ball; 0 selects the default, the diameter of the
  /// support box, 2r*sqrt(2d).
  double ball_radius = 0.0;

  double radius(int dim) const;
};

enum class ShiftDomain { ball, box };

struct SampleConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 200000;
  ShiftDomain domain = ShiftDomain::ball;
  int grid_n = 8;
};

struct LadderConfig {
  double eps_min = 1e-6;
  double eps_max = 1e-1;
  int steps = 6;
};

/// One rung of the measure ladder.
struct MeasureSample {
  double eps = 0.0;
  /// Estimated measure of {shifts t in the domain : worst-case |P| < eps}.
  double m_hat = 0.0;
  /// Relative standard error of m_hat (binomial); infinite when hits == 0.
  double rel_std_error = 0.0;
  std::uint64_t hits = 0;
  std::size_t n = 0;
  /// Statistically usable: hits > 0 and rel_std_error < 25%.
  bool usable = false;
};

/// Local slope of log m_hat against log eps between two usable rungs.
struct SlopeSample {
  double value = 0.0;
  /// Propagated one-sigma uncertainty of the slope.
  double sigma = 0.0;
  bool usable = false;
  int from_rung = 0;  // index of the larger-eps rung
  int to_rung = 0;    // index of the smaller-eps rung
};

enum class AlphaStatus {
  ok,        // alpha_hat is a finite estimate
  no_decay,  // P is identically zero
  infinite,  // no hits at any rung: |P| bounded below on the domain
  unusable,  // rungs exist but no slope passed the noise gate
};

struct AlphaEstimate {
  AlphaStatus status = AlphaStatus::unusable;
  double alpha_hat = 0.0;
  std::vector<MeasureSample> ladder;
  std::vector<SlopeSample> slopes;
  bool monotone_ok = true;       // m_hat nonincreasing as eps decreases
  bool slopes_increasing = true; // usable slopes nondecreasing as eps decreases
};

/// Geometric ladder of `steps` values from hi down to lo (inclusive).
std::vector<double> geometric_ladder(double lo, double hi, int steps);

/// Volume of the d-ball of radius R.
double ball_volume(int dim, double R);

/// Volume of the shift domain for the geometry (ball or box [-R, R]^d).
double domain_volume(int dim, const SupportGeometry& geom, ShiftDomain domain);

/// Minimum of |P(x, y, t)| over the tensor grid of (2*grid_n + 1) points per
/// occurring x,y variable in [-r, r]; evaluates once if P has no x,y
/// dependence. This is the worst case of the sublevel criterion: the shift t
/// is "bad" as soon as one support point makes |P| small.
double worst_case_abs(const Polynomial& P, std::span<const double> tau,
                      const SupportGeometry& geom, int grid_n);

/// Monte Carlo estimate of the measure of
///   {t in shift domain : worst_case |P| over the support grid < eps}.
/// Deterministic given config.seed; samples are drawn marginally uniform
/// with per-index seeds, so the result is independent of thread schedule.
MeasureSample sublevel_measure(const Polynomial& P, double eps,
                               const SupportGeometry& geom,
                               const SampleConfig& config);

/// Estimates the sublevel exponent alpha from a descending eps ladder.
///
/// All rungs share one sample set (each point is evaluated once and
/// thresholded per rung), so the ladder is exactly monotone. Rungs need
/// hits > 0 and relative standard error < 25% to count. Local slopes of
/// log m_hat vs log eps are formed between consecutive usable rungs and
/// kept when their propagated sigma is at most 0.03; alpha_hat is the
/// minimum of (slope - sigma) over kept slopes — a conservative reading,
/// since the sublevel hypothesis must hold for every small eps and
/// logarithmic corrections must not be over-credited.
AlphaEstimate estimate_alpha(const Polynomial& P, const SupportGeometry& geom,
                             const LadderConfig& ladder,
                             const SampleConfig& config);

}  // namespace oscdecay
