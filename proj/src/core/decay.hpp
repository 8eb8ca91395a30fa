#pragma once

#include <vector>

#include "core/hessian.hpp"
#include "core/polynomial.hpp"
#include "core/sublevel.hpp"

namespace oscdecay {

/// Which part of the theory produced a prediction.
enum class Regime {
  power_decay,       // finite alpha estimate through the exponent formula
  quarter_power_limit,  // |P| bounded below on the domain: alpha = inf, k/4
  no_decay,          // P identically zero
  unusable,          // estimator produced no statistically usable slope
};

/// k*alpha / (4*(alpha + 1/2)); k/4 in the alpha -> infinity limit, 0 at
/// alpha = 0.
double predicted_exponent(int k, double alpha);

/// Exact-rational form of the same formula for symbolic checks.
Rational predicted_exponent_exact(int k, const Rational& alpha);

struct MinorReport {
  MinorSelection selection;
  Polynomial P;
  AlphaEstimate alpha;
  Regime regime = Regime::unusable;
  double exponent = 0.0;

  MinorReport() : P(1) {}
};

struct PhaseAnalysis {
  std::vector<MinorReport> minors;
  /// Index into minors of the best prediction, or -1 when no minor yields
  /// one (then best_regime says why).
  int best_index = -1;
  double best_exponent = 0.0;
  Regime best_regime = Regime::no_decay;
};

/// Runs the full pipeline: mixed Hessian, every minor (k = d down to 1),
/// alpha estimation per minor determinant, exponent per minor. Best is the
/// maximal exponent; ties break toward larger k, then enumeration order.
PhaseAnalysis analyze_phase(const Polynomial& S, const SupportGeometry& geom,
                            const LadderConfig& ladder,
                            const SampleConfig& config);

struct DerivativeWitness {
  int i = 0;
  int j = 0;
  int l = 0;
  double min_abs = 0.0;
};

/// Result of the third-derivative lower-bound check: a witness triple
/// (i,j,l) with |D_{i,j,l}S| >= 1 across the support grid certifies (at grid
/// resolution -- this is a heuristic check, not interval arithmetic) the
/// 1/6 decay rate.
struct DerivativeConditionReport {
  bool found = false;
  std::vector<DerivativeWitness> witnesses;
  double exponent = 0.0;  // 1/6 when found
};

DerivativeConditionReport derivative_condition_check(const Polynomial& S,
                                const SupportGeometry& geom, int grid_n);

}  // namespace oscdecay
