#include "core/decay.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace oscdecay {

double predicted_exponent(int k, double alpha) {
  if (k < 1) {
    throw Error(ErrorCode::invalid_argument, "minor size must be positive");
  }
  if (std::isnan(alpha) || alpha < 0.0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be nonnegative");
  }
  if (std::isinf(alpha)) return k / 4.0;
  return k * alpha / (4.0 * alpha + 2.0);
}

Rational predicted_exponent_exact(int k, const Rational& alpha) {
  if (k < 1) {
    throw Error(ErrorCode::invalid_argument, "minor size must be positive");
  }
  if (alpha < 0) {
    throw Error(ErrorCode::invalid_argument, "alpha must be nonnegative");
  }
  if (alpha == 0) return Rational(0);
  return Rational(k) * alpha / (Rational(4) * alpha + Rational(2));
}

PhaseAnalysis analyze_phase(const Polynomial& S, const SupportGeometry& geom,
                            const LadderConfig& ladder,
                            const SampleConfig& config) {
  const int d = S.dim();
  PolyMatrix m = mixed_hessian(S);
  PhaseAnalysis out;
  bool any_unusable = false;
  for (const MinorSelection& sel : enumerate_minors(d, 1, d)) {
    MinorReport rep;
    rep.selection = sel;
    rep.P = minor_determinant(m, sel);
    rep.alpha = estimate_alpha(rep.P, geom, ladder, config);
    switch (rep.alpha.status) {
      case AlphaStatus::ok:
        rep.regime = Regime::power_decay;
        rep.exponent = predicted_exponent(sel.k(), rep.alpha.alpha_hat);
        break;
      case AlphaStatus::infinite:
        rep.regime = Regime::quarter_power_limit;
        rep.exponent = sel.k() / 4.0;
        break;
      case AlphaStatus::no_decay:
        rep.regime = Regime::no_decay;
        break;
      case AlphaStatus::unusable:
        rep.regime = Regime::unusable;
        any_unusable = true;
        break;
    }
    out.minors.push_back(std::move(rep));
  }
  for (std::size_t i = 0; i < out.minors.size(); ++i) {
    const MinorReport& rep = out.minors[i];
    if (rep.regime != Regime::power_decay &&
        rep.regime != Regime::quarter_power_limit) {
      continue;
    }
    // Enumeration is k-descending, so on an exponent tie the earlier entry
    // (larger k, then lexicographic) wins.
    if (out.best_index < 0 || rep.exponent > out.best_exponent) {
      out.best_index = static_cast<int>(i);
      out.best_exponent = rep.exponent;
      out.best_regime = rep.regime;
    }
  }
  if (out.best_index < 0) {
    out.best_regime = any_unusable ? Regime::unusable : Regime::no_decay;
  }
  return out;
}

DerivativeConditionReport derivative_condition_check(const Polynomial& S,
                                const SupportGeometry& geom, int grid_n) {
  const int d = S.dim();
  DerivativeConditionReport out;
  std::vector<double> no_shift(d, 0.0);
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) {
      for (int l = 1; l <= d; ++l) {
        Polynomial D = d_operator(S, i, j, l);
        if (D.is_zero()) continue;
        double min_abs = worst_case_abs(D, no_shift, geom, grid_n);
        if (min_abs >= 1.0) {
          out.witnesses.push_back({i, j, l, min_abs});
        }
      }
    }
  }
  out.found = !out.witnesses.empty();
  out.exponent = out.found ? 1.0 / 6.0 : 0.0;
  return out;
}

}  // namespace oscdecay
