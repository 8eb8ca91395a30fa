#include "core/trilinear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace oscdecay {

namespace {

constexpr double kRescaledLambdaCeiling = 1e5;
constexpr double kUsableErrFraction = 0.10;
// Direct (non-rescaled) quadrature refuses above these:
double direct_lambda_ceiling(int dim) { return dim == 1 ? 1e3 : 2e2; }

constexpr int kPrimes[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

double bump_profile(double t, double r) {
  double s = t / r;
  double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

/// Max |partial S| over a coarse tensor grid of the quadrature domain;
/// used to scale node counts to the oscillation.
double gradient_bound(const Polynomial& S, double lo, double hi) {
  const int dim = S.dim();
  std::vector<CompiledPoly> partials;
  for (int i = 1; i <= dim; ++i) {
    partials.emplace_back(S.differentiate({VarRole::x, i}));
    partials.emplace_back(S.differentiate({VarRole::y, i}));
  }
  constexpr int kPerAxis = 7;
  std::vector<double> axis(kPerAxis);
  for (int i = 0; i < kPerAxis; ++i) {
    axis[i] = lo + (hi - lo) * i / (kPerAxis - 1);
  }
  std::array<double, 18> point{};
  std::vector<int> odo(2 * dim, 0);
  double best = 0.0;
  while (true) {
    for (int v = 0; v < 2 * dim; ++v) point[v] = axis[odo[v]];
    for (const CompiledPoly& p : partials) {
      best = std::max(best, std::fabs(p.evaluate(point.data())));
    }
    std::size_t pos = 0;
    while (pos < odo.size() && ++odo[pos] == kPerAxis) {
      odo[pos] = 0;
      ++pos;
    }
    if (pos == odo.size()) break;
  }
  return best;
}

/// 16-point Gauss-Legendre nodes/weights on [-1, 1].
struct Gauss16 {
  std::array<double, 16> nodes;
  std::array<double, 16> weights;

  Gauss16() {
    for (int k = 0; k < 16; ++k) {
      // Newton iteration on P_16 from the Chebyshev initial guess.
      double x = std::cos(std::numbers::pi * (k + 0.75) / 16.5);
      for (int it = 0; it < 60; ++it) {
        double p0 = 1.0, p1 = x;
        for (int n = 2; n <= 16; ++n) {
          double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
          p0 = p1;
          p1 = p2;
        }
        double deriv = 16 * (x * p1 - p0) / (x * x - 1.0);
        double step = p1 / deriv;
        x -= step;
        if (std::fabs(step) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= 16; ++n) {
        double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      double deriv = 16 * (x * p1 - p0) / (x * x - 1.0);
      nodes[k] = x;
      weights[k] = 2.0 / ((1.0 - x * x) * deriv * deriv);
    }
  }
};

const Gauss16& gauss16() {
  static const Gauss16 g;
  return g;
}

/// Composite 16-node Gauss-Legendre axis over [lo, hi].
void composite_axis(double lo, double hi, int panels, std::vector<double>& xs,
                    std::vector<double>& ws) {
  const Gauss16& g = gauss16();
  xs.clear();
  ws.clear();
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h;
    double mid = a + h / 2.0;
    for (int k = 0; k < 16; ++k) {
      xs.push_back(mid + g.nodes[k] * h / 2.0);
      ws.push_back(g.weights[k] * h / 2.0);
    }
  }
}

struct GaussianQuad {
  std::complex<double> value;
  std::size_t points;
};

constexpr double kGaussianHalfRange = 2.5;

GaussianQuad gaussian_tensor_quad(const CompiledPoly& phase,
                                  const CutoffSpec& cutoff, int dim,
                                  double lambda, int panels) {
  const double L = kGaussianHalfRange;
  std::vector<double> xs, ws;
  composite_axis(-L, L, panels, xs, ws);
  const std::size_t n = xs.size();
  double total = 1.0;
  for (int v = 0; v < 2 * dim; ++v) total *= static_cast<double>(n);
  if (total > 2e9) {
    throw Error(ErrorCode::ceiling,
                "gaussian quadrature grid exceeds the evaluation budget at "
                "this lambda; lower lambda or use a box family");
  }
  // Flattened odometer over the 2*dim axes, parallel over the first axis.
  std::vector<std::complex<double>> partial(n);
  run_parallel(n, [&](std::size_t i0) {
    std::array<double, 18> point{};
    std::array<double, 12> xy{};
    std::vector<std::size_t> odo(2 * dim, 0);
    odo[0] = i0;
    std::complex<double> acc{0.0, 0.0};
    // Sweep the remaining axes with the first fixed at i0.
    while (true) {
      double w = 1.0;
      double expo = 0.0;
      for (int v = 0; v < 2 * dim; ++v) {
        double c = xs[odo[v]];
        point[v] = c;
        xy[v] = c;
        w *= ws[odo[v]];
        expo += c * c;
      }
      double amp = w * std::exp(-std::numbers::pi * expo) *
                   cutoff_value(cutoff, std::span<const double>(xy.data(),
                                                                2 * dim));
      // f(x) g(y) = exp(-pi(|x|^2+|y|^2)); h(x+y) adds the cross term.
      if (amp != 0.0) {
        double cross = 0.0;
        for (int v = 0; v < dim; ++v) {
          double s = point[v] + point[dim + v];
          cross += s * s;
        }
        amp *= std::exp(-std::numbers::pi * cross);
        double theta = lambda * phase.evaluate(point.data());
        acc += amp * std::complex<double>(std::cos(theta), std::sin(theta));
      }
      std::size_t pos = 1;
      while (pos < odo.size() && ++odo[pos] == n) {
        odo[pos] = 0;
        ++pos;
      }
      if (pos >= odo.size()) break;
    }
    partial[i0] = acc;
  });
  std::complex<double> sum{0.0, 0.0};
  for (const auto& c : partial) sum += c;  // fixed order
  return {sum, static_cast<std::size_t>(total)};
}

double gaussian_l2_norm(int dim) {
  // ||exp(-pi|x|^2)||_2 over the truncated range, by quadrature.
  std::vector<double> xs, ws;
  composite_axis(-kGaussianHalfRange, kGaussianHalfRange, 8, xs, ws);
  double one_axis = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    one_axis += ws[i] * std::exp(-2.0 * std::numbers::pi * xs[i] * xs[i]);
  }
  return std::pow(one_axis, dim / 2.0);
}

IntegralValue finish(double lambda, std::complex<double> value, double err,
                     const FamilyInstance& family, std::size_t points) {
  IntegralValue out;
  out.lambda = lambda;
  out.value = value;
  out.err = err;
  out.norm_product = family.norm_product();
  out.ratio = std::abs(value) / out.norm_product;
  out.points = points;
  return out;
}

}  // namespace

double cutoff_value(const CutoffSpec& cutoff, std::span<const double> xy) {
  if (cutoff.kind == CutoffKind::one) return 1.0;
  double v = 1.0;
  for (double t : xy) {
    v *= bump_profile(t, cutoff.half_width);
    if (v == 0.0) return 0.0;
  }
  return v;
}

bool Box::contains(std::span<const double> v) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (v[i] < lo[i] || v[i] > hi[i]) return false;
  }
  return true;
}

double Box::volume() const {
  double vol = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) vol *= hi[i] - lo[i];
  return vol;
}

FamilyInstance instantiate_family(const TestFamily& family, int dim,
                                  double lambda) {
  FamilyInstance inst;
  inst.kind = family.kind;
  inst.lambda = lambda;
  auto make_box = [&](const std::vector<double>& widths,
                      const std::vector<double>& scales) {
    inst.box.lo.assign(dim, 0.0);
    inst.box.hi.resize(dim);
    for (int i = 0; i < dim; ++i) {
      inst.box.hi[i] = widths[i] * std::pow(lambda, -scales[i]);
    }
    double vol = inst.box.volume();
    inst.norm_f = inst.norm_g = inst.norm_h = std::sqrt(vol);
  };
  switch (family.kind) {
    case FamilyKind::scaled_box: {
      if (!(lambda > 0.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "scaled box family needs lambda > 0");
      }
      make_box(std::vector<double>(dim, 1.0),
               std::vector<double>(dim, 1.0 / 3.0));
      break;
    }
    case FamilyKind::aniso_box: {
      if (dim != 2) {
        throw Error(ErrorCode::invalid_argument,
                    "anisotropic box family is defined for dimension 2");
      }
      if (!(lambda > 0.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "anisotropic box family needs lambda > 0");
      }
      make_box({1.0, 0.1}, {0.0, 0.5});
      break;
    }
    case FamilyKind::custom_box: {
      if (family.widths.size() != static_cast<std::size_t>(dim) ||
          family.scales.size() != static_cast<std::size_t>(dim)) {
        throw Error(ErrorCode::invalid_argument,
                    "custom box family needs one width and one scale "
                    "exponent per coordinate");
      }
      for (double w : family.widths) {
        if (!(w > 0.0)) {
          throw Error(ErrorCode::invalid_argument,
                      "custom box widths must be positive");
        }
      }
      make_box(family.widths, family.scales);
      break;
    }
    case FamilyKind::gaussian: {
      double n = gaussian_l2_norm(dim);
      inst.norm_f = inst.norm_g = inst.norm_h = n;
      break;
    }
  }
  return inst;
}

IntegralValue evaluate_trilinear(const Polynomial& S, const CutoffSpec& cutoff,
                                 const FamilyInstance& family,
                                 const QuadConfig& quad) {
  const int dim = S.dim();
  if (family.kind == FamilyKind::gaussian) {
    if (dim > 2) {
      throw Error(ErrorCode::invalid_argument,
                  "gaussian family quadrature supports dimensions 1 and 2");
    }
    if (family.lambda > direct_lambda_ceiling(dim)) {
      throw Error(ErrorCode::ceiling,
                  "lambda exceeds the direct quadrature ceiling (" +
                      std::to_string(direct_lambda_ceiling(dim)) +
                      " for this dimension)");
    }
    CompiledPoly phase(S);
    double grad = gradient_bound(S, -kGaussianHalfRange, kGaussianHalfRange);
    // Cap the phase swing per 16-node panel at 8 radians so the panel rule
    // stays deep in its spectral-accuracy regime.
    double radians =
        std::fabs(family.lambda) * grad * 2.0 * kGaussianHalfRange;
    int panels = std::max(4, static_cast<int>(std::ceil(radians / 8.0)));
    GaussianQuad fine = gaussian_tensor_quad(phase, cutoff, dim,
                                             family.lambda, panels);
    GaussianQuad coarse = gaussian_tensor_quad(
        phase, cutoff, dim, family.lambda, std::max(2, panels / 2));
    return finish(family.lambda, fine.value,
                  std::abs(fine.value - coarse.value), family,
                  fine.points + coarse.points);
  }

  // Box families: integrate in unit-box coordinates so shrinking supports
  // stay resolvable; the lambda dependence lives in the Jacobian and the
  // evaluated phase.
  if (family.lambda > kRescaledLambdaCeiling) {
    throw Error(ErrorCode::ceiling,
                "lambda exceeds the rescaled quadrature ceiling 1e5");
  }
  if (quad.replicates < 2) {
    throw Error(ErrorCode::invalid_argument,
                "replicate error estimation needs at least 2 replicates");
  }
  const std::size_t per_replicate =
      std::max<std::size_t>(1, quad.points / quad.replicates);
  std::vector<double> side(dim);
  for (int i = 0; i < dim; ++i) side[i] = family.box.hi[i] - family.box.lo[i];
  double weight = 1.0;
  for (int i = 0; i < dim; ++i) weight *= side[i] * side[i];
  CompiledPoly phase(S);

  std::vector<std::complex<double>> reps(quad.replicates);
  run_parallel(static_cast<std::size_t>(quad.replicates), [&](std::size_t r) {
    SplitMix64 rng(seed_mix(quad.seed, r));
    std::array<double, 12> shift{};
    for (int v = 0; v < 2 * dim; ++v) shift[v] = rng.next_unit();
    std::array<double, 18> point{};
    std::array<double, 12> xy{};
    std::vector<double> sum(dim);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 1; i <= per_replicate; ++i) {
      for (int v = 0; v < 2 * dim; ++v) {
        double u = radical_inverse(i, kPrimes[v]) + shift[v];
        u -= std::floor(u);
        int coord = v < dim ? v : v - dim;
        double val = family.box.lo[coord] + side[coord] * u;
        point[v] = val;
        xy[v] = val;
      }
      for (int c = 0; c < dim; ++c) sum[c] = point[c] + point[dim + c];
      if (!family.box.contains(sum)) continue;
      double amp =
          cutoff_value(cutoff, std::span<const double>(xy.data(), 2 * dim));
      if (amp == 0.0) continue;
      double theta = family.lambda * phase.evaluate(point.data());
      acc += amp * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    reps[r] = acc * (weight / static_cast<double>(per_replicate));
  });

  std::complex<double> mean{0.0, 0.0};
  for (const auto& v : reps) mean += v;
  mean /= static_cast<double>(quad.replicates);
  double var = 0.0;
  for (const auto& v : reps) var += std::norm(v - mean);
  double err = std::sqrt(var / (quad.replicates * (quad.replicates - 1.0)));
  return finish(family.lambda, mean, err, family,
                per_replicate * quad.replicates);
}

void fit_power_law(std::span<const double> lambdas,
                   std::span<const double> ratios, double& slope,
                   double& stderr_out, double& intercept) {
  const std::size_t m = lambdas.size();
  if (m < 2 || ratios.size() != m) {
    throw Error(ErrorCode::invalid_argument,
                "power-law fit needs at least two (lambda, ratio) pairs");
  }
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(lambdas[i] > 0.0) || !(ratios[i] > 0.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "power-law fit needs positive lambdas and ratios");
    }
    xs[i] = std::log(lambdas[i]);
    ys[i] = std::log(ratios[i]);
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::invalid_argument,
                "power-law fit needs distinct lambdas");
  }
  slope = sxy / sxx;
  intercept = my - slope * mx;
  if (m > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = ys[i] - (intercept + slope * xs[i]);
      ss += r * r;
    }
    stderr_out = std::sqrt(ss / (m - 2) / sxx);
  } else {
    stderr_out = 0.0;
  }
}

DecayFit run_ladder(const Polynomial& S, const CutoffSpec& cutoff,
                    const TestFamily& family, const LambdaLadder& ladder,
                    const QuadConfig& quad) {
  if (ladder.steps < 6) {
    throw Error(ErrorCode::invalid_argument,
                "decay ladder needs at least 6 rungs");
  }
  std::vector<double> lambdas;
  {
    // geometric_ladder is descending; ladders here run upward in lambda.
    double lo = ladder.lambda_min, hi = ladder.lambda_max;
    if (!(lo > 0.0) || !(hi > lo)) {
      throw Error(ErrorCode::invalid_argument,
                  "decay ladder needs 0 < lambda_min < lambda_max");
    }
    for (int i = 0; i < ladder.steps; ++i) {
      lambdas.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) *
                                                    i / (ladder.steps - 1)));
    }
    lambdas.front() = lo;
    lambdas.back() = hi;
  }
  DecayFit fit;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    QuadConfig rung_quad = quad;
    rung_quad.seed = seed_mix(quad.seed, 1000 + i);
    FamilyInstance inst = instantiate_family(family, S.dim(), lambdas[i]);
    fit.ladder.push_back(evaluate_trilinear(S, cutoff, inst, rung_quad));
  }
  std::vector<double> xs, ys;
  for (const IntegralValue& v : fit.ladder) {
    double mag = std::abs(v.value);
    if (mag > 0.0 && v.ratio > 0.0 && v.err < kUsableErrFraction * mag) {
      xs.push_back(v.lambda);
      ys.push_back(v.ratio);
    }
  }
  fit.usable_rungs = static_cast<int>(xs.size());
  if (fit.usable_rungs < 4) {
    throw Error(ErrorCode::invalid_argument,
                "fewer than 4 rungs had usable quadrature error; cannot fit "
                "a decay slope");
  }
  fit_power_law(xs, ys, fit.slope, fit.slope_stderr, fit.intercept);
  return fit;
}

double trivial_ratio_bound(const FamilyInstance& family) {
  if (family.kind == FamilyKind::gaussian) {
    // ||f||_1 = 1 for the unit gaussian; the cutoff sup is 1.
    return 1.0 / family.norm_f;
  }
  return std::sqrt(family.box.volume());
}

OracleValue brute_force_oracle(const Polynomial& S, const CutoffSpec& cutoff,
                               const FamilyInstance& family, int grid_n) {
  const int dim = S.dim();
  if (dim > 2) {
    throw Error(ErrorCode::invalid_argument,
                "brute-force reference supports dimensions 1 and 2");
  }
  if (family.kind == FamilyKind::gaussian) {
    throw Error(ErrorCode::invalid_argument,
                "brute-force reference handles box families only");
  }
  if (family.lambda > direct_lambda_ceiling(dim)) {
    throw Error(ErrorCode::ceiling,
                "lambda exceeds the direct quadrature ceiling (" +
                    std::to_string(direct_lambda_ceiling(dim)) +
                    " for this dimension)");
  }
  if (grid_n < 8) {
    throw Error(ErrorCode::invalid_argument, "oracle grid must be >= 8");
  }
  CompiledPoly phase(S);
  // Resolution guard: the phase must move little across one cell.
  double max_side = 0.0;
  for (int i = 0; i < dim; ++i) {
    max_side = std::max(max_side, family.box.hi[i] - family.box.lo[i]);
  }
  double lo_all = 0.0, hi_all = 0.0;
  for (int i = 0; i < dim; ++i) {
    lo_all = std::min(lo_all, family.box.lo[i]);
    hi_all = std::max(hi_all, family.box.hi[i]);
  }
  double grad = gradient_bound(S, lo_all, hi_all);
  if (family.lambda * grad * (max_side / grid_n) > 0.5) {
    throw Error(ErrorCode::ceiling,
                "midpoint grid cannot resolve the oscillation at this "
                "lambda; increase the grid or lower lambda");
  }

  auto evaluate = [&](int n) -> std::complex<double> {
    std::vector<std::vector<double>> axis(dim);
    std::vector<double> cell(dim);
    for (int c = 0; c < dim; ++c) {
      double lo = family.box.lo[c], hi = family.box.hi[c];
      cell[c] = (hi - lo) / n;
      axis[c].resize(n);
      for (int i = 0; i < n; ++i) axis[c][i] = lo + (i + 0.5) * cell[c];
    }
    double cell_weight = 1.0;
    for (int c = 0; c < dim; ++c) cell_weight *= cell[c] * cell[c];
    // Parallel over the first x axis, fixed-order reduction.
    std::vector<std::complex<double>> partial(n);
    run_parallel(static_cast<std::size_t>(n), [&](std::size_t i0) {
      std::array<double, 18> point{};
      std::array<double, 12> xy{};
      std::vector<double> sum(dim);
      std::vector<int> odo(2 * dim, 0);
      odo[0] = static_cast<int>(i0);
      std::complex<double> acc{0.0, 0.0};
      while (true) {
        for (int v = 0; v < 2 * dim; ++v) {
          int coord = v < dim ? v : v - dim;
          double val = axis[coord][odo[v]];
          point[v] = val;
          xy[v] = val;
        }
        bool inside = true;
        for (int c = 0; c < dim && inside; ++c) {
          sum[c] = point[c] + point[dim + c];
          inside = sum[c] >= family.box.lo[c] && sum[c] <= family.box.hi[c];
        }
        if (inside) {
          double amp = cutoff_value(
              cutoff, std::span<const double>(xy.data(), 2 * dim));
          if (amp != 0.0) {
            double theta = family.lambda * phase.evaluate(point.data());
            acc += amp * std::complex<double>(std::cos(theta),
                                              std::sin(theta));
          }
        }
        std::size_t pos = 1;
        while (pos < odo.size() && ++odo[pos] == n) {
          odo[pos] = 0;
          ++pos;
        }
        if (pos >= odo.size()) break;
      }
      partial[i0] = acc;
    });
    std::complex<double> total{0.0, 0.0};
    for (const auto& c : partial) total += c;
    return total * cell_weight;
  };

  OracleValue out;
  std::complex<double> coarse = evaluate(grid_n / 2);
  out.value = evaluate(grid_n);
  out.err = std::abs(out.value - coarse);
  return out;
}

}  // namespace oscdecay
