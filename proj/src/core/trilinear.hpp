#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "core/polynomial.hpp"

namespace oscdecay {

enum class CutoffKind { bump, one };

/// Smooth cutoff: product over all 2d coordinates of the classical bump
/// profile exp(1 - 1/(1 - (t/r)^2)) on |t| < r (value 1 at the origin),
/// or the constant 1.
struct CutoffSpec {
  CutoffKind kind = CutoffKind::bump;
  double half_width = 0.5;
};

double cutoff_value(const CutoffSpec& cutoff, std::span<const double> xy);

enum class FamilyKind { scaled_box, aniso_box, gaussian, custom_box };

/// Parameterized test-function family; each lambda yields concrete
/// f = g = h and their L2 norms.
///  - scaled_box: indicator of [0, lambda^{-1/3}]^d
///  - aniso_box (d = 2): indicator of [0,1] x [0, lambda^{-1/2}/10]
///  - gaussian: exp(-pi |x|^2)
///  - custom_box: indicator of the box with side i equal to
///    [0, width_i * lambda^{-scale_i}]
struct TestFamily {
  FamilyKind kind = FamilyKind::scaled_box;
  std::vector<double> widths;  // custom_box only
  std::vector<double> scales;  // custom_box only
};

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(std::span<const double> v) const;
  double volume() const;
};

/// Concrete family member at one lambda.
struct FamilyInstance {
  FamilyKind kind = FamilyKind::scaled_box;
  double lambda = 1.0;
  Box box;  // box kinds only
  double norm_f = 1.0;
  double norm_g = 1.0;
  double norm_h = 1.0;

  double norm_product() const { return norm_f * norm_g * norm_h; }
};

FamilyInstance instantiate_family(const TestFamily& family, int dim,
                                  double lambda);

struct QuadConfig {
  std::uint64_t seed = 42;
  /// Total sample budget across replicates (box families).
  std::size_t points = std::size_t{1} << 20;
  int replicates = 8;
};

struct IntegralValue {
  double lambda = 0.0;
  std::complex<double> value{0.0, 0.0};
  /// Standard error from replicate spread (box families) or a quadrature
  /// refinement difference (gaussian).
  double err = 0.0;
  double norm_product = 1.0;
  double ratio = 0.0;
  std::size_t points = 0;
};

/// Evaluates the trilinear oscillatory integral
///   integral of e^{i lambda S(x,y)} f(x) g(y) h(x+y) cutoff(x,y) dx dy
/// for the family member at lambda.
///
/// Box families are rescaled to the unit box (the shrinking supports carry
/// the lambda dependence), then integrated by replicated, randomly shifted
/// Halton sampling; the gaussian family uses tensor Gauss-Legendre with a
/// node count that grows with the phase oscillation. Lambda ceilings guard
/// both paths and raise ErrorCode::ceiling beyond them.
IntegralValue evaluate_trilinear(const Polynomial& S, const CutoffSpec& cutoff,
                                 const FamilyInstance& family,
                                 const QuadConfig& quad);

struct DecayFit {
  std::vector<IntegralValue> ladder;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  int usable_rungs = 0;
};

struct LambdaLadder {
  double lambda_min = 1e2;
  double lambda_max = 1e5;
  int steps = 8;
};

/// Least-squares fit of log(ratio) against log(lambda).
/// Requires at least 2 points; stderr needs at least 3.
void fit_power_law(std::span<const double> lambdas,
                   std::span<const double> ratios, double& slope,
                   double& stderr_out, double& intercept);

/// Evaluates the family across a geometric lambda ladder and fits the decay
/// slope on the rungs whose quadrature error is below 10% of |value|.
/// Requires >= 6 rungs and >= 4 usable ones.
DecayFit run_ladder(const Polynomial& S, const CutoffSpec& cutoff,
                    const TestFamily& family, const LambdaLadder& ladder,
                    const QuadConfig& quad);

/// Upper bound on the normalized ratio implied by Young's inequality:
/// ||cutoff||_inf times the smallest L1/L2 ratio among f, g, h.
double trivial_ratio_bound(const FamilyInstance& family);

struct OracleValue {
  std::complex<double> value{0.0, 0.0};
  double err = 0.0;
};

/// Independent reference: midpoint tensor rule over the family box (d <= 2),
/// with a refinement-difference error estimate. Refuses (ErrorCode::ceiling)
/// when the grid cannot resolve the oscillation at this lambda.
OracleValue brute_force_oracle(const Polynomial& S, const CutoffSpec& cutoff,
                               const FamilyInstance& family, int grid_n);

}  // namespace oscdecay
