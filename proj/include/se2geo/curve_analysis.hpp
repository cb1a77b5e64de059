// Differential checks on sampled geodesics: planar curvature by two routes, the energy
// functional in its two forms, horizontality residuals and the rear-wheel phase factor.

#pragma once

#include <vector>

#include "se2geo/hamiltonian_flow.hpp"

namespace se2geo {

/// Samples with planar speed |sigma'| <= kCuspThreshold * sqrt(E) are treated as cusps.
inline constexpr double kCuspThreshold = 1e-8;

struct CurvatureProfile {
  std::vector<double> k;     // +inf at cusps
  std::vector<bool> cusp;
};

/// |sigma' x sigma''| / |sigma'|^3 from finite differences of the sampled (x, y): central in
/// the interior, second-order one-sided at the two ends. Requires at least 5 samples.
[[nodiscard]] CurvatureProfile curvature_numeric(const GeodesicCurve& curve);

/// |cot(gamma / 2)| from the sampled momenta.
[[nodiscard]] CurvatureProfile curvature_formula(const GeodesicCurve& curve);

struct EnergyFunctional {
  double exact{0.0};       // E * T
  double quadrature{0.0};  // trapezoid of E sin^2(gamma/2) (1 + k^2)
  double difference{0.0};
};

[[nodiscard]] EnergyFunctional energy_functional(const GeodesicCurve& curve);

struct PhaseFactorSample {
  double sin_half_gamma{0.0};
  double c1{0.0};  // coefficient of X1 = cos(theta) d/dx + sin(theta) d/dy
  double c2{0.0};  // coefficient of X2 = d/dtheta
  double reconstruction_error{0.0};
  bool degenerate{false};  // sin(gamma/2) = 0: no planar motion
};

/// Decomposes (x', y', theta') = sqrt(E) sin(gamma/2) (X1 + k X2) at every sample, with the
/// signed curvature k = cot(gamma/2), and reports how well the decomposition reproduces the
/// velocity given by the Hamilton equations.
[[nodiscard]] std::vector<PhaseFactorSample> phase_factor_report(const GeodesicCurve& curve);

/// |eta(v)| per sample for the finite-difference velocity v (same stencils as the curvature).
[[nodiscard]] std::vector<double> horizontality_residuals(const GeodesicCurve& curve);

struct CurveReport {
  std::vector<double> k_sigma;
  std::vector<double> k_formula;
  std::vector<bool> cusp;
  std::vector<double> eta_residual;
  std::vector<PhaseFactorSample> phase;

  EnergyFunctional energy_functional;
  double max_eta_residual{0.0};
  double max_curvature_mismatch{0.0};
  double energy_drift{0.0};
  double max_phase_reconstruction_error{0.0};
  /// int (k^2 + 1) ds over non-cusp samples; informational only.
  double elastica_integral{0.0};
  int cusp_count{0};
};

[[nodiscard]] CurveReport analyze_curve(const GeodesicCurve& curve);

}  // namespace se2geo
