// Sub-Riemannian Hamiltonian H = (p1^2 + p2^2) / 2 on T*SE(2) and its flow.
//
// Reduced Hamilton equations (frame momenta):
//   x' = cos(theta) p1,  y' = sin(theta) p1,  theta' = p2
//   p1' = p3 p2,         p2' = -p3 p1,        p3' = -p1 p2
//
// With E = p1^2 + p2^2 conserved, the substitution
//   p1 = sqrt(E) sin(gamma/2),  p2 = sqrt(E) cos(gamma/2),  p3 = gamma'/2
// turns the momentum equations into the pendulum gamma'' + E sin(gamma) = 0.

#pragma once

#include <string>
#include <vector>

#include "se2geo/se2_core.hpp"

namespace se2geo {

/// Relative energy drift above which integrate() records a warning in the curve metadata.
inline constexpr double kEnergyDriftWarning = 1e-6;

struct FlowState {
  ConfigPoint q;
  MomentumFrame mf;
  double t{0.0};
};

struct FlowDerivative {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double p1{0.0};
  double p2{0.0};
  double p3{0.0};
};

struct PhaseDerivative {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double p_x{0.0};
  double p_y{0.0};
  double p_theta{0.0};
};

struct CurveSample {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double theta{0.0};  // wrapped to [0, 2pi)
  double p1{0.0};
  double p2{0.0};
  double p3{0.0};

  [[nodiscard]] ConfigPoint config() const noexcept { return {x, y, theta}; }
  [[nodiscard]] MomentumFrame momenta() const noexcept { return {p1, p2, p3}; }

  friend bool operator==(const CurveSample&, const CurveSample&) = default;
};

struct CurveMeta {
  double energy_initial{0.0};
  double dt{0.0};
  std::string integrator{"rk4"};
  std::string warning;  // empty unless the energy drift exceeded kEnergyDriftWarning

  friend bool operator==(const CurveMeta&, const CurveMeta&) = default;
};

/// Uniformly time-sampled solution of the Hamiltonian flow.
struct GeodesicCurve {
  std::vector<CurveSample> samples;
  CurveMeta meta;

  [[nodiscard]] ConfigPoint start() const { return samples.front().config(); }
  [[nodiscard]] ConfigPoint endpoint() const { return samples.back().config(); }
  [[nodiscard]] double duration() const { return samples.back().t - samples.front().t; }
  /// max_i |(p1^2 + p2^2)_i - energy_initial|
  [[nodiscard]] double max_energy_drift() const;

  friend bool operator==(const GeodesicCurve&, const GeodesicCurve&) = default;
};

[[nodiscard]] double hamiltonian(const PhasePoint& p) noexcept;

[[nodiscard]] FlowDerivative hamilton_rhs_reduced(const FlowState& s) noexcept;
[[nodiscard]] PhaseDerivative hamilton_rhs_canonical(const PhasePoint& p) noexcept;

/// Classical fixed-step RK4 on the reduced equations over [start.t, start.t + t_final].
/// The number of steps is ceil(t_final / dt), so the last sample lies within dt of t_final.
/// Throws std::invalid_argument on bad arguments, NonFiniteState on blow-up.
[[nodiscard]] GeodesicCurve integrate(const FlowState& start, double t_final, double dt);

/// Final state of integrate() without storing the samples; bitwise equal to its last sample.
[[nodiscard]] FlowState integrate_endpoint(const FlowState& start, double t_final, double dt);

/// Same RK4 scheme applied to the canonical (x, y, theta, p_x, p_y, p_theta) system.
/// Samples are reported in frame momenta. Kept as a cross-check of the reduced form.
[[nodiscard]] GeodesicCurve integrate_canonical(const PhasePoint& start, double t_final,
                                                double dt);

struct PendulumState {
  double gamma{0.0};  // unwrapped
  double gamma_dot{0.0};
};

/// gamma = 2 atan2(p1, p2), gamma_dot = 2 p3. Throws ZeroEnergy when p1 = p2 = 0.
[[nodiscard]] PendulumState to_pendulum(const MomentumFrame& mf);
[[nodiscard]] MomentumFrame from_pendulum(const PendulumState& ps, double energy) noexcept;

/// gamma_dot^2 / 2 - E cos(gamma), conserved by the pendulum.
[[nodiscard]] double pendulum_energy(const PendulumState& ps, double energy) noexcept;

/// RK4 for gamma'' + E sin(gamma) = 0, returns ceil(t_final/dt) + 1 states.
[[nodiscard]] std::vector<PendulumState> integrate_pendulum(const PendulumState& start,
                                                            double energy, double t_final,
                                                            double dt);

/// Continuous gamma(t) along a curve, unwrapped in steps of 4pi.
[[nodiscard]] std::vector<double> gamma_series(const GeodesicCurve& curve);

}  // namespace se2geo
