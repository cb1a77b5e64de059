#include "se2geo/hamiltonian_flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "se2geo/errors.hpp"

namespace se2geo {

namespace {

using State = std::array<double, 6>;

template <class Rhs>
State rk4_step(const State& y, double h, Rhs&& f) {
  auto axpy = [](const State& a, double s, const State& b) {
    State r;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const State k1 = f(y);
  const State k2 = f(axpy(y, 0.5 * h, k1));
  const State k3 = f(axpy(y, 0.5 * h, k2));
  const State k4 = f(axpy(y, h, k3));
  State out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

long step_count(double t_final, double dt) {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw std::invalid_argument("t_final must be positive and finite");
  }
  if (!(dt > 0.0) || dt > t_final) {
    throw std::invalid_argument("dt must satisfy 0 < dt <= t_final");
  }
  const double ratio = t_final / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * ratio) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

State reduced_rhs(const State& s) {
  // theta stays unwrapped inside the integrator
  const double c = std::cos(s[2]);
  const double sn = std::sin(s[2]);
  return {c * s[3], sn * s[3], s[4], s[5] * s[4], -s[5] * s[3], -s[3] * s[4]};
}

State canonical_rhs(const State& s) {
  const double c = std::cos(s[2]);
  const double sn = std::sin(s[2]);
  const double p1 = c * s[3] + sn * s[4];
  const double p3 = -sn * s[3] + c * s[4];
  return {c * p1, sn * p1, s[5], 0.0, 0.0, -p1 * p3};
}

void finish_meta(GeodesicCurve& curve) {
  const double drift = curve.max_energy_drift();
  if (drift > kEnergyDriftWarning * std::max(1.0, curve.meta.energy_initial)) {
    curve.meta.warning = "energy drift " + std::to_string(drift) + " exceeds tolerance";
  }
}

}  // namespace

double GeodesicCurve::max_energy_drift() const {
  double drift = 0.0;
  for (const auto& s : samples) {
    drift = std::max(drift, std::abs(s.p1 * s.p1 + s.p2 * s.p2 - meta.energy_initial));
  }
  return drift;
}

double hamiltonian(const PhasePoint& p) noexcept {
  const MomentumFrame mf = to_momentum_frame(p);
  return 0.5 * (mf.p1 * mf.p1 + mf.p2 * mf.p2);
}

FlowDerivative hamilton_rhs_reduced(const FlowState& s) noexcept {
  const double th = s.q.theta();
  const auto& m = s.mf;
  return {std::cos(th) * m.p1, std::sin(th) * m.p1, m.p2,
          m.p3 * m.p2,         -m.p3 * m.p1,        -m.p1 * m.p2};
}

PhaseDerivative hamilton_rhs_canonical(const PhasePoint& p) noexcept {
  const MomentumFrame mf = to_momentum_frame(p);
  const double th = p.q.theta();
  return {std::cos(th) * mf.p1, std::sin(th) * mf.p1, p.p_theta, 0.0, 0.0, -mf.p1 * mf.p3};
}

GeodesicCurve integrate(const FlowState& start, double t_final, double dt) {
  const long n = step_count(t_final, dt);
  GeodesicCurve curve;
  curve.meta.energy_initial = start.mf.energy();
  curve.meta.dt = dt;
  curve.meta.integrator = "rk4";
  curve.samples.reserve(static_cast<std::size_t>(n) + 1);

  State y{start.q.x(), start.q.y(), start.q.theta(), start.mf.p1, start.mf.p2, start.mf.p3};
  if (!all_finite(y)) throw NonFiniteState("non-finite initial state");
  for (long i = 0;; ++i) {
    curve.samples.push_back(
        {start.t + static_cast<double>(i) * dt, y[0], y[1], angle_wrap(y[2]), y[3], y[4], y[5]});
    if (i == n) break;
    y = rk4_step(y, dt, reduced_rhs);
    if (!all_finite(y)) {
      throw NonFiniteState("state became non-finite at step " + std::to_string(i + 1) +
                           "; reduce dt");
    }
  }
  finish_meta(curve);
  return curve;
}

FlowState integrate_endpoint(const FlowState& start, double t_final, double dt) {
  const long n = step_count(t_final, dt);
  State y{start.q.x(), start.q.y(), start.q.theta(), start.mf.p1, start.mf.p2, start.mf.p3};
  if (!all_finite(y)) throw NonFiniteState("non-finite initial state");
  for (long i = 0; i < n; ++i) {
    y = rk4_step(y, dt, reduced_rhs);
    if (!all_finite(y)) {
      throw NonFiniteState("state became non-finite at step " + std::to_string(i + 1) +
                           "; reduce dt");
    }
  }
  return {ConfigPoint{y[0], y[1], y[2]}, {y[3], y[4], y[5]},
          start.t + static_cast<double>(n) * dt};
}

GeodesicCurve integrate_canonical(const PhasePoint& start, double t_final, double dt) {
  const long n = step_count(t_final, dt);
  GeodesicCurve curve;
  curve.meta.energy_initial = 2.0 * hamiltonian(start);
  curve.meta.dt = dt;
  curve.meta.integrator = "rk4-canonical";
  curve.samples.reserve(static_cast<std::size_t>(n) + 1);

  State y{start.q.x(), start.q.y(), start.q.theta(), start.p_x, start.p_y, start.p_theta};
  if (!all_finite(y)) throw NonFiniteState("non-finite initial state");
  for (long i = 0;; ++i) {
    const PhasePoint pp{ConfigPoint{y[0], y[1], y[2]}, y[3], y[4], y[5]};
    const MomentumFrame mf = to_momentum_frame(pp);
    curve.samples.push_back({static_cast<double>(i) * dt, y[0], y[1], angle_wrap(y[2]), mf.p1,
                             mf.p2, mf.p3});
    if (i == n) break;
    y = rk4_step(y, dt, canonical_rhs);
    if (!all_finite(y)) {
      throw NonFiniteState("state became non-finite at step " + std::to_string(i + 1));
    }
  }
  finish_meta(curve);
  return curve;
}

PendulumState to_pendulum(const MomentumFrame& mf) {
  if (mf.p1 == 0.0 && mf.p2 == 0.0) {
    throw ZeroEnergy("pendulum angle undefined for p1 = p2 = 0");
  }
  return {2.0 * std::atan2(mf.p1, mf.p2), 2.0 * mf.p3};
}

MomentumFrame from_pendulum(const PendulumState& ps, double energy) noexcept {
  const double root = std::sqrt(energy);
  return {root * std::sin(0.5 * ps.gamma), root * std::cos(0.5 * ps.gamma), 0.5 * ps.gamma_dot};
}

double pendulum_energy(const PendulumState& ps, double energy) noexcept {
  return 0.5 * ps.gamma_dot * ps.gamma_dot - energy * std::cos(ps.gamma);
}

std::vector<PendulumState> integrate_pendulum(const PendulumState& start, double energy,
                                              double t_final, double dt) {
  const long n = step_count(t_final, dt);
  std::vector<PendulumState> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  PendulumState s = start;
  out.push_back(s);
  auto f = [energy](const PendulumState& p) {
    return PendulumState{p.gamma_dot, -energy * std::sin(p.gamma)};
  };
  for (long i = 0; i < n; ++i) {
    const PendulumState k1 = f(s);
    const PendulumState k2 = f({s.gamma + 0.5 * dt * k1.gamma, s.gamma_dot + 0.5 * dt * k1.gamma_dot});
    const PendulumState k3 = f({s.gamma + 0.5 * dt * k2.gamma, s.gamma_dot + 0.5 * dt * k2.gamma_dot});
    const PendulumState k4 = f({s.gamma + dt * k3.gamma, s.gamma_dot + dt * k3.gamma_dot});
    s.gamma += dt / 6.0 * (k1.gamma + 2.0 * k2.gamma + 2.0 * k3.gamma + k4.gamma);
    s.gamma_dot += dt / 6.0 * (k1.gamma_dot + 2.0 * k2.gamma_dot + 2.0 * k3.gamma_dot + k4.gamma_dot);
    if (!std::isfinite(s.gamma) || !std::isfinite(s.gamma_dot)) {
      throw NonFiniteState("pendulum state became non-finite");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> gamma_series(const GeodesicCurve& curve) {
  constexpr double kFourPi = 2.0 * kTwoPi;
  std::vector<double> gamma;
  gamma.reserve(curve.samples.size());
  for (const auto& s : curve.samples) {
    double g = to_pendulum(s.momenta()).gamma;
    if (!gamma.empty()) {
      g += kFourPi * std::round((gamma.back() - g) / kFourPi);
    }
    gamma.push_back(g);
  }
  return gamma;
}

}  // namespace se2geo
