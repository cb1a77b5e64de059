#include "se2geo/curve_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace se2geo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Derivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};

// Second-order accurate first and second derivatives of uniformly sampled values.
Derivatives differentiate(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d.d1[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d.d2[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
  }
  d.d1[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d.d2[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
  const std::size_t m = n - 1;
  d.d1[m] = (3.0 * f[m] - 4.0 * f[m - 1] + f[m - 2]) / (2.0 * h);
  d.d2[m] = (2.0 * f[m] - 5.0 * f[m - 1] + 4.0 * f[m - 2] - f[m - 3]) / (h * h);
  return d;
}

void require_samples(const GeodesicCurve& curve) {
  if (curve.samples.size() < 5) {
    throw std::invalid_argument("curve analysis needs at least 5 samples");
  }
  if (!(curve.meta.dt > 0.0)) throw std::invalid_argument("curve dt must be positive");
}

struct PlanarDerivatives {
  Derivatives x;
  Derivatives y;
};

PlanarDerivatives planar_derivatives(const GeodesicCurve& curve) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(curve.samples.size());
  ys.reserve(curve.samples.size());
  for (const auto& s : curve.samples) {
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  return {differentiate(xs, curve.meta.dt), differentiate(ys, curve.meta.dt)};
}

double cusp_speed(const GeodesicCurve& curve) {
  return kCuspThreshold * std::sqrt(curve.meta.energy_initial);
}

}  // namespace

CurvatureProfile curvature_numeric(const GeodesicCurve& curve) {
  require_samples(curve);
  const auto d = planar_derivatives(curve);
  const double threshold = cusp_speed(curve);
  const std::size_t n = curve.samples.size();
  CurvatureProfile out{std::vector<double>(n), std::vector<bool>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double vx = d.x.d1[i];
    const double vy = d.y.d1[i];
    const double speed = std::hypot(vx, vy);
    if (speed <= threshold) {
      out.k[i] = kInf;
      out.cusp[i] = true;
      continue;
    }
    out.k[i] = std::abs(vx * d.y.d2[i] - vy * d.x.d2[i]) / (speed * speed * speed);
  }
  return out;
}

CurvatureProfile curvature_formula(const GeodesicCurve& curve) {
  const double threshold = cusp_speed(curve);
  const std::size_t n = curve.samples.size();
  CurvatureProfile out{std::vector<double>(n), std::vector<bool>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = curve.samples[i];
    if (std::abs(s.p1) <= threshold || s.momenta().energy() == 0.0) {
      out.k[i] = kInf;
      out.cusp[i] = true;
      continue;
    }
    const double half = 0.5 * to_pendulum(s.momenta()).gamma;
    out.k[i] = std::abs(std::cos(half) / std::sin(half));
  }
  return out;
}

EnergyFunctional energy_functional(const GeodesicCurve& curve) {
  EnergyFunctional ef;
  ef.exact = curve.meta.energy_initial * curve.duration();
  const auto k = curvature_formula(curve);
  const double h = curve.meta.dt;
  const std::size_t n = curve.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = curve.samples[i];
    const double e = s.momenta().energy();
    double integrand = 0.0;
    if (e > 0.0) {
      const double half = 0.5 * to_pendulum(s.momenta()).gamma;
      const double sin2 = std::sin(half) * std::sin(half);
      // sin^2 (1 + cot^2) = sin^2 + cos^2 where the cotangent blows up
      integrand = k.cusp[i] ? e * (sin2 + std::cos(half) * std::cos(half))
                            : e * sin2 * (1.0 + k.k[i] * k.k[i]);
    }
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    ef.quadrature += w * h * integrand;
  }
  ef.difference = std::abs(ef.exact - ef.quadrature);
  return ef;
}

std::vector<PhaseFactorSample> phase_factor_report(const GeodesicCurve& curve) {
  std::vector<PhaseFactorSample> out;
  out.reserve(curve.samples.size());
  for (const auto& s : curve.samples) {
    PhaseFactorSample ps;
    const double e = s.momenta().energy();
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    if (e == 0.0) {
      ps.degenerate = true;
      out.push_back(ps);
      continue;
    }
    const double root = std::sqrt(e);
    const double half = 0.5 * to_pendulum(s.momenta()).gamma;
    ps.sin_half_gamma = std::sin(half);
    ps.degenerate = std::abs(ps.sin_half_gamma) <= kCuspThreshold;
    ps.c1 = root * ps.sin_half_gamma;
    ps.c2 = ps.degenerate ? root * std::cos(half)
                          : root * ps.sin_half_gamma * (std::cos(half) / ps.sin_half_gamma);
    const FlowDerivative v = hamilton_rhs_reduced({s.config(), s.momenta(), s.t});
    ps.reconstruction_error = std::max({std::abs(ps.c1 * c - v.x), std::abs(ps.c1 * sn - v.y),
                                        std::abs(ps.c2 - v.theta)});
    out.push_back(ps);
  }
  return out;
}

std::vector<double> horizontality_residuals(const GeodesicCurve& curve) {
  require_samples(curve);
  const auto d = planar_derivatives(curve);
  std::vector<double> out(curve.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::abs(contact_form_eval(curve.samples[i].config(), {d.x.d1[i], d.y.d1[i], 0.0}));
  }
  return out;
}

CurveReport analyze_curve(const GeodesicCurve& curve) {
  require_samples(curve);
  CurveReport r;
  const auto numeric = curvature_numeric(curve);
  const auto formula = curvature_formula(curve);
  r.k_sigma = numeric.k;
  r.k_formula = formula.k;
  r.cusp.resize(curve.samples.size());
  r.eta_residual = horizontality_residuals(curve);
  r.phase = phase_factor_report(curve);
  r.energy_functional = energy_functional(curve);
  r.energy_drift = curve.max_energy_drift();

  const auto d = planar_derivatives(curve);
  const double h = curve.meta.dt;
  const std::size_t n = curve.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    r.cusp[i] = numeric.cusp[i] || formula.cusp[i];
    r.max_eta_residual = std::max(r.max_eta_residual, r.eta_residual[i]);
    r.max_phase_reconstruction_error =
        std::max(r.max_phase_reconstruction_error, r.phase[i].reconstruction_error);
    if (r.cusp[i]) {
      ++r.cusp_count;
      continue;
    }
    r.max_curvature_mismatch =
        std::max(r.max_curvature_mismatch, std::abs(numeric.k[i] - formula.k[i]));
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    const double speed = std::hypot(d.x.d1[i], d.y.d1[i]);
    r.elastica_integral += w * h * (formula.k[i] * formula.k[i] + 1.0) * speed;
  }
  return r;
}

}  // namespace se2geo
