#include "se2geo/geodesic_bvp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "se2geo/errors.hpp"

namespace se2geo {

namespace {

constexpr double kFourPi = 2.0 * kTwoPi;
constexpr double kJacobianStep = 1e-6;
constexpr double kConditionLimit = 1e8;
constexpr double kDuplicateTol = 1e-4;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec3 = Eigen::Vector3d;

double wrap_4pi(double a) {
  double r = std::fmod(a, kFourPi);
  if (r < 0.0) r += kFourPi;
  if (r >= kFourPi) r = 0.0;
  return r;
}

Vec3 to_vec(const ShootingParams& p) { return {p.sqrt_energy, p.gamma0, p.gamma_dot0}; }
ShootingParams from_vec(const Vec3& v) { return ShootingParams{v[0], v[1], v[2]}.canonical(); }

/// Evaluates the shooting map; +inf residual outside the range where RK4 at this dt is
/// still accurate (rate * dt <= 0.3) or on blow-up.
class ShootingProblem {
public:
  ShootingProblem(const ConfigPoint& start, const ConfigPoint& target, const BvpOptions& opt)
      : start_(start), target_(target), opt_(opt) {}

  /// Returns false when the point is out of range.
  bool mismatch(const ShootingParams& p, Vec3& out) const {
    const MomentumFrame mf = p.momenta();
    const double rate = std::max({std::abs(mf.p1), std::abs(mf.p2), std::abs(mf.p3)});
    if (!std::isfinite(rate) || rate * rate * opt_.dt > 0.3) return false;
    FlowState end;
    try {
      end = integrate_endpoint({start_, mf, 0.0}, kShootingHorizon, opt_.dt);
    } catch (const NonFiniteState&) {
      return false;
    }
    out = {end.q.x() - target_.x(), end.q.y() - target_.y(),
           opt_.w_theta * angle_diff(end.q.theta(), target_.theta())};
    return true;
  }

  double residual(const ShootingParams& p) const {
    Vec3 f;
    return mismatch(p, f) ? f.norm() : kInf;
  }

private:
  ConfigPoint start_;
  ConfigPoint target_;
  BvpOptions opt_;
};

struct Trial {
  ShootingParams params;
  double residual{kInf};
};

/// Nelder-Mead on the squared residual, starting from p. Returns iterations spent.
int nelder_mead(const ShootingProblem& prob, ShootingParams& p, double& res, int budget,
                double stop) {
  std::array<Vec3, 4> x;
  std::array<double, 4> f;
  x[0] = to_vec(p);
  const Vec3 scale{0.1 * std::max(p.sqrt_energy, 0.1), 0.3, 0.3 * std::max(p.sqrt_energy, 0.1)};
  for (int i = 0; i < 3; ++i) {
    x[i + 1] = x[0];
    x[i + 1][i] += scale[i];
  }
  auto eval = [&](const Vec3& v) { return prob.residual(from_vec(v)); };
  for (int i = 0; i < 4; ++i) f[i] = eval(x[i]);

  int it = 0;
  for (; it < budget; ++it) {
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    std::array<Vec3, 4> xs;
    std::array<double, 4> fs;
    for (int i = 0; i < 4; ++i) {
      xs[i] = x[idx[i]];
      fs[i] = f[idx[i]];
    }
    x = xs;
    f = fs;
    if (f[0] <= stop) break;

    const Vec3 centroid = (x[0] + x[1] + x[2]) / 3.0;
    const Vec3 xr = centroid + (centroid - x[3]);
    const double fr = eval(xr);
    if (fr < f[0]) {
      const Vec3 xe = centroid + 2.0 * (centroid - x[3]);
      const double fe = eval(xe);
      if (fe < fr) {
        x[3] = xe;
        f[3] = fe;
      } else {
        x[3] = xr;
        f[3] = fr;
      }
    } else if (fr < f[2]) {
      x[3] = xr;
      f[3] = fr;
    } else {
      const Vec3 xc = centroid + 0.5 * (x[3] - centroid);
      const double fc = eval(xc);
      if (fc < f[3]) {
        x[3] = xc;
        f[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          x[i] = x[0] + 0.5 * (x[i] - x[0]);
          f[i] = eval(x[i]);
        }
      }
    }
  }
  const auto best = std::min_element(f.begin(), f.end()) - f.begin();
  if (f[best] < res) {
    p = from_vec(x[best]);
    res = f[best];
  }
  return std::max(it, 1);
}

/// Levenberg-Marquardt with forward-difference Jacobian; switches to Nelder-Mead while the
/// Jacobian is near-singular.
Trial refine(const ShootingProblem& prob, const ShootingParams& initial, const BvpOptions& opt) {
  const double stop = 1e-3 * opt.tol;
  ShootingParams p = initial.canonical();
  Vec3 f;
  if (!prob.mismatch(p, f)) return {p, kInf};
  double res = f.norm();
  double lambda = 1e-3;

  int iter = 0;
  while (iter < opt.max_iter && res > stop) {
    ++iter;
    Eigen::Matrix3d jac;
    bool jac_ok = true;
    const Vec3 base = to_vec(p);
    for (int j = 0; j < 3 && jac_ok; ++j) {
      Vec3 shifted = base;
      shifted[j] += kJacobianStep;
      Vec3 fj;
      jac_ok = prob.mismatch(from_vec(shifted), fj);
      // angle component may wrap between the two evaluations
      if (jac_ok) {
        Vec3 diff = fj - f;
        diff[2] = opt.w_theta * angle_diff(fj[2] / opt.w_theta, f[2] / opt.w_theta);
        jac.col(j) = diff / kJacobianStep;
      }
    }

    double cond = kInf;
    if (jac_ok) {
      const Eigen::JacobiSVD<Eigen::Matrix3d> svd(jac);
      const Vec3 sv = svd.singularValues();
      if (sv[2] > 0.0) cond = sv[0] / sv[2];
    }
    if (!(cond <= kConditionLimit)) {
      const int budget = std::min(40, opt.max_iter - iter + 1);
      iter += nelder_mead(prob, p, res, budget, stop) - 1;
      if (!prob.mismatch(p, f)) break;
      res = f.norm();
      continue;
    }

    const Eigen::Matrix3d normal = jac.transpose() * jac;
    const Vec3 grad = jac.transpose() * f;
    const double diag_floor = 1e-12 * normal.diagonal().maxCoeff();
    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::Matrix3d damped = normal;
      for (int k = 0; k < 3; ++k) damped(k, k) += lambda * std::max(normal(k, k), diag_floor);
      const Vec3 step = damped.ldlt().solve(-grad);
      const ShootingParams candidate = from_vec(base + step);
      Vec3 fc;
      if (prob.mismatch(candidate, fc) && fc.norm() < res) {
        p = candidate;
        f = fc;
        res = fc.norm();
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;
  }
  return {p, res};
}

bool same_params(const ShootingParams& a, const ShootingParams& b) {
  const double dg = std::abs(a.gamma0 - b.gamma0);
  return std::abs(a.sqrt_energy - b.sqrt_energy) < kDuplicateTol &&
         std::min(dg, kFourPi - dg) < kDuplicateTol &&
         std::abs(a.gamma_dot0 - b.gamma_dot0) < kDuplicateTol;
}

std::vector<ShootingParams> initial_guesses(const ConfigPoint& start, const ConfigPoint& target,
                                            const BvpOptions& opt) {
  const double planar = std::hypot(target.x() - start.x(), target.y() - start.y());
  const double s0 = std::max(planar + angle_dist(start.theta(), target.theta()), 0.1);
  const int n = std::max(opt.n_starts, 1);
  const int n_grid = (n + 1) / 2;

  std::vector<ShootingParams> guesses;
  guesses.reserve(static_cast<std::size_t>(n));
  constexpr std::array<double, 3> kRates{0.0, -2.0, 2.0};
  for (int k = 0; k < n_grid; ++k) {
    const double gamma0 = (k + 0.5) * kFourPi / n_grid;
    guesses.push_back({s0, gamma0, kRates[static_cast<std::size_t>(k % 3)] * s0});
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = n_grid; k < n; ++k) {
    const double s = s0 * (0.5 + 1.5 * unit(rng));
    const double gamma0 = kFourPi * unit(rng);
    const double rate = (4.0 * unit(rng) - 2.0) * s0;
    guesses.push_back({s, gamma0, rate});
  }
  return guesses;
}

std::vector<Trial> run_trials(const ShootingProblem& prob, const std::vector<ShootingParams>& guesses,
                              const BvpOptions& opt) {
  std::vector<Trial> trials(guesses.size());
  const unsigned workers =
      std::clamp(std::thread::hardware_concurrency(), 1u, static_cast<unsigned>(guesses.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < guesses.size(); i = next++) {
      trials[i] = refine(prob, guesses[i], opt);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return trials;
}

}  // namespace

MomentumFrame ShootingParams::momenta() const noexcept {
  return {sqrt_energy * std::sin(0.5 * gamma0), sqrt_energy * std::cos(0.5 * gamma0),
          0.5 * gamma_dot0};
}

ShootingParams ShootingParams::canonical() const noexcept {
  // (-s, g) and (s, g + 2pi) give the same momenta
  if (sqrt_energy < 0.0) return {-sqrt_energy, wrap_4pi(gamma0 + kTwoPi), gamma_dot0};
  return {sqrt_energy, wrap_4pi(gamma0), gamma_dot0};
}

ShootingParams ShootingParams::from_momenta(const MomentumFrame& mf) {
  const PendulumState ps = to_pendulum(mf);
  return ShootingParams{std::sqrt(mf.energy()), ps.gamma, ps.gamma_dot}.canonical();
}

double endpoint_residual(const ConfigPoint& actual, const ConfigPoint& target, double w_theta) {
  const double dx = actual.x() - target.x();
  const double dy = actual.y() - target.y();
  const double dth = w_theta * angle_dist(actual.theta(), target.theta());
  return std::sqrt(dx * dx + dy * dy + dth * dth);
}

GeodesicCurve shoot(const ConfigPoint& start, const ShootingParams& params, double dt) {
  return integrate({start, params.momenta(), 0.0}, kShootingHorizon, dt);
}

std::vector<BvpSolution> solve_bvp(const ConfigPoint& start, const ConfigPoint& target,
                                   const BvpOptions& opt) {
  if (!(opt.tol > 0.0) || !(opt.w_theta > 0.0) || opt.n_starts < 1 || opt.max_iter < 1 ||
      !(opt.dt > 0.0) || opt.dt > kShootingHorizon) {
    throw std::invalid_argument("solve_bvp: options must be positive");
  }

  if (endpoint_residual(start, target, opt.w_theta) <= opt.tol) {
    BvpSolution trivial;
    trivial.curve = shoot(start, ShootingParams{}, opt.dt);
    trivial.residual = endpoint_residual(trivial.curve.endpoint(), target, opt.w_theta);
    trivial.energy = 0.0;
    trivial.converged = true;
    return {trivial};
  }

  const ShootingProblem prob(start, target, opt);
  std::vector<Trial> trials = run_trials(prob, initial_guesses(start, target, opt), opt);

  auto by_energy = [](const Trial& a, const Trial& b) {
    if (a.params.energy() != b.params.energy()) return a.params.energy() < b.params.energy();
    return a.residual < b.residual;
  };
  std::vector<Trial> converged;
  for (const auto& t : trials) {
    if (t.residual <= opt.tol) converged.push_back(t);
  }
  std::stable_sort(converged.begin(), converged.end(), by_energy);

  auto make_solution = [&](const Trial& t, bool ok) {
    BvpSolution s;
    s.params = t.params;
    s.curve = shoot(start, t.params, opt.dt);
    s.residual = endpoint_residual(s.curve.endpoint(), target, opt.w_theta);
    s.energy = t.params.energy();
    s.converged = ok;
    return s;
  };

  std::vector<BvpSolution> out;
  for (const auto& t : converged) {
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const BvpSolution& s) { return same_params(s.params, t.params); });
    if (!dup) out.push_back(make_solution(t, true));
  }
  if (!out.empty()) return out;

  std::stable_sort(trials.begin(), trials.end(),
                   [](const Trial& a, const Trial& b) { return a.residual < b.residual; });
  std::vector<BvpSolution> candidates;
  for (const auto& t : trials) {
    if (candidates.size() >= 3 || !std::isfinite(t.residual)) break;
    candidates.push_back(make_solution(t, false));
  }
  throw NoConvergence("no shooting start reached the tolerance", std::move(candidates));
}

std::vector<GeodesicCurve> geodesic_fan(const ConfigPoint& start, double energy,
                                        const std::vector<double>& gamma0_list, double gamma_dot0,
                                        double t_final, double dt) {
  if (!(energy > 0.0)) throw std::invalid_argument("geodesic_fan: energy must be positive");
  if (gamma0_list.empty()) throw std::invalid_argument("geodesic_fan: empty gamma0 list");
  std::vector<GeodesicCurve> fan;
  fan.reserve(gamma0_list.size());
  for (double g0 : gamma0_list) {
    const MomentumFrame mf = from_pendulum({g0, gamma_dot0}, energy);
    fan.push_back(integrate({start, mf, 0.0}, t_final, dt));
  }
  return fan;
}

}  // namespace se2geo
