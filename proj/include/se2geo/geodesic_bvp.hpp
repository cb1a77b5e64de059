// Two-point boundary value problem for SE(2) geodesics by multi-start shooting.
//
// The horizon is fixed to T = 1 (energy and time are redundant under the scaling
// p -> lambda p, t -> t / lambda), and the unknowns are (sqrt(E), gamma0, gamma_dot0).

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "se2geo/hamiltonian_flow.hpp"
#include "se2geo/se2_core.hpp"

namespace se2geo {

inline constexpr double kShootingHorizon = 1.0;

/// Initial momenta in pendulum form. gamma0 lives in [0, 4pi): the momenta depend on
/// gamma0 / 2, so this is the range on which the map to (p1, p2) is one-to-one.
struct ShootingParams {
  double sqrt_energy{0.0};
  double gamma0{0.0};
  double gamma_dot0{0.0};

  [[nodiscard]] MomentumFrame momenta() const noexcept;
  [[nodiscard]] double energy() const noexcept { return sqrt_energy * sqrt_energy; }

  /// Representative with sqrt_energy >= 0 and gamma0 in [0, 4pi) describing the same momenta.
  [[nodiscard]] ShootingParams canonical() const noexcept;

  /// Inverse of momenta() for p1^2 + p2^2 > 0.
  [[nodiscard]] static ShootingParams from_momenta(const MomentumFrame& mf);

  friend bool operator==(const ShootingParams&, const ShootingParams&) = default;
};

struct BvpOptions {
  double tol{1e-6};
  double w_theta{1.0};
  int n_starts{24};
  int max_iter{200};
  std::uint64_t seed{0};
  double dt{1e-3};
};

struct BvpSolution {
  ShootingParams params;
  GeodesicCurve curve;
  double residual{0.0};
  double energy{0.0};
  bool converged{false};
};

/// No start reached the tolerance. Carries the best candidates (converged = false).
class NoConvergence : public std::runtime_error {
public:
  NoConvergence(const std::string& what, std::vector<BvpSolution> candidates)
      : std::runtime_error(what), candidates_(std::move(candidates)) {}

  [[nodiscard]] const std::vector<BvpSolution>& candidates() const noexcept { return candidates_; }

private:
  std::vector<BvpSolution> candidates_;
};

/// sqrt(dx^2 + dy^2 + w_theta^2 angle_dist^2)
[[nodiscard]] double endpoint_residual(const ConfigPoint& actual, const ConfigPoint& target,
                                       double w_theta);

/// Integrates over [0, 1] from the momenta described by params.
[[nodiscard]] GeodesicCurve shoot(const ConfigPoint& start, const ShootingParams& params,
                                  double dt = 1e-3);

/// Converged solutions, deduplicated and sorted by (energy, residual); the front is the best.
/// Throws NoConvergence when no start converges.
[[nodiscard]] std::vector<BvpSolution> solve_bvp(const ConfigPoint& start,
                                                 const ConfigPoint& target,
                                                 const BvpOptions& options = {});

/// One curve per gamma0, all with energy E from the same start.
[[nodiscard]] std::vector<GeodesicCurve> geodesic_fan(const ConfigPoint& start, double energy,
                                                      const std::vector<double>& gamma0_list,
                                                      double gamma_dot0, double t_final,
                                                      double dt = 1e-3);

}  // namespace se2geo
