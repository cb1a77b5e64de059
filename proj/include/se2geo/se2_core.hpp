// SE(2) contact structure: frame fields, contact form and momentum
// conversions for the rear-wheel / orientation-bundle model R^2 x S^1.
//
// Conventions (wheelbase and no-skid speed factor both fixed to 1):
//   X = d/dtheta
//   Y = cos(theta) d/dx + sin(theta) d/dy        (rolling direction)
//   Z = -sin(theta) d/dx + cos(theta) d/dy       (Reeb field, normal to the path)
//   eta = cos(theta) dy - sin(theta) dx,  ker(eta) = span{X, Y},  eta(Z) = 1

#pragma once

#include <array>
#include <numbers>

namespace se2geo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wrap an angle to [0, 2pi).
[[nodiscard]] double angle_wrap(double a) noexcept;

/// Geodesic distance on the unit circle, in [0, pi].
[[nodiscard]] double angle_dist(double a, double b) noexcept;

/// Signed shortest rotation from `from` to `to`, in [-pi, pi).
[[nodiscard]] double angle_diff(double to, double from) noexcept;

/// Components along (d/dx, d/dy, d/dtheta).
using CoordVector = std::array<double, 3>;

/// A point (x, y, theta) of the total space; theta is kept in [0, 2pi).
class ConfigPoint {
public:
  ConfigPoint() = default;
  ConfigPoint(double x, double y, double theta) noexcept
      : x_(x), y_(y), theta_(angle_wrap(theta)) {}

  [[nodiscard]] double x() const noexcept { return x_; }
  [[nodiscard]] double y() const noexcept { return y_; }
  [[nodiscard]] double theta() const noexcept { return theta_; }

  friend bool operator==(const ConfigPoint&, const ConfigPoint&) = default;

private:
  double x_{0.0};
  double y_{0.0};
  double theta_{0.0};
};

/// Coefficients of a tangent vector in the left-invariant frame {X, Y, Z}.
struct FrameVector {
  double a_x{0.0};
  double a_y{0.0};
  double a_z{0.0};

  [[nodiscard]] CoordVector to_coords(double theta) const noexcept;
  [[nodiscard]] static FrameVector from_coords(double theta, const CoordVector& v) noexcept;
};

struct Frame {
  CoordVector X;
  CoordVector Y;
  CoordVector Z;
};

[[nodiscard]] Frame frame_at(const ConfigPoint& q) noexcept;

/// eta_q(v) = cos(theta) v_y - sin(theta) v_x.
[[nodiscard]] double contact_form_eval(const ConfigPoint& q, const CoordVector& v) noexcept;

/// Canonical cotangent coordinates: covector p_x dx + p_y dy + p_theta dtheta at q.
struct PhasePoint {
  ConfigPoint q;
  double p_x{0.0};
  double p_y{0.0};
  double p_theta{0.0};
};

/// Momenta along the frame: p1 = <p, Y>, p2 = <p, X>, p3 = <p, Z>.
struct MomentumFrame {
  double p1{0.0};
  double p2{0.0};
  double p3{0.0};

  /// p1^2 + p2^2, twice the Hamiltonian.
  [[nodiscard]] double energy() const noexcept { return p1 * p1 + p2 * p2; }

  friend bool operator==(const MomentumFrame&, const MomentumFrame&) = default;
};

[[nodiscard]] MomentumFrame to_momentum_frame(const PhasePoint& p) noexcept;
[[nodiscard]] PhasePoint from_momentum_frame(const ConfigPoint& q, const MomentumFrame& mf) noexcept;

/// Pair a covector (p_x, p_y, p_theta) with a coordinate vector.
[[nodiscard]] double pair(const PhasePoint& p, const CoordVector& v) noexcept;

/// Left action of the rigid motion (translation (tx, ty), rotation phi) on q.
[[nodiscard]] ConfigPoint act(double tx, double ty, double phi, const ConfigPoint& q) noexcept;

}  // namespace se2geo
