#include "se2geo/se2_core.hpp"

#include <cmath>

namespace se2geo {

double angle_wrap(double a) noexcept {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r + 0.0;  // no negative zero
}

double angle_diff(double to, double from) noexcept {
  double d = angle_wrap(to - from);
  if (d >= kPi) d -= kTwoPi;
  return d;
}

double angle_dist(double a, double b) noexcept {
  const double d = angle_wrap(a - b);
  return d > kPi ? kTwoPi - d : d;
}

CoordVector FrameVector::to_coords(double theta) const noexcept {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {a_y * c - a_z * s, a_y * s + a_z * c, a_x};
}

FrameVector FrameVector::from_coords(double theta, const CoordVector& v) noexcept {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {v[2], c * v[0] + s * v[1], -s * v[0] + c * v[1]};
}

Frame frame_at(const ConfigPoint& q) noexcept {
  const double c = std::cos(q.theta());
  const double s = std::sin(q.theta());
  return {{0.0, 0.0, 1.0}, {c, s, 0.0}, {-s, c, 0.0}};
}

double contact_form_eval(const ConfigPoint& q, const CoordVector& v) noexcept {
  return std::cos(q.theta()) * v[1] - std::sin(q.theta()) * v[0];
}

MomentumFrame to_momentum_frame(const PhasePoint& p) noexcept {
  const double c = std::cos(p.q.theta());
  const double s = std::sin(p.q.theta());
  return {c * p.p_x + s * p.p_y, p.p_theta, -s * p.p_x + c * p.p_y};
}

PhasePoint from_momentum_frame(const ConfigPoint& q, const MomentumFrame& mf) noexcept {
  const double c = std::cos(q.theta());
  const double s = std::sin(q.theta());
  return {q, c * mf.p1 - s * mf.p3, s * mf.p1 + c * mf.p3, mf.p2};
}

double pair(const PhasePoint& p, const CoordVector& v) noexcept {
  return p.p_x * v[0] + p.p_y * v[1] + p.p_theta * v[2];
}

ConfigPoint act(double tx, double ty, double phi, const ConfigPoint& q) noexcept {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {tx + c * q.x() - s * q.y(), ty + s * q.x() + c * q.y(), q.theta() + phi};
}

}  // namespace se2geo
