#include "se2geo/orientation_lift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "se2geo/errors.hpp"

namespace se2geo {

ScalarImage::ScalarImage(int width, int height, double spacing, std::vector<double> values,
                         double x0, double y0)
    : width_(width), height_(height), spacing_(spacing), values_(std::move(values)), x0_(x0),
      y0_(y0) {
  if (width < 3 || height < 3) throw std::invalid_argument("image must be at least 3x3");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("image spacing must be positive");
  }
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("image value count does not match width * height");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("image values must be finite");
  }
}

double ScalarImage::range() const {
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return *hi - *lo;
}

std::size_t OrientationField::regular_count() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.regular; }));
}

ScalarImage smooth(const ScalarImage& img, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (sigma == 0.0) return img;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma / img.spacing()));
  if (radius == 0) return img;

  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double d = i * img.spacing();
    const double w = std::exp(-d * d / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = w;
    total += w;
  }
  for (double& w : kernel) w /= total;

  const int w = img.width();
  const int h = img.height();
  std::vector<double> tmp(img.values().size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * img.at(r, std::clamp(c + i, 0, w - 1));
      }
      tmp[img.index(r, c)] = acc;
    }
  }
  std::vector<double> out(tmp.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[static_cast<std::size_t>(i + radius)] * tmp[img.index(std::clamp(r + i, 0, h - 1), c)];
      }
      out[img.index(r, c)] = acc;
    }
  }
  return {w, h, img.spacing(), std::move(out), img.x0(), img.y0()};
}

namespace {

// d/dk of samples f(k) at index k, for k in [0, n)
template <class F>
double derivative(F&& f, int k, int n, double h) {
  // one-sided stencils written in differences so that flat data gives exactly 0
  if (k == 0) return (4.0 * (f(1) - f(0)) - (f(2) - f(0))) / (2.0 * h);
  if (k == n - 1) return (4.0 * (f(n - 1) - f(n - 2)) - (f(n - 1) - f(n - 3))) / (2.0 * h);
  return (f(k + 1) - f(k - 1)) / (2.0 * h);
}

}  // namespace

std::vector<Gradient> gradient(const ScalarImage& img) {
  const int w = img.width();
  const int h = img.height();
  const double sp = img.spacing();
  std::vector<Gradient> out(img.values().size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out[img.index(r, c)] = {
          derivative([&](int k) { return img.at(r, k); }, c, w, sp),
          derivative([&](int k) { return img.at(k, c); }, r, h, sp)};
    }
  }
  return out;
}

double theta_closed_form(double gx, double gy) {
  if (gx == 0.0 && gy == 0.0) throw ZeroGradient("orientation undefined for zero gradient");
  return angle_wrap(std::atan2(-gx, gy));
}

double default_eps_reg(const ScalarImage& img) { return 1e-6 * img.range() / img.spacing(); }

OrientationField lift(const ScalarImage& img, double sigma, double eps_reg) {
  const ScalarImage smoothed = smooth(img, sigma);
  const auto grad = gradient(smoothed);
  OrientationField field{img.width(), img.height(), img.spacing(), img.x0(), img.y0(), {}};
  field.samples.resize(grad.size());
  // gradients at the rounding level of the smoothed values are numerically zero
  double peak = 0.0;
  for (double v : smoothed.values()) peak = std::max(peak, std::abs(v));
  const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * peak / img.spacing();
  for (std::size_t i = 0; i < grad.size(); ++i) {
    auto& s = field.samples[i];
    s.grad_norm = std::hypot(grad[i].gx, grad[i].gy);
    s.regular = s.grad_norm > std::max(eps_reg, noise_floor) && s.grad_norm > 0.0;
    if (s.regular) s.theta = theta_closed_form(grad[i].gx, grad[i].gy);
  }
  return field;
}

std::vector<ConfigPoint> inducers_at(const OrientationField& field,
                                     const std::vector<std::pair<double, double>>& points) {
  std::vector<ConfigPoint> out;
  out.reserve(points.size());
  for (const auto& [x, y] : points) {
    const double fc = (x - field.x0) / field.spacing;
    const double fr = (y - field.y0) / field.spacing;
    const double half = 0.5;
    if (!(fc >= -half && fc <= field.width - half && fr >= -half && fr <= field.height - half)) {
      throw std::out_of_range("point (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") lies outside the image");
    }
    const int col = std::clamp(static_cast<int>(std::lround(fc)), 0, field.width - 1);
    const int row = std::clamp(static_cast<int>(std::lround(fr)), 0, field.height - 1);
    const auto& s = field.at(row, col);
    if (!s.regular) {
      throw IrregularPoint("pixel (" + std::to_string(row) + ", " + std::to_string(col) +
                           ") nearest to (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") is not regular");
    }
    out.emplace_back(x, y, s.theta);
  }
  return out;
}

}  // namespace se2geo
