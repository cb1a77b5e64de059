// Orientation map of a grayscale image: each regular point (x, y) is lifted to the angle
// theta maximizing Z(theta) I = -sin(theta) dI/dx + cos(theta) dI/dy, i.e. the direction in
// which Z is aligned with the gradient.

#pragma once

#include <utility>
#include <vector>

#include "se2geo/se2_core.hpp"

namespace se2geo {

/// Row-major samples on a regular grid: pixel (row, col) sits at
/// (x0 + col * spacing, y0 + row * spacing).
class ScalarImage {
public:
  ScalarImage(int width, int height, double spacing, std::vector<double> values, double x0 = 0.0,
              double y0 = 0.0);

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] double x0() const noexcept { return x0_; }
  [[nodiscard]] double y0() const noexcept { return y0_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  [[nodiscard]] double at(int row, int col) const { return values_[index(row, col)]; }
  [[nodiscard]] double x_of(int col) const noexcept { return x0_ + col * spacing_; }
  [[nodiscard]] double y_of(int row) const noexcept { return y0_ + row * spacing_; }
  [[nodiscard]] std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  /// (max - min) of the values.
  [[nodiscard]] double range() const;

  friend bool operator==(const ScalarImage&, const ScalarImage&) = default;

private:
  int width_;
  int height_;
  double spacing_;
  std::vector<double> values_;
  double x0_;
  double y0_;
};

struct Gradient {
  double gx{0.0};
  double gy{0.0};
};

struct OrientationSample {
  double theta{0.0};  // meaningful only when regular
  double grad_norm{0.0};
  bool regular{false};
};

struct OrientationField {
  int width{0};
  int height{0};
  double spacing{1.0};
  double x0{0.0};
  double y0{0.0};
  std::vector<OrientationSample> samples;  // row-major

  [[nodiscard]] const OrientationSample& at(int row, int col) const {
    return samples[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(col)];
  }
  [[nodiscard]] std::size_t regular_count() const;
};

/// Separable Gaussian blur, radius ceil(3 sigma / spacing), edge replication.
[[nodiscard]] ScalarImage smooth(const ScalarImage& img, double sigma);

/// Central differences inside, second-order one-sided differences on the border.
[[nodiscard]] std::vector<Gradient> gradient(const ScalarImage& img);

/// argmax over theta of -sin(theta) gx + cos(theta) gy, in [0, 2pi). Throws ZeroGradient.
[[nodiscard]] double theta_closed_form(double gx, double gy);

/// 1e-6 * (max I - min I) / spacing
[[nodiscard]] double default_eps_reg(const ScalarImage& img);

/// smooth -> gradient -> theta per pixel; pixels with grad_norm <= eps_reg are not regular.
[[nodiscard]] OrientationField lift(const ScalarImage& img, double sigma, double eps_reg);

/// (x, y, theta of the nearest pixel) for each point. Throws IrregularPoint for a non-regular
/// pixel and std::out_of_range for points outside the image rectangle.
[[nodiscard]] std::vector<ConfigPoint> inducers_at(const OrientationField& field,
                                                   const std::vector<std::pair<double, double>>& points);

}  // namespace se2geo
