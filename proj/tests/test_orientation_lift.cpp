#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "se2geo/errors.hpp"
#include "se2geo/orientation_lift.hpp"

using namespace se2geo;
using doctest::Approx;

namespace {

constexpr double kGridTol = kPi / 3600;

// Dark left half, bright right half, plus uniform noise in [-amplitude, amplitude].
ScalarImage step_edge(int n, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) v.push_back((c >= n / 2 ? 1.0 : 0.0) + amplitude * u(rng));
  }
  return {n, n, 1.0, std::move(v)};
}

void check_oracle_on_field(const ScalarImage& img, double sigma, double eps) {
  const auto smoothed = smooth(img, sigma);
  const auto grads = gradient(smoothed);
  const auto field = lift(img, sigma, eps);
  int regular = 0;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const auto& s = field.at(r, c);
      const auto& g = grads[img.index(r, c)];
      REQUIRE(s.grad_norm == Approx(std::hypot(g.gx, g.gy)));
      REQUIRE(s.regular == (s.grad_norm > eps));
      if (!s.regular) continue;
      ++regular;
      REQUIRE(oracle::circle_dist(s.theta, oracle::brute_force_argmax(g.gx, g.gy)) <= kGridTol);
      REQUIRE(oracle::count_local_maxima(g.gx, g.gy) == 1);
    }
  }
  CHECK(regular > 0);
}

}  // namespace

TEST_CASE("image validation") {
  CHECK_THROWS_AS(ScalarImage(2, 3, 1.0, std::vector<double>(6)), std::invalid_argument);
  CHECK_THROWS_AS(ScalarImage(3, 3, 0.0, std::vector<double>(9)), std::invalid_argument);
  CHECK_THROWS_AS(ScalarImage(3, 3, 1.0, std::vector<double>(8)), std::invalid_argument);
  std::vector<double> bad(9, 0.0);
  bad[4] = NAN;
  CHECK_THROWS_AS(ScalarImage(3, 3, 1.0, bad), std::invalid_argument);
}

TEST_CASE("smooth") {
  const ScalarImage flat(9, 7, 0.5, std::vector<double>(63, 3.25));
  const auto s = smooth(flat, 1.3);
  for (double v : s.values()) REQUIRE(std::abs(v - 3.25) <= 1e-12);

  const auto noisy = step_edge(16, 0.5, 3);
  CHECK(smooth(noisy, 0.0) == noisy);
  CHECK_THROWS_AS((void)smooth(noisy, -1.0), std::invalid_argument);

  std::vector<double> imp(21 * 21, 0.0);
  imp[10 * 21 + 10] = 1.0;
  const auto k = smooth(ScalarImage(21, 21, 1.0, imp), 2.0);
  double sum = 0.0;
  for (double v : k.values()) sum += v;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  for (int r = 0; r < 21; ++r) {
    for (int c = 0; c < 21; ++c) {
      REQUIRE(std::abs(k.at(r, c) - k.at(20 - r, c)) <= 1e-12);
      REQUIRE(std::abs(k.at(r, c) - k.at(r, 20 - c)) <= 1e-12);
      REQUIRE(std::abs(k.at(r, c) - k.at(c, r)) <= 1e-12);
    }
  }
  CHECK(k.at(10, 10) > k.at(10, 11));
}

TEST_CASE("gradient examples") {
  const auto xr = oracle::sample_image(7, 0.5, [](double x, double) { return x; });
  for (const auto& g : gradient(xr)) {
    REQUIRE(std::abs(g.gx - 1.0) <= 1e-12);
    REQUIRE(std::abs(g.gy) <= 1e-12);
  }
  const auto yr = oracle::sample_image(7, 0.5, [](double, double y) { return y; });
  for (const auto& g : gradient(yr)) {
    REQUIRE(std::abs(g.gx) <= 1e-12);
    REQUIRE(std::abs(g.gy - 1.0) <= 1e-12);
  }
  const auto sq = oracle::sample_image(9, 0.25, [](double x, double) { return x * x; });
  const auto gs = gradient(sq);
  for (int r = 0; r < 9; ++r) {
    for (int c = 0; c < 9; ++c) {
      REQUIRE(std::abs(gs[sq.index(r, c)].gx - 2.0 * sq.x_of(c)) <= 1e-12);
    }
  }
}

TEST_CASE("theta closed form") {
  CHECK(theta_closed_form(0, 1) == 0.0);
  CHECK(theta_closed_form(1, 0) == Approx(1.5 * kPi));
  CHECK_THROWS_AS((void)theta_closed_form(0, 0), ZeroGradient);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double gx = u(rng), gy = u(rng);
    const double th = theta_closed_form(gx, gy);
    REQUIRE(th >= 0.0);
    REQUIRE(th < kTwoPi);
    REQUIRE(oracle::circle_dist(th, oracle::brute_force_argmax(gx, gy)) <= kGridTol);
    REQUIRE(oracle::count_local_maxima(gx, gy) == 1);
    // the maximum value is the gradient norm
    REQUIRE(-std::sin(th) * gx + std::cos(th) * gy == Approx(std::hypot(gx, gy)));
  }
}

TEST_CASE("lift examples") {
  const auto ramp = oracle::sample_image(11, 1.0, [](double, double y) { return y; });
  const auto f = lift(ramp, 0.0, default_eps_reg(ramp));
  CHECK(f.regular_count() == 121);
  for (const auto& s : f.samples) REQUIRE(std::abs(std::remainder(s.theta, kTwoPi)) <= 1e-12);

  const ScalarImage flat(5, 5, 1.0, std::vector<double>(25, 0.4));
  CHECK(lift(flat, 0.0, default_eps_reg(flat)).regular_count() == 0);
  CHECK(lift(flat, 1.0, default_eps_reg(flat)).regular_count() == 0);

  const oracle::Blob blob{0.3, -0.2, 4.0};
  const double h = 0.5;
  const auto img = oracle::sample_image(41, h, [&](double x, double y) { return blob.value(x, y); });
  const auto bf = lift(img, 0.0, default_eps_reg(img));
  int checked = 0;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const auto& s = bf.at(r, c);
      const double x = img.x_of(c), y = img.y_of(r);
      if (!s.regular || std::hypot(x - blob.cx, y - blob.cy) < 1e-9) continue;
      const double expected = theta_closed_form(blob.gx(x, y), blob.gy(x, y));
      REQUIRE(oracle::circle_dist(s.theta, expected) <= 2 * h / blob.s);
      ++checked;
    }
  }
  CHECK(checked > 1500);
}

TEST_CASE("closed form agrees with the brute-force argmax on test images") {
  const auto ramp = oracle::sample_image(15, 1.0, [](double x, double y) { return 0.3 * x - y; });
  check_oracle_on_field(ramp, 0.0, default_eps_reg(ramp));

  const oracle::Blob blob{1.0, 0.5, 3.0};
  const auto b = oracle::sample_image(31, 0.5, [&](double x, double y) { return blob.value(x, y); });
  check_oracle_on_field(b, 0.0, default_eps_reg(b));
  check_oracle_on_field(b, 1.0, default_eps_reg(b));

  const auto edge = step_edge(24, 0.0, 0);
  check_oracle_on_field(edge, 1.0, default_eps_reg(edge));
  check_oracle_on_field(step_edge(24, 0.5, 9), 1.5, 1e-3);
}

TEST_CASE("rotation by a quarter turn rotates the orientation") {
  auto f = [](double x, double y) {
    return std::exp(-((x - 1.0) * (x - 1.0) + (y - 0.5) * (y - 0.5)) / 8.0) + 0.05 * x;
  };
  const int n = 25;
  const double h = 0.5;
  const auto a = oracle::sample_image(n, h, f);
  const auto b = oracle::sample_image(n, h, [&](double x, double y) { return f(y, -x); });
  const auto fa = lift(a, 0.7, default_eps_reg(a));
  const auto fb = lift(b, 0.7, default_eps_reg(b));
  int checked = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      // (x, y) in b corresponds to (y, -x) in a
      const auto& sb = fb.at(r, c);
      const auto& sa = fa.at(n - 1 - c, r);
      if (!sa.regular || !sb.regular) continue;
      REQUIRE(oracle::circle_dist(sb.theta, sa.theta + kPi / 2) <= 2 * h / 2.0);
      ++checked;
    }
  }
  CHECK(checked > n * n / 2);
}

TEST_CASE("more smoothing never adds regular pixels on a noisy step edge") {
  const auto img = step_edge(64, 0.5, 2024);
  // threshold between the noise gradients and the smoothed edge peak
  const double eps = 0.2;
  std::size_t prev = img.values().size() + 1;
  for (double sigma : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const std::size_t count = lift(img, sigma, eps).regular_count();
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("inducers_at") {
  const auto ramp = oracle::sample_image(11, 1.0, [](double, double y) { return y; });
  const auto f = lift(ramp, 0.0, default_eps_reg(ramp));
  const auto pts = inducers_at(f, {{1.2, -2.7}, {0.0, 0.0}});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].x() == 1.2);
  CHECK(pts[0].y() == -2.7);
  CHECK(std::abs(std::remainder(pts[0].theta(), kTwoPi)) <= 1e-12);

  const auto edge = step_edge(20, 0.0, 0);
  const auto fe = lift(edge, 1.0, default_eps_reg(edge));
  const auto e2 = inducers_at(fe, {{9.6, 3.0}, {9.6, 15.0}});
  CHECK(e2[0].theta() == Approx(e2[1].theta()));
  CHECK(e2[0].theta() == Approx(1.5 * kPi));

  const oracle::Blob blob{0.0, 0.0, 3.0};
  const auto b = oracle::sample_image(31, 0.5, [&](double x, double y) { return blob.value(x, y); });
  const auto fb = lift(b, 0.0, default_eps_reg(b));
  const auto right = inducers_at(fb, {{2.0, 0.0}});
  CHECK(oracle::circle_dist(right[0].theta(), theta_closed_form(blob.gx(2, 0), blob.gy(2, 0))) <=
        2 * 0.5 / 3.0);
  CHECK(right[0].theta() == Approx(kPi / 2));

  CHECK_THROWS_AS((void)inducers_at(fb, {{100.0, 0.0}}), std::out_of_range);
  const ScalarImage flat(5, 5, 1.0, std::vector<double>(25, 1.0));
  const auto ff = lift(flat, 0.0, default_eps_reg(flat));
  CHECK_THROWS_AS((void)inducers_at(ff, {{2.0, 2.0}}), IrregularPoint);
}
