// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "se2geo/cli.hpp"
#include "se2geo/curve_analysis.hpp"
#include "se2geo/geodesic_bvp.hpp"
#include "se2geo/io.hpp"
#include "se2geo/orientation_lift.hpp"

using namespace se2geo;
namespace fs = std::filesystem;

namespace {

constexpr double kDt = 1e-3;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_relative_energy_drift(const GeodesicCurve& c) {
  return c.max_energy_drift() / c.meta.energy_initial;
}

/// The curves every per-curve identity is evaluated on.
struct Corpus {
  std::vector<GeodesicCurve> random;
  std::vector<GeodesicCurve> fan;
  GeodesicCurve connection;
  double random_seconds{0.0};
  double connection_seconds{0.0};
  double connection_residual{INFINITY};
  bool connection_ok{false};

  std::vector<const GeodesicCurve*> all() const {
    std::vector<const GeodesicCurve*> out;
    for (const auto& c : random) out.push_back(&c);
    for (const auto& c : fan) out.push_back(&c);
    if (connection_ok) out.push_back(&connection);
    return out;
  }
};

std::vector<double> default_fan_gammas() {
  std::vector<double> g;
  for (int k = 1; k <= 12; ++k) g.push_back(k * kTwoPi / 13);
  return g;
}

Corpus build_corpus() {
  Corpus c;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 100; ++i) {
    const double e = 1e-3 + (1.0 - 1e-3) * u(rng);
    const double g = 4 * kPi * u(rng);
    const double gd = (2 * u(rng) - 1) * 2 * std::sqrt(e);
    const ConfigPoint q{4 * u(rng) - 2, 4 * u(rng) - 2, kTwoPi * u(rng)};
    c.random.push_back(integrate({q, from_pendulum({g, gd}, e), 0.0}, 5.0, kDt));
  }
  c.random_seconds = seconds_since(t0);

  c.fan = geodesic_fan({0, 0, 0}, 0.2, default_fan_gammas(), 0.0, 3.0, kDt);

  const auto t1 = std::chrono::steady_clock::now();
  try {
    const auto sols = solve_bvp({0, 0, 0}, {0.01, 0.005, kPi / 3});
    c.connection = sols.front().curve;
    c.connection_residual = sols.front().residual;
    c.connection_ok = sols.front().converged;
  } catch (const NoConvergence&) {
    c.connection_ok = false;
  }
  c.connection_seconds = seconds_since(t1);
  return c;
}

Outcome energy_conservation(const Corpus& c) {
  double worst = 0.0;
  for (const auto& curve : c.random) worst = std::max(worst, max_relative_energy_drift(curve));
  const bool ok = worst <= 1e-8 && c.random_seconds < 10.0;
  return {ok, "100 curves, t=5: max relative drift " + fmt("%.3g", worst) + ", " +
                  fmt("%.2f s", c.random_seconds)};
}

Outcome degenerate_geodesics(const Corpus&) {
  double worst = 0.0;
  for (double e : {0.2, 1.0}) {
    const double s = std::sqrt(e);
    const auto line = integrate({{0, 0, 0}, from_pendulum({kPi, 0.0}, e), 0.0}, 1.0, kDt);
    worst = std::max(worst, std::abs(line.endpoint().x() - s));
    worst = std::max(worst, std::abs(line.endpoint().y()));
    worst = std::max(worst, angle_dist(line.endpoint().theta(), 0.0));

    const double th0 = 0.7;
    const auto rot = integrate({{0, 0, th0}, from_pendulum({0.0, 0.0}, e), 0.0}, 1.0, kDt);
    worst = std::max(worst, std::abs(rot.endpoint().x()));
    worst = std::max(worst, std::abs(rot.endpoint().y()));
    worst = std::max(worst, angle_dist(rot.endpoint().theta(), th0 + s));
  }
  return {worst <= 1e-10, "max endpoint error " + fmt("%.3g", worst)};
}

Outcome pendulum_reduction(const Corpus&) {
  const double e = 0.2;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto curve = integrate(
        {{0, 0, 0}, from_pendulum({4 * kPi * u(rng), (2 * u(rng) - 1) * 1.5}, e), 0.0}, 5.0, kDt);
    const auto g = gamma_series(curve);
    for (std::size_t k = 1; k + 1 < g.size(); ++k) {
      const double acc = (g[k + 1] - 2 * g[k] + g[k - 1]) / (kDt * kDt);
      worst = std::max(worst, std::abs(acc + e * std::sin(g[k])));
    }
  }

  const auto small = integrate({{0, 0, 0}, from_pendulum({1e-3, 0.0}, e), 0.0}, 60.0, kDt);
  const auto g = gamma_series(small);
  std::vector<double> t;
  for (const auto& s : small.samples) t.push_back(s.t);
  const auto z = oracle::zero_crossings(t, g);
  double rel = INFINITY;
  if (z.size() >= 2) {
    const double period = 2.0 * (z.back() - z.front()) / static_cast<double>(z.size() - 1);
    const double expected = kTwoPi / std::sqrt(e);
    rel = std::abs(period - expected) / expected;
  }
  return {worst <= 1e-5 && rel <= 1e-3,
          "FD residual " + fmt("%.3g", worst) + ", period error " + fmt("%.3g", rel)};
}

Outcome horizontality(const Corpus& c) {
  double worst_ratio = 0.0;
  double worst_library = 0.0;
  for (const auto* curve : c.all()) {
    const double bound = 5 * kDt * kDt * std::sqrt(curve->meta.energy_initial);
    worst_ratio = std::max(worst_ratio, oracle::max_chord_eta(*curve) / bound);
    double lib = 0.0;
    for (double v : horizontality_residuals(*curve)) lib = std::max(lib, v);
    worst_library = std::max(worst_library, lib / bound);
  }
  return {worst_ratio <= 1.0 && worst_library <= 1.0,
          std::to_string(c.all().size()) + " curves: max |eta| / (5 dt^2 sqrt E) = " +
              fmt("%.3g", worst_ratio) + " (chord), " + fmt("%.3g", worst_library) +
              " (central difference)"};
}

Outcome curvature_identity(const Corpus& c) {
  double worst = 0.0;
  int cusps = 0;
  for (const auto& curve : c.fan) {
    const auto r = analyze_curve(curve);
    worst = std::max(worst, r.max_curvature_mismatch);
    cusps += r.cusp_count;
  }
  return {c.fan.size() == 12 && worst <= 1e-4,
          "12-curve E=0.2 fan: max mismatch " + fmt("%.3g", worst) + fmt(", %g cusp samples", cusps)};
}

Outcome energy_functional_identity(const Corpus& c) {
  double worst = 0.0;
  for (const auto* curve : c.all()) {
    const auto ef = energy_functional(*curve);
    worst = std::max(worst, ef.difference / (curve->meta.energy_initial * curve->duration()));
  }
  return {worst <= 1e-6, std::to_string(c.all().size()) + " curves: max |difference| / (E T) = " +
                             fmt("%.3g", worst)};
}

Outcome connection(const Corpus& c) {
  if (!c.connection_ok) return {false, "solve_bvp did not converge"};
  const auto& curve = c.connection;
  const double e = curve.meta.energy_initial;
  const double drift = curve.max_energy_drift() / std::max(1.0, e);
  const double eta = oracle::max_chord_eta(curve) / (5 * kDt * kDt * std::sqrt(e));
  const bool arc = oracle::single_arc(curve) && !oracle::self_intersects(curve);
  const bool ok = c.connection_residual < 1e-6 && drift <= 1e-9 && eta <= 1.0 && arc &&
                  c.connection_seconds < 30.0;
  return {ok, "(0,0,0) -> (0.01,0.005,pi/3): residual " + fmt("%.3g", c.connection_residual) +
                  ", E " + fmt("%.6g", e) + ", drift " + fmt("%.3g", drift) + ", eta ratio " +
                  fmt("%.3g", eta) + (arc ? ", single arc" : ", NOT a single arc") + ", " +
                  fmt("%.2f s", c.connection_seconds)};
}

Outcome fan_reproduction(const Corpus&) {
  const fs::path dir = fs::temp_directory_path() / ("se2geo_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ostringstream out, err;
  const int code = cli::run({"fan", "--out-dir", dir.string()}, out, err);
  std::vector<GeodesicCurve> fan;
  std::string problem;
  if (code != 0) problem = "cmd exit " + std::to_string(code);
  for (int i = 0; problem.empty(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "fan_%02d.csv", i);
    if (!fs::exists(dir / name)) break;
    fan.push_back(io::load_curve(dir / name));
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (!problem.empty()) return {false, problem};
  if (fan.size() != 12) return {false, fmt("%g curves", static_cast<double>(fan.size()))};

  bool common = true;
  double max_gap = 0.0;
  double mirror = 0.0;
  const double e = fan.front().meta.energy_initial;
  const double t = fan.front().duration();
  for (std::size_t i = 0; i < fan.size(); ++i) {
    common = common && fan[i].start() == ConfigPoint(0, 0, 0) &&
             std::abs(fan[i].meta.energy_initial - e) <= 1e-12;
    if (i > 0) {
      max_gap = std::max(max_gap, std::hypot(fan[i].endpoint().x() - fan[i - 1].endpoint().x(),
                                             fan[i].endpoint().y() - fan[i - 1].endpoint().y()));
    }
    const auto& a = fan[i].samples;
    const auto& b = fan[fan.size() - 1 - i].samples;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      mirror = std::max({mirror, std::abs(a[k].x - b[k].x), std::abs(a[k].y + b[k].y),
                         angle_dist(a[k].theta, -b[k].theta)});
    }
  }
  const double gap_ratio = max_gap / (std::sqrt(e) * t);
  const bool ok = common && std::abs(e - 0.2) <= 1e-12 && gap_ratio < 0.2 && mirror <= 1e-9;
  return {ok, std::string("12 curves, ") + (common ? "common origin" : "origins differ") +
                  ", E=" + fmt("%g", e) + ", max gap / (sqrt(E) T) " + fmt("%.3g", gap_ratio) +
                  ", mirror mismatch " + fmt("%.3g", mirror)};
}

Outcome lift_oracle(const Corpus&) {
  constexpr double tol = kPi / 3600;
  double worst = 0.0;
  int non_unique = 0;
  int checked = 0;
  auto check = [&](double gx, double gy, double theta) {
    worst = std::max(worst, oracle::circle_dist(theta, oracle::brute_force_argmax(gx, gy)));
    if (oracle::count_local_maxima(gx, gy) != 1) ++non_unique;
    ++checked;
  };

  std::mt19937_64 rng(3600);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double gx = u(rng), gy = u(rng);
    check(gx, gy, theta_closed_form(gx, gy));
  }

  auto image_check = [&](const ScalarImage& img, double sigma) {
    const double eps = default_eps_reg(img);
    const auto field = lift(img, sigma, eps);
    const auto grads = gradient(smooth(img, sigma));
    for (int r = 0; r < img.height(); ++r) {
      for (int c = 0; c < img.width(); ++c) {
        const auto& s = field.at(r, c);
        if (!s.regular) continue;
        const auto& g = grads[img.index(r, c)];
        check(g.gx, g.gy, s.theta);
      }
    }
  };
  image_check(oracle::sample_image(32, 1.0, [](double x, double y) { return 0.4 * x + y; }), 0.0);
  const oracle::Blob blob{0.5, -0.25, 4.0};
  image_check(oracle::sample_image(48, 0.5, [&](double x, double y) { return blob.value(x, y); }),
              0.0);
  image_check(oracle::sample_image(32, 1.0, [](double x, double) { return x >= 0 ? 1.0 : 0.0; }),
              1.0);

  return {worst <= tol && non_unique == 0,
          fmt("%g samples: max deviation ", checked) + fmt("%.3g rad", worst) +
              fmt(" (grid pi/3600 = %.3g), ", tol) + fmt("%g non-unique maxima", non_unique)};
}

Outcome bvp_round_trip(const Corpus&) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  int nondeterministic = 0;
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 50; ++i) {
    const ShootingParams p{0.2 + 1.8 * u(rng), 4 * kPi * u(rng), (2 * u(rng) - 1)};
    const ConfigPoint start{2 * u(rng) - 1, 2 * u(rng) - 1, kTwoPi * u(rng)};
    const ConfigPoint target = shoot(start, p).endpoint();
    BvpOptions opt;
    opt.seed = static_cast<std::uint64_t>(i);
    try {
      const auto a = solve_bvp(start, target, opt);
      const double r = endpoint_residual(a.front().curve.endpoint(), target, opt.w_theta);
      worst = std::max(worst, r);
      if (r > 1e-6) ++failures;
      if (i % 10 == 0) {
        const auto b = solve_bvp(start, target, opt);
        bool same = a.size() == b.size();
        for (std::size_t k = 0; same && k < a.size(); ++k) {
          same = a[k].params == b[k].params && a[k].residual == b[k].residual;
        }
        if (!same) ++nondeterministic;
      }
    } catch (const NoConvergence&) {
      ++failures;
    }
  }
  return {failures == 0 && nondeterministic == 0,
          fmt("50 targets: %g unrecovered, ", failures) + "max residual " + fmt("%.3g", worst) +
              fmt(", %g non-deterministic reruns, ", nondeterministic) +
              fmt("%.1f s", seconds_since(t0))};
}

Outcome reduced_vs_canonical(const Corpus&) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double pos = 0.0, ang = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double e = u(rng);
    const MomentumFrame mf = from_pendulum({4 * kPi * u(rng), (2 * u(rng) - 1) * 2}, e);
    const ConfigPoint q{u(rng), u(rng), kTwoPi * u(rng)};
    const auto r = integrate_endpoint({q, mf, 0.0}, 1.0, kDt);
    const auto c = integrate_canonical(from_momentum_frame(q, mf), 1.0, kDt);
    pos = std::max(pos, std::hypot(r.q.x() - c.endpoint().x(), r.q.y() - c.endpoint().y()));
    ang = std::max(ang, angle_dist(r.q.theta(), c.endpoint().theta()));
  }
  return {pos <= 1e-8 && ang <= 1e-8,
          "100 initial conditions at t=1: position " + fmt("%.3g", pos) + ", angle " + fmt("%.3g", ang)};
}

}  // namespace

int main() {
  const Corpus corpus = build_corpus();
  const std::vector<std::pair<std::string, std::function<Outcome(const Corpus&)>>> criteria{
      {"energy conservation", energy_conservation},
      {"exact degenerate geodesics", degenerate_geodesics},
      {"pendulum reduction", pendulum_reduction},
      {"horizontality", horizontality},
      {"curvature identity", curvature_identity},
      {"energy functional identity", energy_functional_identity},
      {"two-inducer connection", connection},
      {"isoenergetic fan", fan_reproduction},
      {"orientation lift oracle", lift_oracle},
      {"bvp round trip", bvp_round_trip},
      {"reduced vs canonical", reduced_vs_canonical},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check(corpus);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
