#include "se2geo/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "se2geo/curve_analysis.hpp"
#include "se2geo/errors.hpp"
#include "se2geo/geodesic_bvp.hpp"
#include "se2geo/io.hpp"
#include "se2geo/orientation_lift.hpp"
#include "se2geo/report.hpp"
#include "se2geo/svg.hpp"

namespace se2geo::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
  UsageError(const std::string& flag, const std::string& msg)
      : std::runtime_error(flag + ": " + msg) {}
};

std::vector<double> parse_list(const std::string& flag, const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || *end != '\0' || !std::isfinite(v)) {
      throw UsageError(flag, "'" + text + "' is not a list of numbers");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag, "empty list");
  return out;
}

double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

ConfigPoint parse_config(const std::string& flag, const std::string& text, bool degrees) {
  const auto v = parse_list(flag, text, ',');
  if (v.size() != 3) throw UsageError(flag, "expected x,y,theta");
  return {v[0], v[1], to_radians(v[2], degrees)};
}

void require(bool ok, const std::string& flag, const std::string& msg) {
  if (!ok) throw UsageError(flag, msg);
}

void validate_horizon(double t_final, double dt) {
  require(std::isfinite(t_final) && t_final > 0.0, "--t-final", "must be positive");
  require(std::isfinite(dt) && dt > 0.0, "--dt", "must be positive");
  require(dt <= t_final, "--dt", "must not exceed --t-final");
}

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("SE2_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw UsageError("SE2_SEED", "not an unsigned integer");
  return static_cast<std::uint64_t>(v);
}

struct BvpFlags {
  double tol{1e-6};
  double w_theta{1.0};
  int n_starts{24};
  int max_iter{200};
  std::uint64_t seed{0};
  double dt{1e-3};

  void add_to(CLI::App& app) {
    app.add_option("--tol", tol, "Endpoint residual tolerance")->capture_default_str();
    app.add_option("--w-theta", w_theta, "Weight of the angular mismatch")->capture_default_str();
    app.add_option("--n-starts", n_starts, "Number of shooting starts")->capture_default_str();
    app.add_option("--max-iter", max_iter, "Iterations per start")->capture_default_str();
    app.add_option("--seed", seed, "Seed for the random starts (SE2_SEED overrides)")
        ->capture_default_str();
    app.add_option("--dt", dt, "Integration step")->capture_default_str();
  }

  BvpOptions options() const {
    require(std::isfinite(tol) && tol > 0.0, "--tol", "must be positive");
    require(std::isfinite(w_theta) && w_theta > 0.0, "--w-theta", "must be positive");
    require(n_starts > 0, "--n-starts", "must be positive");
    require(max_iter > 0, "--max-iter", "must be positive");
    require(std::isfinite(dt) && dt > 0.0 && dt <= kShootingHorizon, "--dt",
            "must be in (0, 1]");
    BvpOptions o{tol, w_theta, n_starts, max_iter, seed, dt};
    if (const auto env = seed_from_env()) o.seed = *env;
    return o;
  }
};

/// Files are collected first and written together once the computation is done.
class Outputs {
public:
  void add(fs::path path, std::string contents) {
    files_.emplace_back(std::move(path), std::move(contents));
  }
  void flush() const {
    for (const auto& [path, contents] : files_) io::write_file(path, contents);
  }

private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

std::string curve_text(const GeodesicCurve& c) {
  std::ostringstream ss;
  io::write_curve_csv(ss, c);
  return ss.str();
}

std::string describe(const ConfigPoint& q) {
  return "(" + io::format_real(q.x()) + ", " + io::format_real(q.y()) + ", " +
         io::format_real(q.theta()) + ")";
}

std::string solutions_summary(const std::vector<BvpSolution>& sols) {
  std::ostringstream ss;
  ss << "rank,sqrt_energy,gamma0,gamma_dot0,energy,residual,converged\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const auto& s = sols[i];
    ss << i << ',' << io::format_real(s.params.sqrt_energy) << ','
       << io::format_real(s.params.gamma0) << ',' << io::format_real(s.params.gamma_dot0) << ','
       << io::format_real(s.energy) << ',' << io::format_real(s.residual) << ','
       << (s.converged ? 1 : 0) << '\n';
  }
  return ss.str();
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_filename(p.stem().string() + suffix);
  return out;
}

// ---------------------------------------------------------------------------

struct FlowCmd {
  std::string start{"0,0,0"};
  double gamma0{kPi};
  double gamma_dot0{0.0};
  double energy{1.0};
  double t_final{1.0};
  double dt{1e-3};
  std::string out_path;
  std::string svg_path;
  std::string report_path;
  bool degrees{false};

  void add_to(CLI::App& app) {
    app.add_option("--start", start, "Start point x,y,theta")->capture_default_str();
    app.add_option("--gamma0", gamma0, "Initial pendulum angle")->capture_default_str();
    app.add_option("--gamma-dot0", gamma_dot0, "Initial pendulum rate")->capture_default_str();
    app.add_option("--energy", energy, "E = p1^2 + p2^2")->capture_default_str();
    app.add_option("--t-final", t_final, "Integration horizon")->capture_default_str();
    app.add_option("--dt", dt, "Integration step")->capture_default_str();
    app.add_option("--out", out_path, "Curve CSV")->required();
    app.add_option("--svg", svg_path, "Planar projection SVG");
    app.add_option("--report", report_path, "Curve report (JSON)");
    app.add_flag("--degrees", degrees, "Angles given in degrees");
  }

  int run(std::ostream& out, std::ostream&) const {
    const ConfigPoint q0 = parse_config("--start", start, degrees);
    require(std::isfinite(energy) && energy >= 0.0, "--energy", "must be non-negative");
    require(std::isfinite(gamma0), "--gamma0", "must be finite");
    require(std::isfinite(gamma_dot0), "--gamma-dot0", "must be finite");
    validate_horizon(t_final, dt);
    const PendulumState ps{to_radians(gamma0, degrees), to_radians(gamma_dot0, degrees)};
    const GeodesicCurve curve = integrate({q0, from_pendulum(ps, energy), 0.0}, t_final, dt);

    Outputs files;
    files.add(out_path, curve_text(curve));
    if (!svg_path.empty()) {
      files.add(svg_path, svg::render({svg::planar_projection(curve)}, "geodesic"));
    }
    if (!report_path.empty()) files.add(report_path, render_report(curve));
    files.flush();
    out << "endpoint " << describe(curve.endpoint()) << '\n';
    if (!curve.meta.warning.empty()) out << "warning: " << curve.meta.warning << '\n';
    return kOk;
  }
};

struct ConnectCmd {
  std::string start{"0,0,0"};
  std::string end;
  std::string out_path{"connect.csv"};
  std::string summary_path;
  std::string svg_path;
  bool degrees{false};
  BvpFlags bvp;

  void add_to(CLI::App& app) {
    app.add_option("--start", start, "Start inducer x,y,theta")->capture_default_str();
    app.add_option("--end", end, "End inducer x,y,theta")->required();
    app.add_option("--out", out_path, "Best curve CSV")->capture_default_str();
    app.add_option("--summary", summary_path, "All solutions CSV (default <out>_solutions.csv)");
    app.add_option("--svg", svg_path, "Two-panel SVG of the best curve");
    app.add_flag("--degrees", degrees, "Angles given in degrees");
    bvp.add_to(app);
  }

  int run(std::ostream& out, std::ostream& err) const {
    const ConfigPoint a = parse_config("--start", start, degrees);
    const ConfigPoint b = parse_config("--end", end, degrees);
    const BvpOptions opt = bvp.options();

    std::vector<BvpSolution> sols;
    int code = kOk;
    try {
      sols = solve_bvp(a, b, opt);
    } catch (const NoConvergence& e) {
      sols = e.candidates();
      err << "error: " << e.what() << "; writing best-effort candidates\n";
      code = kNoConvergence;
    }
    if (code == kOk && sols.front().energy == 0.0) {
      err << "warning: start equals target; returning the zero-energy constant curve\n";
    }

    Outputs files;
    const fs::path out_file(out_path);
    if (!sols.empty()) {
      files.add(out_file, curve_text(sols.front().curve));
      if (!svg_path.empty()) files.add(svg_path, svg::render_connection(sols.front().curve));
    }
    files.add(summary_path.empty() ? sibling(out_file, "_solutions.csv") : fs::path(summary_path),
              solutions_summary(sols));
    files.flush();
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const auto& s = sols[i];
      out << (s.converged ? "solution " : "candidate ") << i << ": sqrtE="
          << io::format_real(s.params.sqrt_energy) << " gamma0=" << io::format_real(s.params.gamma0)
          << " gamma_dot0=" << io::format_real(s.params.gamma_dot0)
          << " residual=" << io::format_real(s.residual) << '\n';
    }
    return code;
  }
};

std::vector<double> default_fan_angles() {
  std::vector<double> g;
  for (int k = 1; k <= 12; ++k) g.push_back(k * kTwoPi / 13.0);
  return g;
}

struct FanCmd {
  std::string start{"0,0,0"};
  double energy{0.2};
  std::string gamma0_list;
  double gamma_dot0{0.0};
  double t_final{3.0};
  double dt{1e-3};
  std::string out_dir{"."};
  std::string prefix{"fan"};
  std::string svg_path;
  bool degrees{false};

  void add_to(CLI::App& app) {
    app.add_option("--start", start, "Common start x,y,theta")->capture_default_str();
    app.add_option("--energy", energy, "Shared energy E")->capture_default_str();
    app.add_option("--gamma0", gamma0_list,
                   "Comma-separated initial angles (default k*2pi/13, k = 1..12)");
    app.add_option("--gamma-dot0", gamma_dot0, "Shared initial rate")->capture_default_str();
    app.add_option("--t-final", t_final, "Integration horizon")->capture_default_str();
    app.add_option("--dt", dt, "Integration step")->capture_default_str();
    app.add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    app.add_option("--prefix", prefix, "File prefix")->capture_default_str();
    app.add_option("--svg", svg_path, "Combined SVG (default <out-dir>/<prefix>.svg)");
    app.add_flag("--degrees", degrees, "Angles given in degrees");
  }

  int run(std::ostream& out, std::ostream&) const {
    const ConfigPoint q0 = parse_config("--start", start, degrees);
    require(std::isfinite(energy) && energy > 0.0, "--energy", "must be positive");
    require(std::isfinite(gamma_dot0), "--gamma-dot0", "must be finite");
    validate_horizon(t_final, dt);
    std::vector<double> angles =
        gamma0_list.empty() ? default_fan_angles() : parse_list("--gamma0", gamma0_list, ',');
    for (double& g : angles) g = to_radians(g, degrees);
    require(fs::is_directory(out_dir), "--out-dir", "'" + out_dir + "' is not a directory");

    const auto fan = geodesic_fan(q0, energy, angles, to_radians(gamma_dot0, degrees), t_final, dt);
    Outputs files;
    std::vector<svg::Polyline> lines;
    for (std::size_t i = 0; i < fan.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "_%02zu.csv", i);
      files.add(fs::path(out_dir) / (prefix + name), curve_text(fan[i]));
      lines.push_back(svg::planar_projection(fan[i]));
    }
    const fs::path svg_file =
        svg_path.empty() ? fs::path(out_dir) / (prefix + ".svg") : fs::path(svg_path);
    files.add(svg_file, svg::render(lines, "isoenergetic geodesic fan"));
    files.flush();
    out << fan.size() << " curves, E=" << io::format_real(energy) << ", svg " << svg_file.string()
        << '\n';
    return kOk;
  }
};

struct LiftCmd {
  std::string image;
  double sigma{0.0};
  std::optional<double> eps_reg;
  std::string out_path{"field.csv"};
  std::string points;
  std::string inducers_path{"inducers.csv"};
  bool complete{false};
  bool try_flip{false};
  std::string curve_prefix{"completion"};
  BvpFlags bvp;

  void add_to(CLI::App& app) {
    app.add_option("--image", image, "PGM (P2/P5) or grid CSV image")->required();
    app.add_option("--sigma", sigma, "Gaussian smoothing scale")->capture_default_str();
    app.add_option("--eps-reg", eps_reg,
                   "Regularity threshold on |grad I| (default 1e-6 * range / spacing)");
    app.add_option("--out", out_path, "Orientation field CSV")->capture_default_str();
    app.add_option("--points", points, "Inducer positions 'x,y;x,y;...'");
    app.add_option("--inducers-out", inducers_path, "Inducer CSV")->capture_default_str();
    app.add_flag("--complete", complete, "Connect consecutive inducers by geodesics");
    app.add_flag("--try-flip", try_flip,
                 "Also try both inducers rotated by pi and keep the lower-energy geodesic");
    app.add_option("--curve-prefix", curve_prefix, "Prefix for completion curve CSVs")
        ->capture_default_str();
    bvp.add_to(app);
  }

  int run(std::ostream& out, std::ostream& err) const {
    require(std::isfinite(sigma) && sigma >= 0.0, "--sigma", "must be non-negative");
    if (eps_reg) require(std::isfinite(*eps_reg) && *eps_reg >= 0.0, "--eps-reg", "must be non-negative");
    require(!complete || !points.empty(), "--complete", "requires --points");
    require(!try_flip || complete, "--try-flip", "requires --complete");

    std::vector<std::pair<double, double>> pts;
    if (!points.empty()) {
      std::stringstream ss(points);
      std::string item;
      while (std::getline(ss, item, ';')) {
        const auto v = parse_list("--points", item, ',');
        require(v.size() == 2, "--points", "each point must be x,y");
        pts.emplace_back(v[0], v[1]);
      }
    }
    const BvpOptions opt = complete ? bvp.options() : BvpOptions{};

    const ScalarImage img = io::load_image(image);
    const OrientationField field = lift(img, sigma, eps_reg ? *eps_reg : default_eps_reg(img));
    Outputs files;
    std::ostringstream fs_text;
    io::write_field_csv(fs_text, field);
    files.add(out_path, fs_text.str());
    if (field.regular_count() == 0) err << "warning: no regular pixels; orientation map is empty\n";
    out << field.regular_count() << " of " << field.samples.size() << " pixels regular\n";

    if (pts.empty()) {
      files.flush();
      return kOk;
    }
    std::vector<ConfigPoint> inducers;
    try {
      inducers = inducers_at(field, pts);
    } catch (const std::out_of_range& e) {
      throw UsageError("--points", e.what());
    }
    std::ostringstream ind_text;
    io::write_config_points_csv(ind_text, inducers);
    files.add(inducers_path, ind_text.str());

    int code = kOk;
    if (complete) {
      for (std::size_t i = 0; i + 1 < inducers.size(); ++i) {
        std::optional<BvpSolution> best;
        auto attempt = [&](const ConfigPoint& a, const ConfigPoint& b) {
          try {
            const auto sols = solve_bvp(a, b, opt);
            if (!best || sols.front().energy < best->energy) best = sols.front();
          } catch (const NoConvergence&) {
          }
        };
        const ConfigPoint& a = inducers[i];
        const ConfigPoint& b = inducers[i + 1];
        attempt(a, b);
        if (try_flip) {
          attempt({a.x(), a.y(), a.theta() + kPi}, {b.x(), b.y(), b.theta() + kPi});
        }
        if (!best) {
          err << "error: no geodesic found between inducers " << i << " and " << i + 1 << '\n';
          code = kNoConvergence;
          continue;
        }
        char name[32];
        std::snprintf(name, sizeof name, "_%02zu.csv", i);
        files.add(curve_prefix + name, curve_text(best->curve));
        out << "completion " << i << ": energy=" << io::format_real(best->energy)
            << " residual=" << io::format_real(best->residual) << '\n';
      }
    }
    files.flush();
    return code;
  }
};

struct AnalyzeCmd {
  std::string curve_path;
  std::string out_path;

  void add_to(CLI::App& app) {
    app.add_option("--curve", curve_path, "Curve CSV")->required();
    app.add_option("--out", out_path, "Report path (default: stdout)");
  }

  int run(std::ostream& out, std::ostream&) const {
    const GeodesicCurve curve = io::load_curve(curve_path);
    if (curve.samples.size() < 5) throw ParseError("curve needs at least 5 samples");
    const std::string doc = render_report(curve);
    if (out_path.empty()) {
      out << doc;
    } else {
      io::write_file(out_path, doc);
    }
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sub-Riemannian geodesics on SE(2): flows, connections, fans and orientation lifts",
               "se2geo"};
  app.require_subcommand(1);

  FlowCmd flow;
  ConnectCmd connect;
  FanCmd fan;
  LiftCmd lift_cmd;
  AnalyzeCmd analyze;
  auto* flow_app = app.add_subcommand("flow", "Integrate one geodesic from initial data");
  auto* connect_app = app.add_subcommand("connect", "Find geodesics joining two oriented points");
  auto* fan_app = app.add_subcommand("fan", "Isoenergetic family of geodesics from one point");
  auto* lift_app = app.add_subcommand("lift", "Orientation map and inducers of an image");
  auto* analyze_app = app.add_subcommand("analyze", "Curvature/energy report of a curve CSV");
  flow.add_to(*flow_app);
  connect.add_to(*connect_app);
  fan.add_to(*fan_app);
  lift_cmd.add_to(*lift_app);
  analyze.add_to(*analyze_app);

  std::vector<const char*> argv{"se2geo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*flow_app) return flow.run(out, err);
    if (*connect_app) return connect.run(out, err);
    if (*fan_app) return fan.run(out, err);
    if (*lift_app) return lift_cmd.run(out, err);
    if (*analyze_app) return analyze.run(out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const NonFiniteState& e) {
    err << "integration failed: " << e.what() << '\n';
    return kIntegration;
  } catch (const IrregularPoint& e) {
    err << "irregular point: " << e.what() << '\n';
    return kIrregularPoint;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace se2geo::cli
