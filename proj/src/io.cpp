#include "se2geo/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "se2geo/errors.hpp"

namespace se2geo::io {

namespace {

constexpr const char* kCurveHeader = "t,x,y,theta,p1,p2,p3";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_curve_csv(std::ostream& os, const GeodesicCurve& curve) {
  os << "# energy=" << format_real(curve.meta.energy_initial) << '\n';
  os << "# dt=" << format_real(curve.meta.dt) << '\n';
  os << "# integrator=" << curve.meta.integrator << '\n';
  if (!curve.meta.warning.empty()) os << "# warning=" << curve.meta.warning << '\n';
  os << kCurveHeader << '\n';
  for (const auto& s : curve.samples) {
    os << format_real(s.t) << ',' << format_real(s.x) << ',' << format_real(s.y) << ','
       << format_real(s.theta) << ',' << format_real(s.p1) << ',' << format_real(s.p2) << ','
       << format_real(s.p3) << '\n';
  }
}

GeodesicCurve read_curve_csv(std::istream& is) {
  GeodesicCurve curve;
  std::optional<double> energy;
  std::optional<double> dt;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> row_lines;

  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      if (key == "energy" || key == "dt") {
        const auto v = parse_real(value);
        if (!v) fail(line_no, "bad value for '" + key + "'");
        (key == "energy" ? energy : dt) = *v;
      } else if (key == "integrator") {
        curve.meta.integrator = value;
      } else if (key == "warning") {
        curve.meta.warning = value;
      }
      continue;
    }
    if (!header_seen) {
      if (t != kCurveHeader) fail(line_no, std::string("expected header '") + kCurveHeader + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split(t, ',');
    if (fields.size() != 7) fail(line_no, "expected 7 fields, got " + std::to_string(fields.size()));
    double v[7];
    for (std::size_t i = 0; i < 7; ++i) {
      const auto r = parse_real(fields[i]);
      if (!r || !std::isfinite(*r)) fail(line_no, "field " + std::to_string(i + 1) + " is not a finite number");
      v[i] = *r;
    }
    curve.samples.push_back({v[0], v[1], v[2], angle_wrap(v[3]), v[4], v[5], v[6]});
    row_lines.push_back(line_no);
  }
  if (!header_seen) throw ParseError("missing header '" + std::string(kCurveHeader) + "'");
  if (curve.samples.size() < 2) throw ParseError("curve needs at least 2 samples");

  curve.meta.dt = dt ? *dt : curve.samples[1].t - curve.samples[0].t;
  if (!(curve.meta.dt > 0.0)) throw ParseError("dt must be positive");
  curve.meta.energy_initial = energy ? *energy : curve.samples.front().momenta().energy();

  const double t0 = curve.samples.front().t;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const double expected = t0 + static_cast<double>(i) * curve.meta.dt;
    const double t = curve.samples[i].t;
    if (std::abs(t - expected) > 1e-9 * curve.meta.dt + 1e-12 * std::abs(t)) {
      fail(row_lines[i], "non-uniform time: t=" + format_real(t) + ", expected " +
                             format_real(expected));
    }
  }
  return curve;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << contents;
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void save_curve(const std::filesystem::path& path, const GeodesicCurve& curve) {
  std::ostringstream ss;
  write_curve_csv(ss, curve);
  write_file(path, ss.str());
}

GeodesicCurve load_curve(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path.string() + "'");
  return read_curve_csv(is);
}

namespace {

// Next whitespace-delimited PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& is) {
  std::string tok;
  int c;
  while ((c = is.get()) != EOF) {
    if (c == '#') {
      while ((c = is.get()) != EOF && c != '\n') {
      }
      if (!tok.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

long pgm_int(std::istream& is, const char* what) {
  const std::string tok = pgm_token(is);
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (tok.empty() || end != tok.c_str() + tok.size()) {
    throw ParseError(std::string("PGM: bad ") + what + " '" + tok + "'");
  }
  return v;
}

}  // namespace

ScalarImage read_pgm(std::istream& is) {
  const std::string magic = pgm_token(is);
  if (magic != "P2" && magic != "P5") throw ParseError("PGM: bad magic '" + magic + "'");
  const long w = pgm_int(is, "width");
  const long h = pgm_int(is, "height");
  const long maxval = pgm_int(is, "maxval");
  if (w < 3 || h < 3 || w > 1 << 20 || h > 1 << 20) throw ParseError("PGM: image must be at least 3x3");
  if (maxval < 1 || maxval > 65535) throw ParseError("PGM: maxval must be in [1, 65535]");

  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<double> values;
  values.reserve(n);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      const long v = pgm_int(is, "pixel");
      if (v < 0 || v > maxval) throw ParseError("PGM: pixel " + std::to_string(i) + " out of range");
      values.push_back(static_cast<double>(v) / static_cast<double>(maxval));
    }
  } else {
    const bool wide = maxval > 255;
    for (std::size_t i = 0; i < n; ++i) {
      long v = is.get();
      if (wide && v != EOF) {
        const int lo = is.get();
        v = lo == EOF ? EOF : (v << 8) | lo;
      }
      if (v == EOF) throw ParseError("PGM: truncated pixel data");
      if (v > maxval) throw ParseError("PGM: pixel " + std::to_string(i) + " out of range");
      values.push_back(static_cast<double>(v) / static_cast<double>(maxval));
    }
  }
  return {static_cast<int>(w), static_cast<int>(h), 1.0, std::move(values)};
}

ScalarImage read_grid_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto head = split(trim(line), ',');
  if (head.size() != 5) fail(line_no, "expected 'width,height,spacing,x0,y0'");
  double hv[5];
  for (std::size_t i = 0; i < 5; ++i) {
    const auto v = parse_real(head[i]);
    if (!v || !std::isfinite(*v)) fail(line_no, "bad header field " + std::to_string(i + 1));
    hv[i] = *v;
  }
  const double wd = hv[0];
  const double hd = hv[1];
  if (wd != std::floor(wd) || hd != std::floor(hd) || wd < 3 || hd < 3 || wd * hd > 1e9) {
    fail(line_no, "width and height must be integers >= 3");
  }
  if (!(hv[2] > 0.0)) fail(line_no, "spacing must be positive");

  const auto n = static_cast<std::size_t>(wd) * static_cast<std::size_t>(hd);
  std::vector<double> values;
  values.reserve(n);
  while (std::getline(is, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream ss(t);
    std::string tok;
    while (ss >> tok) {
      const auto v = parse_real(tok);
      if (!v || !std::isfinite(*v)) fail(line_no, "bad value '" + tok + "'");
      values.push_back(*v);
    }
  }
  if (values.size() != n) {
    throw ParseError("grid CSV: expected " + std::to_string(n) + " values, got " +
                     std::to_string(values.size()));
  }
  return {static_cast<int>(wd), static_cast<int>(hd), hv[2], std::move(values), hv[3], hv[4]};
}

void write_grid_csv(std::ostream& os, const ScalarImage& img) {
  os << img.width() << ',' << img.height() << ',' << format_real(img.spacing()) << ','
     << format_real(img.x0()) << ',' << format_real(img.y0()) << '\n';
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (c) os << ',';
      os << format_real(img.at(r, c));
    }
    os << '\n';
  }
}

void write_pgm_ascii(std::ostream& os, const ScalarImage& img, int maxval) {
  const auto [lo_it, hi_it] = std::minmax_element(img.values().begin(), img.values().end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  os << "P2\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const double u = range > 0.0 ? (img.at(r, c) - lo) / range : 0.0;
      if (c) os << ' ';
      os << std::lround(u * maxval);
    }
    os << '\n';
  }
}

ScalarImage load_image(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open '" + path.string() + "'");
  char magic[2] = {0, 0};
  is.read(magic, 2);
  is.clear();
  is.seekg(0);
  if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return read_pgm(is);
  return read_grid_csv(is);
}

void write_field_csv(std::ostream& os, const OrientationField& field) {
  os << "x,y,theta,grad_norm,regular\n";
  for (int r = 0; r < field.height; ++r) {
    for (int c = 0; c < field.width; ++c) {
      const auto& s = field.at(r, c);
      os << format_real(field.x0 + c * field.spacing) << ','
         << format_real(field.y0 + r * field.spacing) << ','
         << (s.regular ? format_real(s.theta) : std::string("nan")) << ','
         << format_real(s.grad_norm) << ',' << (s.regular ? 1 : 0) << '\n';
    }
  }
}

void write_config_points_csv(std::ostream& os, const std::vector<ConfigPoint>& points) {
  os << "x,y,theta\n";
  for (const auto& q : points) {
    os << format_real(q.x()) << ',' << format_real(q.y()) << ',' << format_real(q.theta()) << '\n';
  }
}

}  // namespace se2geo::io
