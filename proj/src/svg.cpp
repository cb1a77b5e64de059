#include "se2geo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace se2geo::svg {

namespace {

constexpr int kPanelSize = 640;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

struct Box {
  double u0, v0, w, h;
};

Box bounding_box(const std::vector<Polyline>& lines) {
  double umin = std::numeric_limits<double>::infinity();
  double vmin = umin;
  double umax = -umin;
  double vmax = -umin;
  for (const auto& l : lines) {
    for (const auto& p : l) {
      umin = std::min(umin, p.u);
      umax = std::max(umax, p.u);
      vmin = std::min(vmin, p.v);
      vmax = std::max(vmax, p.v);
    }
  }
  if (!std::isfinite(umin)) return {-1.0, -1.0, 2.0, 2.0};
  double w = umax - umin;
  double h = vmax - vmin;
  const double floor = std::max({w, h, 1e-9}) * 1e-3;
  if (w < floor) {
    umin -= 0.5 * (floor - w);
    w = floor;
  }
  if (h < floor) {
    vmin -= 0.5 * (floor - h);
    h = floor;
  }
  return {umin - 0.05 * w, vmin - 0.05 * h, 1.1 * w, 1.1 * h};
}

void write_polylines(std::ostringstream& os, const std::vector<Polyline>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    os << "  <polyline fill=\"none\" stroke=\"" << kPalette[i % kPalette.size()]
       << "\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" points=\"";
    for (std::size_t j = 0; j < lines[i].size(); ++j) {
      if (j) os << ' ';
      os << num(lines[i][j].u) << ',' << num(lines[i][j].v);
    }
    os << "\"/>\n";
  }
}

void write_panel(std::ostringstream& os, const std::vector<Polyline>& lines, int x_offset) {
  const Box b = bounding_box(lines);
  const int height = static_cast<int>(std::lround(
      std::clamp(kPanelSize * b.h / b.w, kPanelSize / 4.0, 2.0 * kPanelSize)));
  os << "<svg x=\"" << x_offset << "\" y=\"0\" width=\"" << kPanelSize << "\" height=\"" << height
     << "\" viewBox=\"" << num(b.u0) << ' ' << num(b.v0) << ' ' << num(b.w) << ' ' << num(b.h)
     << "\">\n";
  write_polylines(os, lines);
  os << "</svg>\n";
}

}  // namespace

Polyline planar_projection(const GeodesicCurve& curve) {
  Polyline out;
  out.reserve(curve.samples.size());
  for (const auto& s : curve.samples) out.push_back({s.x, -s.y});
  return out;
}

Polyline axonometric_projection(const GeodesicCurve& curve) {
  const std::size_t n = curve.samples.size();
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = i == 0 ? curve.samples[0].theta
                      : theta[i - 1] + angle_diff(curve.samples[i].theta, curve.samples[i - 1].theta);
  }
  auto normalizer = [](auto get, std::size_t count) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < count; ++i) {
      lo = std::min(lo, get(i));
      hi = std::max(hi, get(i));
    }
    const double span = hi - lo;
    return [lo, span](double v) { return span > 0.0 ? (v - lo) / span : 0.0; };
  };
  const auto nx = normalizer([&](std::size_t i) { return curve.samples[i].x; }, n);
  const auto ny = normalizer([&](std::size_t i) { return curve.samples[i].y; }, n);
  const auto nt = normalizer([&](std::size_t i) { return theta[i]; }, n);
  const double c30 = std::cos(kPi / 6.0);
  const double s30 = 0.5;
  Polyline out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double X = nx(curve.samples[i].x);
    const double Y = ny(curve.samples[i].y);
    const double T = nt(theta[i]);
    out.push_back({(X - Y) * c30, -((X + Y) * s30 + T)});
  }
  return out;
}

std::string render(const std::vector<Polyline>& lines, std::string_view title) {
  const Box b = bounding_box(lines);
  const int height = static_cast<int>(std::lround(
      std::clamp(kPanelSize * b.h / b.w, kPanelSize / 4.0, 2.0 * kPanelSize)));
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanelSize << "\" height=\""
     << height << "\" viewBox=\"" << num(b.u0) << ' ' << num(b.v0) << ' ' << num(b.w) << ' '
     << num(b.h) << "\">\n";
  if (!title.empty()) os << "  <title>" << title << "</title>\n";
  write_polylines(os, lines);
  os << "</svg>\n";
  return os.str();
}

std::string render_connection(const GeodesicCurve& curve) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kPanelSize << "\" height=\""
     << 2 * kPanelSize << "\">\n";
  os << "<title>geodesic: planar projection (left), (x, y, theta) view (right)</title>\n";
  write_panel(os, {planar_projection(curve)}, 0);
  write_panel(os, {axonometric_projection(curve)}, kPanelSize);
  os << "</svg>\n";
  return os.str();
}

std::vector<Polyline> parse_polylines(const std::string& document) {
  std::vector<Polyline> out;
  const std::string key = "points=\"";
  std::size_t pos = 0;
  while ((pos = document.find("<polyline", pos)) != std::string::npos) {
    const auto start = document.find(key, pos);
    if (start == std::string::npos) break;
    const auto end = document.find('"', start + key.size());
    std::string body = document.substr(start + key.size(), end - start - key.size());
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream ss(body);
    Polyline line;
    double u, v;
    while (ss >> u >> v) line.push_back({u, v});
    out.push_back(std::move(line));
    pos = end;
  }
  return out;
}

}  // namespace se2geo::svg
