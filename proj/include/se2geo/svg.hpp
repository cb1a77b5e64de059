#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "se2geo/hamiltonian_flow.hpp"

namespace se2geo::svg {

inline constexpr std::array<std::string_view, 12> kPalette{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

struct Point {
  double u{0.0};
  double v{0.0};
};

using Polyline = std::vector<Point>;

/// Planar projection in SVG user coordinates: (x, -y), so the picture has y pointing up.
[[nodiscard]] Polyline planar_projection(const GeodesicCurve& curve);

/// Axonometric view of (x, y, theta) with each axis normalized to its range over the
/// given curve; theta is unwrapped first.
[[nodiscard]] Polyline axonometric_projection(const GeodesicCurve& curve);

/// One panel, viewBox = bounding box + 5% margin, stroke colors cycling through kPalette.
[[nodiscard]] std::string render(const std::vector<Polyline>& lines, std::string_view title = {});

/// Side-by-side panels: planar projection (left) and (x, y, theta) view (right).
[[nodiscard]] std::string render_connection(const GeodesicCurve& curve);

/// Parses the points of every <polyline> in a document produced by render().
[[nodiscard]] std::vector<Polyline> parse_polylines(const std::string& document);

}  // namespace se2geo::svg
