// Text formats:
//
//   curve CSV     "# energy=<E>", "# dt=<dt>", "# integrator=<name>" [, "# warning=<text>"]
//                 then header "t,x,y,theta,p1,p2,p3" and one row per sample,
//                 numbers written with 17 significant digits.
//   grid CSV      first line "width,height,spacing,x0,y0", then row-major values.
//   PGM           P2 (ASCII) or P5 (binary, 8 or 16 bit); values divided by maxval,
//                 spacing 1, origin (0, 0), file row r maps to y = r.
//   field CSV     header "x,y,theta,grad_norm,regular"; theta is "nan" off the regular set.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "se2geo/hamiltonian_flow.hpp"
#include "se2geo/orientation_lift.hpp"

namespace se2geo::io {

/// "%.17g"
[[nodiscard]] std::string format_real(double v);

void write_curve_csv(std::ostream& os, const GeodesicCurve& curve);
/// Throws ParseError naming the offending line.
[[nodiscard]] GeodesicCurve read_curve_csv(std::istream& is);

void save_curve(const std::filesystem::path& path, const GeodesicCurve& curve);
[[nodiscard]] GeodesicCurve load_curve(const std::filesystem::path& path);

[[nodiscard]] ScalarImage read_pgm(std::istream& is);
[[nodiscard]] ScalarImage read_grid_csv(std::istream& is);
void write_grid_csv(std::ostream& os, const ScalarImage& img);
void write_pgm_ascii(std::ostream& os, const ScalarImage& img, int maxval = 255);

/// Dispatches on the leading magic ("P2"/"P5") and falls back to the grid CSV format.
[[nodiscard]] ScalarImage load_image(const std::filesystem::path& path);

void write_field_csv(std::ostream& os, const OrientationField& field);
void write_config_points_csv(std::ostream& os, const std::vector<ConfigPoint>& points);

/// Writes text to a file, throwing std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace se2geo::io
