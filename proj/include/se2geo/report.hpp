// JSON rendering of CurveReport.
//
// {
//   "schema": "se2geo.curve_report/1",
//   "curve": {"samples", "dt", "energy", "duration", "integrator", "warning"},
//   "aggregates": {"energy_functional_exact", "energy_functional_quadrature",
//                  "energy_functional_difference", "max_eta_residual",
//                  "max_curvature_mismatch", "energy_drift",
//                  "max_phase_reconstruction_error", "elastica_integral", "cusp_count"},
//   "samples": {"t", "k_sigma", "k_formula", "cusp", "eta_residual",
//               "sin_half_gamma", "c1", "c2", "phase_degenerate"}
// }
// Curvatures at cusps are null.

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "se2geo/curve_analysis.hpp"

namespace se2geo {

[[nodiscard]] nlohmann::ordered_json report_to_json(const GeodesicCurve& curve,
                                                    const CurveReport& report);

/// Pretty-printed document, newline-terminated.
[[nodiscard]] std::string render_report(const GeodesicCurve& curve);

}  // namespace se2geo
