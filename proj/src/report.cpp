#include "se2geo/report.hpp"

#include <cmath>

namespace se2geo {

namespace {

nlohmann::ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::ordered_json report_to_json(const GeodesicCurve& curve, const CurveReport& report) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema"] = "se2geo.curve_report/1";
  doc["curve"] = {{"samples", curve.samples.size()},
                  {"dt", curve.meta.dt},
                  {"energy", curve.meta.energy_initial},
                  {"duration", curve.duration()},
                  {"integrator", curve.meta.integrator},
                  {"warning", curve.meta.warning}};
  doc["aggregates"] = {
      {"energy_functional_exact", report.energy_functional.exact},
      {"energy_functional_quadrature", report.energy_functional.quadrature},
      {"energy_functional_difference", report.energy_functional.difference},
      {"max_eta_residual", report.max_eta_residual},
      {"max_curvature_mismatch", report.max_curvature_mismatch},
      {"energy_drift", report.energy_drift},
      {"max_phase_reconstruction_error", report.max_phase_reconstruction_error},
      {"elastica_integral", report.elastica_integral},
      {"cusp_count", report.cusp_count}};

  json t = json::array();
  json ks = json::array();
  json kf = json::array();
  json cusp = json::array();
  json eta = json::array();
  json phase = json::array();
  json c1 = json::array();
  json c2 = json::array();
  json degenerate = json::array();
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    t.push_back(curve.samples[i].t);
    ks.push_back(finite_or_null(report.k_sigma[i]));
    kf.push_back(finite_or_null(report.k_formula[i]));
    cusp.push_back(static_cast<bool>(report.cusp[i]));
    eta.push_back(report.eta_residual[i]);
    phase.push_back(report.phase[i].sin_half_gamma);
    c1.push_back(report.phase[i].c1);
    c2.push_back(report.phase[i].c2);
    degenerate.push_back(report.phase[i].degenerate);
  }
  doc["samples"] = {{"t", t},           {"k_sigma", ks},   {"k_formula", kf},
                    {"cusp", cusp},     {"eta_residual", eta}, {"sin_half_gamma", phase},
                    {"c1", c1},         {"c2", c2},        {"phase_degenerate", degenerate}};
  return doc;
}

std::string render_report(const GeodesicCurve& curve) {
  return report_to_json(curve, analyze_curve(curve)).dump(2) + "\n";
}

}  // namespace se2geo
