#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "se2geo/curve_analysis.hpp"
#include "se2geo/errors.hpp"
#include "se2geo/geodesic_bvp.hpp"
#include "se2geo/hamiltonian_flow.hpp"
#include "se2geo/io.hpp"
#include "se2geo/orientation_lift.hpp"
#include "se2geo/report.hpp"
#include "se2geo/se2_core.hpp"

namespace py = pybind11;
using namespace se2geo;

namespace {

py::array_t<double> curve_array(const GeodesicCurve& c) {
  py::array_t<double> arr({static_cast<py::ssize_t>(c.samples.size()), py::ssize_t{7}});
  auto a = arr.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& s = c.samples[i];
    const double row[7] = {s.t, s.x, s.y, s.theta, s.p1, s.p2, s.p3};
    for (py::ssize_t j = 0; j < 7; ++j) a(static_cast<py::ssize_t>(i), j) = row[j];
  }
  return arr;
}

py::tuple coords(const CoordVector& v) { return py::make_tuple(v[0], v[1], v[2]); }

py::dict lift_py(py::array_t<double, py::array::c_style | py::array::forcecast> image,
                 double spacing, double x0, double y0, double sigma, py::object eps_reg) {
  if (image.ndim() != 2) throw std::invalid_argument("image must be a 2-D array");
  const auto h = static_cast<int>(image.shape(0));
  const auto w = static_cast<int>(image.shape(1));
  std::vector<double> values(image.data(), image.data() + image.size());
  const ScalarImage img(w, h, spacing, std::move(values), x0, y0);
  const double eps = eps_reg.is_none() ? default_eps_reg(img) : eps_reg.cast<double>();
  const OrientationField field = lift(img, sigma, eps);

  py::array_t<double> theta({h, w});
  py::array_t<double> norm({h, w});
  py::array_t<bool> regular({h, w});
  auto t = theta.mutable_unchecked<2>();
  auto n = norm.mutable_unchecked<2>();
  auto r = regular.mutable_unchecked<2>();
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const auto& s = field.at(i, j);
      t(i, j) = s.regular ? s.theta : std::numeric_limits<double>::quiet_NaN();
      n(i, j) = s.grad_norm;
      r(i, j) = s.regular;
    }
  }
  py::dict out;
  out["theta"] = theta;
  out["grad_norm"] = norm;
  out["regular"] = regular;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sub-Riemannian geodesics on SE(2): Hamiltonian flow, shooting, orientation lift.";

  py::register_exception<NonFiniteState>(m, "NonFiniteState", PyExc_ArithmeticError);
  py::register_exception<ZeroEnergy>(m, "ZeroEnergy", PyExc_ValueError);
  py::register_exception<ZeroGradient>(m, "ZeroGradient", PyExc_ValueError);
  py::register_exception<IrregularPoint>(m, "IrregularPoint", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  static py::exception<NoConvergence> no_convergence(m, "NoConvergence", PyExc_RuntimeError);

  py::class_<ConfigPoint>(m, "ConfigPoint")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("theta"))
      .def_property_readonly("x", &ConfigPoint::x)
      .def_property_readonly("y", &ConfigPoint::y)
      .def_property_readonly("theta", &ConfigPoint::theta)
      .def("__eq__", [](const ConfigPoint& a, const ConfigPoint& b) { return a == b; })
      .def("__repr__", [](const ConfigPoint& q) {
        std::ostringstream ss;
        ss << "ConfigPoint(" << q.x() << ", " << q.y() << ", " << q.theta() << ")";
        return ss.str();
      });

  py::class_<MomentumFrame>(m, "MomentumFrame")
      .def(py::init<double, double, double>(), py::arg("p1"), py::arg("p2"), py::arg("p3"))
      .def_readwrite("p1", &MomentumFrame::p1)
      .def_readwrite("p2", &MomentumFrame::p2)
      .def_readwrite("p3", &MomentumFrame::p3)
      .def_property_readonly("energy", &MomentumFrame::energy);

  py::class_<PhasePoint>(m, "PhasePoint")
      .def(py::init([](const ConfigPoint& q, double px, double py_, double pt) {
             return PhasePoint{q, px, py_, pt};
           }),
           py::arg("q"), py::arg("p_x"), py::arg("p_y"), py::arg("p_theta"))
      .def_readwrite("q", &PhasePoint::q)
      .def_readwrite("p_x", &PhasePoint::p_x)
      .def_readwrite("p_y", &PhasePoint::p_y)
      .def_readwrite("p_theta", &PhasePoint::p_theta);

  py::class_<GeodesicCurve>(m, "GeodesicCurve")
      .def_property_readonly("samples", &curve_array,
                             "(n, 7) array of t, x, y, theta, p1, p2, p3")
      .def_property_readonly("energy", [](const GeodesicCurve& c) { return c.meta.energy_initial; })
      .def_property_readonly("dt", [](const GeodesicCurve& c) { return c.meta.dt; })
      .def_property_readonly("integrator", [](const GeodesicCurve& c) { return c.meta.integrator; })
      .def_property_readonly("warning", [](const GeodesicCurve& c) { return c.meta.warning; })
      .def_property_readonly("endpoint", &GeodesicCurve::endpoint)
      .def("max_energy_drift", &GeodesicCurve::max_energy_drift)
      .def("to_csv", [](const GeodesicCurve& c) {
        std::ostringstream ss;
        io::write_curve_csv(ss, c);
        return ss.str();
      })
      .def_static("from_csv", [](const std::string& text) {
        std::istringstream ss(text);
        return io::read_curve_csv(ss);
      })
      .def("__len__", [](const GeodesicCurve& c) { return c.samples.size(); });

  py::class_<ShootingParams>(m, "ShootingParams")
      .def(py::init<double, double, double>(), py::arg("sqrt_energy"), py::arg("gamma0"),
           py::arg("gamma_dot0"))
      .def_readwrite("sqrt_energy", &ShootingParams::sqrt_energy)
      .def_readwrite("gamma0", &ShootingParams::gamma0)
      .def_readwrite("gamma_dot0", &ShootingParams::gamma_dot0)
      .def("momenta", &ShootingParams::momenta);

  py::class_<BvpOptions>(m, "BvpOptions")
      .def(py::init<>())
      .def_readwrite("tol", &BvpOptions::tol)
      .def_readwrite("w_theta", &BvpOptions::w_theta)
      .def_readwrite("n_starts", &BvpOptions::n_starts)
      .def_readwrite("max_iter", &BvpOptions::max_iter)
      .def_readwrite("seed", &BvpOptions::seed)
      .def_readwrite("dt", &BvpOptions::dt);

  py::class_<BvpSolution>(m, "BvpSolution")
      .def_readonly("params", &BvpSolution::params)
      .def_readonly("curve", &BvpSolution::curve)
      .def_readonly("residual", &BvpSolution::residual)
      .def_readonly("energy", &BvpSolution::energy)
      .def_readonly("converged", &BvpSolution::converged);

  m.def("angle_wrap", &angle_wrap);
  m.def("angle_dist", &angle_dist);
  m.def("frame_at", [](const ConfigPoint& q) {
    const Frame f = frame_at(q);
    return py::make_tuple(coords(f.X), coords(f.Y), coords(f.Z));
  });
  m.def("contact_form_eval", [](const ConfigPoint& q, double vx, double vy, double vt) {
    return contact_form_eval(q, {vx, vy, vt});
  });
  m.def("to_momentum_frame", &to_momentum_frame);
  m.def("from_momentum_frame", &from_momentum_frame);
  m.def("hamiltonian", &hamiltonian);
  m.def("hamilton_rhs_reduced", [](const ConfigPoint& q, const MomentumFrame& mf) {
    const FlowDerivative d = hamilton_rhs_reduced({q, mf, 0.0});
    return py::make_tuple(d.x, d.y, d.theta, d.p1, d.p2, d.p3);
  });
  m.def("integrate",
        [](const ConfigPoint& q, const MomentumFrame& mf, double t_final, double dt) {
          return integrate({q, mf, 0.0}, t_final, dt);
        },
        py::arg("start"), py::arg("momenta"), py::arg("t_final"), py::arg("dt") = 1e-3);
  m.def("to_pendulum", [](const MomentumFrame& mf) {
    const PendulumState ps = to_pendulum(mf);
    return py::make_tuple(ps.gamma, ps.gamma_dot);
  });
  m.def("from_pendulum", [](double gamma, double gamma_dot, double energy) {
    return from_pendulum({gamma, gamma_dot}, energy);
  });
  m.def("endpoint_residual", &endpoint_residual, py::arg("actual"), py::arg("target"),
        py::arg("w_theta") = 1.0);
  m.def("shoot", &shoot, py::arg("start"), py::arg("params"), py::arg("dt") = 1e-3);
  m.def(
      "solve_bvp",
      [](const ConfigPoint& a, const ConfigPoint& b, const BvpOptions& opt) {
        try {
          py::gil_scoped_release release;
          return solve_bvp(a, b, opt);
        } catch (const NoConvergence& e) {
          no_convergence(e.what());
          throw py::error_already_set();
        }
      },
      py::arg("start"), py::arg("target"), py::arg("options") = BvpOptions{});
  m.def("geodesic_fan", &geodesic_fan, py::arg("start"), py::arg("energy"), py::arg("gamma0_list"),
        py::arg("gamma_dot0") = 0.0, py::arg("t_final") = 3.0, py::arg("dt") = 1e-3);
  m.def("theta_closed_form", &theta_closed_form);
  m.def("lift", &lift_py, py::arg("image"), py::arg("spacing") = 1.0, py::arg("x0") = 0.0,
        py::arg("y0") = 0.0, py::arg("sigma") = 0.0, py::arg("eps_reg") = py::none(),
        "Orientation map of a 2-D array indexed [row, col], row along y.");
  m.def("curve_report_json", &render_report, "CurveReport of a curve as a JSON document");
}
