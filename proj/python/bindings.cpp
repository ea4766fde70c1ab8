// Python bindings for the moment matrices, projections and study drivers.

#include "pndg/basis.hpp"
#include "pndg/config.hpp"
#include "pndg/errors.hpp"
#include "pndg/harmonics.hpp"
#include "pndg/study.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pndg;

namespace {

Outflow parse_outflow(const std::string& name) {
  if (name == "left") return Outflow::left;
  if (name == "right") return Outflow::right;
  if (name == "none") return Outflow::none;
  throw InputError("outflow must be left, right or none, got '" + name + "'");
}

py::dict row_to_dict(const ErrorRow& r) {
  py::dict d;
  d["d"] = r.dim;
  d["N"] = r.moment_order;
  d["k"] = r.degree;
  d["eps"] = r.eps;
  d["cells"] = r.cells;
  d["h"] = r.h;
  d["err_l2"] = r.errors.l2;
  d["err_q"] = r.errors.q;
  d["err_triple"] = r.errors.triple;
  d["eoc_l2"] = r.eoc_l2;
  d["wall_ms"] = r.wall_ms;
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["max_higher_moment_over_eps"] = r.higher_moments_over_eps;
  d["first_moment_l2"] = r.first_moment;
  d["oracle_max_higher_moment_over_eps"] = r.oracle_higher_moments_over_eps;
  return d;
}

py::list rows_to_list(const ErrorReport& report) {
  py::list out;
  for (const auto& r : report.rows) out.append(row_to_dict(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(_pndg, m) {
  m.doc() = "P_N discontinuous Galerkin solver for scaled radiative transfer";
  m.attr("__version__") = PNDG_VERSION;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.def("gauss_legendre", &gauss_legendre, py::arg("points"));
  m.def(
      "sphere_quadrature",
      [](int order) {
        const auto q = sphere_quadrature(order);
        return py::make_tuple(q.nodes, q.weights);
      },
      py::arg("order"), "Nodes and weights of the sphere rule exact to degree 2N+2.");
  m.def(
      "eval_basis", [](const Vec3& omega, int order) { return eval_basis(omega, MomentBasis(order)); },
      py::arg("omega"), py::arg("order"), "Real spherical harmonics m(omega) up to degree N.");
  m.def(
      "moment_matrices",
      [](int order) {
        const auto mm = moment_matrices(MomentBasis(order));
        py::dict d;
        d["A"] = std::vector<Eigen::MatrixXd>(mm.a.begin(), mm.a.end());
        d["abs_A"] = std::vector<Eigen::MatrixXd>(mm.abs_a.begin(), mm.abs_a.end());
        d["eigenvalues"] = std::vector<Eigen::VectorXd>(mm.eigenvalues.begin(), mm.eigenvalues.end());
        d["eigenvectors"] = std::vector<Eigen::MatrixXd>(mm.eigenvectors.begin(), mm.eigenvectors.end());
        return d;
      },
      py::arg("order"), "A(1..3), |A(1..3)| and their eigendecompositions.");
  m.def(
      "verify_moment_matrices",
      [](int order, int samples, std::uint64_t seed) {
        py::list out;
        for (const auto& c : verify_moment_matrices(order, samples, seed)) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["limit"] = c.limit;
          d["pass"] = c.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("order"), py::arg("samples") = 100, py::arg("seed") = 20240611);
  m.def("scattering_q", [](double sigma_t, double sigma_a, double eps, int order) {
    return scattering_q(sigma_t, sigma_a, eps, (order + 1) * (order + 1)).q;
  }, py::arg("sigma_t"), py::arg("sigma_a"), py::arg("eps"), py::arg("order"));

  m.def(
      "radau_project",
      [](const std::function<double(double)>& f, double lower, double upper, int degree, const std::string& outflow) {
        return radau_project(f, Interval{lower, upper}, degree, parse_outflow(outflow));
      },
      py::arg("f"), py::arg("lower"), py::arg("upper"), py::arg("degree"), py::arg("outflow") = "right",
      "Orthonormal Legendre coefficients of the one-sided Radau projection.");
  m.def(
      "evaluate_interval",
      [](const Eigen::VectorXd& coeffs, double lower, double upper, double x) {
        return evaluate_interval(coeffs, Interval{lower, upper}, x);
      },
      py::arg("coeffs"), py::arg("lower"), py::arg("upper"), py::arg("x"));
  m.def("eoc", &eoc, py::arg("h"), py::arg("errors"));

  py::class_<StudyConfig>(m, "StudyConfig")
      .def(py::init<>())
      .def_readwrite("dim", &StudyConfig::dim)
      .def_property(
          "oracle", [](const StudyConfig& c) { return to_string(c.oracle); },
          [](StudyConfig& c, const std::string& s) { c.oracle = parse_oracle(s); })
      .def_property(
          "forcing", [](const StudyConfig& c) { return to_string(c.forcing); },
          [](StudyConfig& c, const std::string& s) { c.forcing = parse_forcing(s); })
      .def_readwrite("wave_vector", &StudyConfig::wave_vector)
      .def_readwrite("amplitude", &StudyConfig::amplitude)
      .def_readwrite("moment_order", &StudyConfig::moment_order)
      .def_readwrite("degree", &StudyConfig::degree)
      .def_readwrite("cells", &StudyConfig::cells)
      .def_readwrite("sigma_t", &StudyConfig::sigma_t)
      .def_readwrite("sigma_a", &StudyConfig::sigma_a)
      .def_readwrite("variation", &StudyConfig::variation)
      .def_readwrite("eps", &StudyConfig::eps)
      .def_readwrite("moment_orders", &StudyConfig::moment_orders)
      .def_readwrite("error_points", &StudyConfig::error_points)
      .def_readwrite("norms", &StudyConfig::norms)
      .def_property(
          "solver", [](const StudyConfig& c) { return to_string(c.solver.method); },
          [](StudyConfig& c, const std::string& s) { c.solver.method = parse_solve_method(s); })
      .def_property(
          "tolerance", [](const StudyConfig& c) { return c.solver.tolerance; },
          [](StudyConfig& c, double t) { c.solver.tolerance = t; })
      .def_property(
          "max_iterations", [](const StudyConfig& c) { return c.solver.max_iterations; },
          [](StudyConfig& c, int n) { c.solver.max_iterations = n; })
      .def_property(
          "restart", [](const StudyConfig& c) { return c.solver.restart; },
          [](StudyConfig& c, int n) { c.solver.restart = n; })
      .def("validate", &StudyConfig::validate)
      .def("__eq__", [](const StudyConfig& a, const StudyConfig& b) { return a == b; })
      .def("__repr__", [](const StudyConfig& c) { return "StudyConfig(\n" + write_config(c) + ")"; });

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("write_config", &write_config, py::arg("config"));

  m.def(
      "run_convergence",
      [](const StudyConfig& c, int threads) {
        ErrorReport report;
        {
          py::gil_scoped_release release;
          report = run_convergence(c, {threads});
        }
        return rows_to_list(report);
      },
      py::arg("config"), py::arg("threads") = 1, "One row per (eps, h) cell of the configuration.");
  m.def(
      "run_eps_sweep",
      [](const StudyConfig& c, int threads) {
        ErrorReport report;
        {
          py::gil_scoped_release release;
          report = run_eps_sweep(c, {threads});
        }
        return rows_to_list(report);
      },
      py::arg("config"), py::arg("threads") = 1);
  m.def(
      "run_n_sweep",
      [](const StudyConfig& c, int quadrature_order) {
        std::vector<NSweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_n_sweep(c, quadrature_order);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["eps"] = r.eps;
          d["N"] = r.moment_order;
          d["moment_error"] = r.moment_error;
          d["angular_error"] = r.angular_error;
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("quadrature_order") = 80);
}
