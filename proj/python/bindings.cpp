#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dirbound/config.hpp"
#include "dirbound/kernels.hpp"
#include "dirbound/norms.hpp"
#include "dirbound/operators.hpp"
#include "dirbound/report.hpp"
#include "dirbound/runner.hpp"
#include "dirbound/symbol_io.hpp"

namespace py = pybind11;
using namespace dirbound;

namespace {

TruncatedPowerSeries series(const std::vector<Complex>& coeffs) {
  return TruncatedPowerSeries(coeffs);
}

py::dict sup_dict(const SupEstimate& s) {
  py::list trace;
  for (const auto& t : s.trace) trace.append(py::make_tuple(t.resolution, t.running_max));
  py::dict d;
  d["value"] = s.value;
  d["verdict"] = std::string(verdict_name(s.verdict));
  d["infinite"] = s.infinite;
  d["argmax"] = py::make_tuple(s.argmax_z.angle(), s.argmax_w.angle());
  d["trace"] = trace;
  d["interior_max"] = s.interior_max;
  d["interior_violations"] = s.interior_violations;
  return d;
}

py::dict norm_dict(const NormResult& r) {
  py::list trace;
  for (const auto& t : r.trace) {
    trace.append(py::make_tuple(t.size.radial_count, t.size.angular_count, t.value));
  }
  py::dict d;
  d["value"] = r.value_sq;
  d["method"] = std::string(method_name(r.method));
  d["rel_error_estimate"] = r.rel_error_estimate;
  d["trace"] = trace;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dirbound, m) {
  m.doc() = "Dirichlet-type norms, de Branges-Rovnyak kernels and composition bounds";

  py::register_exception<Error>(m, "DirboundError", PyExc_ValueError);

  py::class_<SymbolSpec>(m, "Symbol")
      .def_static("identity", &SymbolSpec::identity)
      .def_static("rotation", &SymbolSpec::rotation, py::arg("angle"))
      .def_static("mobius", &SymbolSpec::mobius, py::arg("a"), py::arg("rotation") = 0.0)
      .def_static("monomial", &SymbolSpec::monomial, py::arg("k"))
      .def_static("blaschke", &SymbolSpec::blaschke, py::arg("zeros"), py::arg("rotation") = 0.0)
      .def_static(
          "polynomial",
          [](std::vector<Complex> c) {
            return verify_self_map(SymbolSpec::polynomial(std::move(c))).symbol;
          },
          py::arg("coeffs"), "Polynomial symbol, verified as a self-map of the disc.")
      .def_static(
          "from_json", [](const std::string& text) { return symbol_from_json(nlohmann::json::parse(text)); },
          py::arg("text"))
      .def("to_json", [](const SymbolSpec& s) { return symbol_to_json(s).dump(); })
      .def_property_readonly("type", [](const SymbolSpec& s) { return std::string(s.type_name()); })
      .def("__call__", [](const SymbolSpec& s, Complex z) { return eval_symbol(s, z); })
      .def("derivative", [](const SymbolSpec& s, Complex z) { return eval_symbol_deriv(s, z); })
      .def("__repr__", [](const SymbolSpec& s) { return "Symbol(" + describe_symbol(s) + ")"; });

  m.def(
      "validate_params",
      [](double sigma, double tau, double beta) {
        const WeightParams w = validate_params(sigma, tau, beta);
        return py::make_tuple(w.p_dirichlet(), w.q_exponent());
      },
      py::arg("sigma"), py::arg("tau"), py::arg("beta"), "Returns (p, q) or raises E_PARAM.");
  m.def(
      "validate_main_theorem_params",
      [](double sigma, double beta) {
        const WeightParams w = validate_main_theorem_params(sigma, beta);
        return py::make_tuple(w.p_dirichlet(), w.q_exponent());
      },
      py::arg("sigma"), py::arg("beta"));

  m.def(
      "dirichlet_norm_sq",
      [](const std::vector<Complex>& coeffs, double p, const std::string& method) {
        if (method == "coefficient") return norm_dict(dirichlet_norm_sq_coeff(series(coeffs), p));
        if (method == "quadrature") {
          return norm_dict(dirichlet_norm_sq_quad(DiscFunction::from_series(series(coeffs)), p));
        }
        throw Error(ErrorCode::kParam, "method must be 'coefficient' or 'quadrature'");
      },
      py::arg("coeffs"), py::arg("p"), py::arg("method") = "coefficient");

  m.def(
      "double_integral",
      [](const std::vector<Complex>& coeffs, double sigma, double tau, double beta) {
        return norm_dict(double_integral_functional(DiscFunction::from_series(series(coeffs)),
                                                    validate_params(sigma, tau, beta)));
      },
      py::arg("coeffs"), py::arg("sigma"), py::arg("tau"), py::arg("beta"));

  m.def(
      "equivalence_ratio",
      [](const std::vector<Complex>& coeffs, double sigma, double tau, double beta) {
        return equivalence_ratio(DiscFunction::from_series(series(coeffs)),
                                 validate_params(sigma, tau, beta))
            .ratio;
      },
      py::arg("coeffs"), py::arg("sigma"), py::arg("tau"), py::arg("beta"));

  m.def("kernel", [](const SymbolSpec& phi, Complex z, Complex w) { return eval_kernel(phi, z, w); },
        py::arg("phi"), py::arg("z"), py::arg("w"));

  m.def(
      "estimate_sup",
      [](const SymbolSpec& phi, std::uint64_t seed) {
        SupSettings s;
        s.seed = seed;
        return sup_dict(estimate_sup(phi, s));
      },
      py::arg("phi"), py::arg("seed") = 0);

  m.def(
      "rank_check",
      [](const SymbolSpec& phi) {
        const RankReport r = rank_sufficiency_check(phi);
        py::list angles;
        for (const auto& p : r.contact.points) angles.append(p.angle());
        py::dict d;
        d["verdict"] = std::string(verdict_name(r.verdict));
        d["full_circle"] = r.contact.full_circle;
        d["contact_angles"] = angles;
        d["min_deriv_modulus"] = r.min_deriv_modulus;
        d["note"] = r.note;
        return d;
      },
      py::arg("phi"));

  m.def(
      "bound_check",
      [](const std::vector<std::vector<Complex>>& family, const SymbolSpec& phi, double sigma,
         double beta) {
        std::vector<TruncatedPowerSeries> f;
        for (const auto& c : family) f.push_back(series(c));
        const BoundCheckReport rep = bound_check(f, phi, sigma, beta);
        py::list rows;
        for (const BoundRow& r : rep.rows) {
          py::dict d;
          d["ratio"] = r.ratio;
          d["ratio_previous"] = r.ratio_previous;
          d["f_norm_sq"] = r.f_norm_sq;
          d["composed_norm_sq"] = r.composed.value_sq;
          d["pointwise_violations"] = r.pointwise_violations;
          rows.append(d);
        }
        py::dict out;
        out["p"] = rep.p;
        out["q"] = rep.q;
        out["sup"] = sup_dict(rep.sup);
        out["rows"] = rows;
        return out;
      },
      py::arg("family"), py::arg("phi"), py::arg("sigma"), py::arg("beta"));

  m.def(
      "run",
      [](const std::string& command, const std::string& config_text) {
        const RunConfig cfg = parse_config(config_text, command_from_name(command));
        const RunResult r = run(cfg);
        return py::make_tuple(r.exit_code, to_csv(r.report.rows), report_to_json(r.report).dump());
      },
      py::arg("command"), py::arg("config"),
      "Runs one experiment; returns (exit_code, csv_text, trace_json_text).");
}
