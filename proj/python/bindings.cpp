#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kahan/casebook.hpp"
#include "kahan/config.hpp"
#include "kahan/darboux.hpp"
#include "kahan/dynamics.hpp"
#include "kahan/run.hpp"
#include "kahan/scheme.hpp"
#include "kahan/text.hpp"

namespace py = pybind11;
using namespace kahan;

namespace {

using TextParams = std::map<std::string, std::string>;

std::map<std::string, Rational> exact_params(const TextParams& params) {
  std::map<std::string, Rational> out;
  for (const auto& [k, v] : params) out[k] = parse_rational(v);
  return out;
}

PolyOdeSystem make_system(int order, const std::vector<std::string>& rhs, const TextParams& params) {
  PolyOdeSystem sys{order, static_cast<int>(rhs.size()), {}};
  const auto values = exact_params(params);
  for (const auto& r : rhs) sys.rhs.push_back(bind_parameters(parse_polynomial(r), values));
  sys.validate();
  return sys;
}

std::vector<std::string> discretize_text(int order, const std::vector<std::string>& rhs, const TextParams& params) {
  std::vector<std::string> out;
  for (const auto& e : discretize(make_system(order, rhs, params)).equations) out.push_back(to_string(e));
  return out;
}

BirationalMap bound_map(int order, const std::vector<std::string>& rhs, const TextParams& params,
                        const std::string& h) {
  auto values = exact_params(params);
  values[kStepParam] = parse_rational(h);
  return bind_parameters(solve_forward(discretize(make_system(order, rhs, params))), values);
}

py::dict orbit_dict(const Orbit& o) {
  py::dict d;
  d["h"] = o.h;
  d["points"] = o.points;
  d["status"] = o.status == Orbit::Status::Complete ? "complete" : "singular";
  d["singular_step"] = o.singular_step;
  d["message"] = o.message;
  return d;
}

py::dict orbit_text(int order, const std::vector<std::string>& rhs, const std::vector<double>& window,
                    const std::string& h, int steps, const TextParams& params) {
  const auto m = bound_map(order, rhs, params, h);
  return orbit_dict(iterate(m, window, to_double(parse_rational(h)), steps));
}

std::vector<std::pair<std::string, std::string>> darboux_text(int order, const std::vector<std::string>& rhs,
                                                              const std::string& h, int maxdeg,
                                                              const TextParams& params) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : find_darboux(bound_map(order, rhs, params, h), maxdeg))
    out.emplace_back(to_string(c.p), to_string(c.cofactor));
  return out;
}

RunConfig config_from(const std::optional<std::string>& preset, const std::optional<std::string>& config) {
  if (preset && config) throw Error(ErrorCode::ValidationError, "give either preset or config, not both");
  if (preset) return preset_config(*preset);
  if (config) return parse_config(*config);
  throw Error(ErrorCode::ValidationError, "give a preset name or config text");
}

std::string run_text(const std::string& command, const std::optional<std::string>& preset,
                     const std::optional<std::string>& config, const std::filesystem::path& out) {
  const auto cmd = parse_command(command);
  if (!cmd) throw Error(ErrorCode::ValidationError, "unknown command '" + command + "'");
  return run(*cmd, config_from(preset, config), out).text;
}

py::dict beam_spectrum(const std::string& eps, const std::string& delta, const std::string& h,
                       const std::string& kind) {
  BeamMapKind k;
  if (kind == "symmetric") k = BeamMapKind::Symmetric;
  else if (kind == "lagrangian") k = BeamMapKind::Lagrangian;
  else throw Error(ErrorCode::ValidationError, "kind must be 'symmetric' or 'lagrangian'");
  const auto a = beam_fixed_point_analysis(parse_rational(eps), parse_rational(delta), parse_rational(h), k);
  py::dict d;
  d["w_star"] = a.w_star;
  std::vector<double> fixed;
  for (const auto& f : a.fixed_points) fixed.push_back(f.w);
  d["fixed_points"] = fixed;
  d["char_poly"] = a.spectrum.char_poly;
  d["roots"] = a.spectrum.roots;
  d["palindromic_defect"] = a.spectrum.palindromic_defect;
  d["reciprocal_defect"] = a.reciprocal_defect;
  d["unit_defect"] = a.unit_defect;
  d["pattern_ok"] = a.pattern_ok;
  d["continuous_gamma"] = a.continuous_gamma;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symmetrized Kahan discretizations of polynomial ODEs";

  py::register_exception<Error>(m, "KahanError", PyExc_RuntimeError);

  py::class_<Polynomial>(m, "Polynomial")
      .def(py::init([](const std::string& text) { return parse_polynomial(text); }), py::arg("text"))
      .def("__str__", [](const Polynomial& p) { return to_string(p); })
      .def("__repr__", [](const Polynomial& p) { return "Polynomial('" + to_string(p) + "')"; })
      .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
      .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
      .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
      .def("__neg__", [](const Polynomial& a) { return -a; })
      .def("__pow__", [](const Polynomial& a, unsigned e) { return a.pow(e); })
      .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
      .def("total_degree", &Polynomial::total_degree)
      .def("shifted", &Polynomial::shifted, py::arg("by"))
      .def(
          "derivative",
          [](const Polynomial& p, const std::string& var) {
            const Polynomial v = parse_polynomial(var);
            if (v.size() != 1 || v.total_degree() != 1 || v.leading().second != 1)
              throw Error(ErrorCode::ValidationError, "'" + var + "' is not a single variable");
            return p.derivative(v.leading().first.factors().front().first);
          },
          py::arg("var"))
      .def(
          "evaluate",
          [](const Polynomial& p, const TextParams& values) {
            Point<Rational> at;
            for (const auto& [k, v] : values) {
              const Polynomial var = parse_polynomial(k);
              if (var.size() != 1 || var.total_degree() != 1)
                throw Error(ErrorCode::ValidationError, "'" + k + "' is not a single variable");
              at[var.leading().first.factors().front().first] = parse_rational(v);
            }
            return to_string(evaluate(p, at));
          },
          py::arg("values"), "Exact value as a rational string; keys are variable names, values rational strings.");

  m.def("symmetrize", [](const std::string& p, int order) { return to_string(symmetrize(parse_polynomial(p), order)); },
        py::arg("polynomial"), py::arg("order"));
  m.def("discretize", &discretize_text, py::arg("order"), py::arg("rhs"), py::arg("params") = TextParams{},
        "Implicit scheme equations (step h kept symbolic).");
  m.def("orbit", &orbit_text, py::arg("order"), py::arg("rhs"), py::arg("window"), py::arg("h"), py::arg("steps"),
        py::arg("params") = TextParams{});
  m.def("darboux", &darboux_text, py::arg("order"), py::arg("rhs"), py::arg("h"), py::arg("maxdeg"),
        py::arg("params") = TextParams{}, "Basis of Darboux polynomials with the Jacobian cofactor.");
  m.def("run", &run_text, py::arg("command"), py::arg("preset") = py::none(), py::arg("config") = py::none(),
        py::arg("out") = std::filesystem::path("."), "Runs a CLI command and returns the report text.");
  m.def("beam_spectrum", &beam_spectrum, py::arg("eps"), py::arg("delta"), py::arg("h"),
        py::arg("kind") = "symmetric");
  m.attr("presets") = kPresets;
}
