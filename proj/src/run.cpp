#include "kahan/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kahan/casebook.hpp"
#include "kahan/darboux.hpp"
#include "kahan/text.hpp"

namespace kahan {

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string var_label(const VarId& v) { return "x" + std::to_string(v.component) + "_" + std::to_string(v.shift); }

Polynomial bound(const Polynomial& p, const std::map<std::string, Rational>& values) {
  return bind_parameters(p, values);
}

std::map<std::string, Rational> all_values(const RunConfig& c) {
  auto v = c.params;
  v[kStepParam] = c.h;
  return v;
}

BeamParams beam_params(const RunConfig& c) {
  BeamParams p;
  p.a = Polynomial(c.params.at("a"));
  p.b = Polynomial(c.params.at("b"));
  p.c = Polynomial(c.params.at("c"));
  p.h = Polynomial(c.h);
  if (!c.alpha.empty())
    for (std::size_t j = 0; j < 6; ++j) p.alpha[j] = Polynomial(c.alpha[j]);
  if (!c.beta.empty())
    for (std::size_t j = 0; j < 4; ++j) p.beta[j] = Polynomial(c.beta[j]);
  return p;
}

BeamParams beam_params_symbolic_weights(const RunConfig& c, bool symbolic_load) {
  BeamParams p = beam_params(c);
  if (symbolic_load) {
    p.a = Polynomial::param("a");
    p.b = Polynomial::param("b");
    p.c = Polynomial::param("c");
    p.h = Polynomial::param(kStepParam);
  }
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path.string());
  out << text;
}

// ------------------------------------------------------------------ sections

void section(std::ostringstream& os, const std::string& title) { os << "\n== " << title << " ==\n"; }

void describe_system(std::ostringstream& os, const RunConfig& c, const PreparedSystem& s) {
  section(os, "system");
  os << "case: " << s.title << "\n";
  os << "order: " << s.system.order << ", dimension: " << s.system.dim << "\n";
  os << "h: " << to_string(c.h) << "\n";
  for (const auto& [name, value] : c.params) os << "param " << name << " = " << to_string(value) << "\n";
  for (int i = 0; i < s.system.dim; ++i)
    os << "d^" << s.system.order << " x" << i + 1 << "/dt^" << s.system.order << " = "
       << to_string(s.system.rhs[static_cast<std::size_t>(i)]) << "\n";
}

void describe_scheme(std::ostringstream& os, const RunConfig& c, const PreparedSystem& s) {
  section(os, "scheme");
  for (std::size_t i = 0; i < s.scheme.equations.size(); ++i)
    os << "E" << i + 1 << " = " << to_string(s.scheme.equations[i]) << "\n";
  section(os, "map");
  if (s.map.has_symbolic()) {
    const std::size_t n = static_cast<std::size_t>(s.map.dim);
    for (std::size_t i = s.map.forward.size() - n; i < s.map.forward.size(); ++i)
      os << "forward " << to_string(s.map.state[i].shifted(1)) << " = " << to_string(s.map.forward[i]) << "\n";
    for (std::size_t i = 0; i < n; ++i)
      os << "backward " << to_string(s.map.state[i].shifted(-1)) << " = " << to_string(s.map.backward[i]) << "\n";
  } else {
    os << "symbolic solve skipped (dimension > 3); the map is evaluated by a linear solve per step\n";
  }

  // Exact comparisons against the reference formulas, with symbolic parameters.
  if (c.preset == "lv") {
    const auto lv = lotka_volterra(Polynomial::param("alpha"));
    os << "reference Kahan scheme (symbolic alpha, h): " << yes_no(lv.matches_expected()) << "\n";
  } else if (c.preset == "quartic") {
    const auto q = quartic_oscillator(QuarticParams::symbolic());
    os << "reference second-order update (symbolic a, b, c, d, h): " << yes_no(q.update_matches()) << "\n";
    os << "reference Jacobian determinant: " << yes_no(q.jacobian_matches()) << "\n";
  } else if (c.preset == "weierstrass") {
    const auto w = kahan_weierstrass(Polynomial::param("b"), Polynomial::param("d"));
    os << "momentum elimination gives the additive form (symbolic b, d, h): " << yes_no(w.elimination_matches())
       << "\n";
  } else if (c.preset == "beam-sym") {
    const auto b = beam_symmetric(beam_params_symbolic_weights(c, true));
    os << "quartic terms F4 match: " << yes_no(b.f4_matches()) << "\n";
    os << "quadratic terms F2 match: " << yes_no(b.f2_matches()) << "\n";
    os << "centred equation match: " << yes_no(b.centred_matches()) << "\n";
  } else if (c.preset == "beam-lag") {
    BeamParams p = beam_params_symbolic_weights(c, true);
    p.alpha = BeamParams::symbolic_alpha();
    p.beta = BeamParams::symbolic_beta();
    const auto l = beam_lagrangian(p);
    os << "Euler-Lagrange expression matches hat-F4, hat-F2 (symbolic weights): " << yes_no(l.matches_expected())
       << "\n";
  }
}

struct OrbitRun {
  Orbit orbit;
  std::vector<std::string> labels;
};

OrbitRun run_orbit(const RunConfig& c, const PreparedSystem& s) {
  OrbitRun r;
  const auto window = initial_window(c, s);
  r.orbit = iterate(s.map, window, to_double(c.h), c.steps);
  for (const auto& v : s.map.state) r.labels.push_back(var_label(v));
  return r;
}

void describe_orbit(std::ostringstream& os, const RunConfig& c, const PreparedSystem& s, const OrbitRun& r) {
  section(os, "orbit");
  os << "initial window:";
  for (double v : r.orbit.points.front()) os << " " << format_double(v);
  os << (c.ode_initial.empty() ? "" : " (seeded from ode data by the reference solver)") << "\n";
  os << "steps requested: " << c.steps << ", completed: " << r.orbit.points.size() - 1 << "\n";
  if (r.orbit.status == Orbit::Status::Singular) {
    os << "status: singular at step " << r.orbit.singular_step << " (" << r.orbit.message << ")\n";
  } else {
    os << "status: complete\n";
  }
  os << "final state:";
  for (double v : r.orbit.points.back()) os << " " << format_double(v);
  os << "\n";
  os << "max relative scheme residual: " << sci(scheme_residual(s.scheme, r.orbit, {})) << "\n";
  if (s.first_integral) {
    os << "conserved quantity " << s.integral_name << " = " << to_string(*s.first_integral) << "\n";
    os << "relative drift of " << s.integral_name << ": " << sci(relative_drift(*s.first_integral, s.map, r.orbit))
       << "\n";
  }
}

void describe_darboux(std::ostringstream& os, const RunConfig& c, const PreparedSystem& s, const OrbitRun* orbit) {
  const int maxdeg = c.darboux_maxdeg >= 0 ? c.darboux_maxdeg : 2;
  section(os, "darboux");
  os << "degree bound: " << maxdeg << (s.map.state_size() > 2 ? " (experimental above two state variables)" : "")
     << "\n";
  const auto certs = find_darboux(s.map, maxdeg);
  os << "cofactor J = " << to_string(certs.empty() ? jacobian(s.map).determinant : certs.front().cofactor) << "\n";
  os << "solution space dimension: " << certs.size() << "\n";
  for (std::size_t i = 0; i < certs.size(); ++i) {
    os << "P" << i + 1 << " = " << to_string(certs[i].p) << "  (witness zero: " << yes_no(certs[i].verified())
       << ")\n";
    os << "  invariant form: " << invariant_measure(s.map, certs[i]).description << "\n";
  }
  if (c.preset == "quartic") {
    const auto q = quartic_pencil(QuarticParams::rational(c.params.at("a"), c.params.at("b"), c.params.at("c"),
                                                          c.params.at("d"), c.h));
    std::vector<Polynomial> basis;
    for (const auto& cert : certs) basis.push_back(cert.p);
    os << "reference P1 in span: " << yes_no(in_span(basis, q.p1)) << "\n";
    os << "reference P2 in span: " << yes_no(in_span(basis, q.p2)) << "\n";
  }
  if (certs.size() >= 2) {
    const auto fi = first_integral(s.map, certs[0], certs[1]);
    os << "first integral K = P2/P1 = " << to_string(fi.value) << "\n";
    os << "K(phi) = K exactly: " << yes_no(fi.invariance_witness.is_zero()) << "\n";
    if (orbit) os << "relative drift of K along the orbit: " << sci(relative_drift(fi.value, s.map, orbit->orbit)) << "\n";
  }
}

void describe_spectrum(std::ostringstream& os, const BeamFixedPointAnalysis& fa, const Rational& h) {
  os << "fixed points (constant windows):";
  for (const auto& f : fa.fixed_points)
    os << " " << format_double(f.w) << (f.exact ? " [exact residual " : " [residual ") << sci(f.residual) << "]";
  os << "\n";
  os << "w* = " << format_double(fa.w_star) << "\n";
  os << "characteristic polynomial:";
  for (double v : fa.spectrum.char_poly) os << " " << format_double(v);
  os << "\n";
  os << "palindromic defect: " << sci(fa.spectrum.palindromic_defect) << "\n";
  os << "  eigenvalue                         |lambda|   class\n";
  for (std::size_t i = 0; i < fa.spectrum.roots.size(); ++i) {
    const auto z = fa.spectrum.roots[i];
    const auto cls = fa.spectrum.classes[i];
    os << "  " << fixed(z.real(), 12) << (z.imag() < 0 ? " - " : " + ") << fixed(std::abs(z.imag()), 12) << "i  "
       << fixed(std::abs(z), 9) << "  "
       << (cls == SpectrumReport::RootClass::OnCircle ? "on circle"
                                                       : (cls == SpectrumReport::RootClass::Inside ? "inside" : "outside"))
       << "\n";
  }
  os << "real pair |l1*l2 - 1|: " << sci(fa.reciprocal_defect) << "\n";
  os << "complex pair max ||mu| - 1|: " << sci(fa.unit_defect) << "\n";
  os << "eigenvalue pattern (reciprocal real pair + unit-circle pair): " << yes_no(fa.pattern_ok) << "\n";
  os << "continuous gamma = (4 w* sqrt(delta))^(1/4) = " << format_double(fa.continuous_gamma) << "\n";
  os << "continuous multipliers exp(+-h gamma), exp(+-i h gamma) at h = " << to_string(h) << ":";
  for (const auto& m : fa.continuous_multipliers) os << " " << fixed(m.real(), 9) << (m.imag() < 0 ? "-" : "+") << fixed(std::abs(m.imag()), 9) << "i";
  os << "\n";
}

void describe_beam(std::ostringstream& os, const RunConfig& c, const PreparedSystem& s, const std::vector<double>& window,
                   bool fixed_point_required) {
  const BeamParams p = beam_params(c);
  const bool lagrangian = c.preset == "beam-lag";
  if (!lagrangian && c.measure) {
    section(os, "volume form");
    const auto r = beam_measure_check(beam_symmetric(p), c.samples, c.seed);
    os << "H = dF/dw^(4) = " << to_string(r.h_poly) << "\n";
    os << "G = dF/dw^(0) = " << to_string(r.g_poly) << "\n";
    os << "G(u1..u4) = H(u1..u4) exactly: " << yes_no(r.symmetry_identity) << "\n";
    os << "samples: " << r.samples << "\n";
    os << "max |det DPhi - (1 - h^4 G)/(1 - h^4 H)| (relative): " << sci(r.max_error) << "\n";
    os << "same with h^2 in place of h^4: " << sci(r.max_error_h2) << "\n";
  }
  if (lagrangian && c.symplectic) {
    section(os, "symplectic structure");
    const auto l = beam_lagrangian(p);
    const OstrogradskyTransform t(l.lagrangian);
    const auto r = symplecticity_check(s.map, t, c.samples, c.seed);
    os << "canonical variables: q1 = w^(0), q2 = w^(1), p1 = L1(w^(-1),w^(0),w^(1)) + L2(w^(-2),w^(-1),w^(0)), "
          "p2 = L2(w^(-1),w^(0),w^(1))\n";
    os << "symplectic defect max ||M^T Omega M - Omega||: " << sci(r.defect) << " over " << r.samples
       << " samples (" << r.resampled << " redrawn)\n";
    const auto contrast = symplecticity_check(beam_symmetric(p).map, t, c.samples, c.seed);
    os << "symmetric map in the same coordinates (contrast, no bound): " << sci(contrast.defect) << "\n";
    const auto st = t.forward(window);
    const auto back = t.inverse(st);
    double gap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) gap = std::max(gap, std::abs(back[i] - window[i]));
    os << "initial window (q1, q2, p1, p2) = " << format_double(st.q1) << ", " << format_double(st.q2) << ", "
       << format_double(st.p1) << ", " << format_double(st.p2) << "; round trip error " << sci(gap) << "\n";
  }
  if (c.spectra) {
    section(os, "fixed point spectrum");
    const Rational& a = c.params.at("a");
    const Rational eps = -c.params.at("b") / 2;
    const Rational delta = 1 - c.params.at("c");
    if (a != 1 || (eps != 1 && eps != -1)) {
      os << "parameters are not in the normal form a = 1, b = -2 eps, c = 1 - delta with eps = +-1; skipped\n";
      return;
    }
    os << "eps = " << to_string(eps) << ", delta = " << to_string(delta) << "\n";
    try {
      std::array<Polynomial, 6> al = p.alpha;
      std::array<Polynomial, 4> be = p.beta;
      const auto fa = beam_fixed_point_analysis(eps, delta, c.h,
                                                lagrangian ? BeamMapKind::Lagrangian : BeamMapKind::Symmetric, al, be);
      describe_spectrum(os, fa, c.h);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoRealFixedPoint || fixed_point_required) throw;
      os << "no real fixed point: " << e.what() << "\n";
    }
  }
}

void describe_convergence(std::ostringstream& os, const RunConfig& c, const PreparedSystem& s,
                          const std::vector<double>& window) {
  section(os, "convergence");
  std::vector<double> initial = c.ode_initial;
  if (initial.empty()) {
    // Position and a forward-difference velocity from the window.
    const std::size_t n = static_cast<std::size_t>(s.system.dim);
    initial.assign(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(n));
    for (int k = 1; k < s.system.order; ++k)
      for (std::size_t j = 0; j < n; ++j)
        initial.push_back(k == 1 ? (window[n + j] - window[j]) / to_double(c.h) : 0.0);
  }
  const double h = to_double(c.h);
  const std::vector<double> hs = {h, h / 2, h / 4, h / 8};
  const auto r = convergence_order(s.system, initial, 1.0, hs, {});
  os << "horizon T = 1, reference RK4 at dt = h_min/100 (Richardson check " << sci(r.oracle_richardson_error) << ")\n";
  for (std::size_t i = 0; i < r.hs.size(); ++i)
    os << "  h = " << format_double(r.hs[i]) << "  error = " << sci(r.errors[i]) << "\n";
  for (double x : r.excluded) os << "  h = " << format_double(x) << " excluded (singular step)\n";
  os << "measured order: " << fixed(r.slope, 3) << "\n";
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "discretize") return Command::Discretize;
  if (name == "orbit") return Command::Orbit;
  if (name == "darboux") return Command::Darboux;
  if (name == "analyze-beam") return Command::AnalyzeBeam;
  if (name == "report") return Command::Report;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Discretize:
      return "discretize";
    case Command::Orbit:
      return "orbit";
    case Command::Darboux:
      return "darboux";
    case Command::AnalyzeBeam:
      return "analyze-beam";
    case Command::Report:
      return "report";
  }
  return "?";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::AffineConstraintViolated:
    case ErrorCode::InvalidSystem:
    case ErrorCode::DegreeTooHigh:
    case ErrorCode::UnboundVariable:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

PreparedSystem prepare(const RunConfig& c) {
  validate(c);
  const auto values = all_values(c);
  PreparedSystem s;
  const Polynomial x = Polynomial::x(1);
  if (c.is_inline()) {
    s.title = "inline";
    s.system = {c.order, static_cast<int>(c.rhs.size()), {}};
    for (const auto& p : c.rhs) s.system.rhs.push_back(bound(p, values));
    s.scheme = discretize(s.system);
    for (auto& e : s.scheme.equations) e = bound(e, values);
    s.map = solve_forward(s.scheme);
  } else if (c.preset == "lv") {
    s.title = "Lotka-Volterra";
    auto lv = lotka_volterra(Polynomial(c.params.at("alpha")), Polynomial(c.h));
    s.system = lv.system;
    s.scheme = lv.scheme;
    s.map = lv.map;
  } else if (c.preset == "quartic") {
    s.title = "quartic oscillator";
    const auto p = QuarticParams::rational(c.params.at("a"), c.params.at("b"), c.params.at("c"), c.params.at("d"), c.h);
    auto q = quartic_oscillator(p);
    s.system = q.system;
    s.scheme = q.scheme;
    s.map = q.map;
    s.first_integral = RationalFunction(q.p2, q.p1);
    s.integral_name = "P2/P1";
  } else if (c.preset == "weierstrass") {
    s.title = "Kahan discretization of the Weierstrass equation (additive form)";
    const Polynomial b(c.params.at("b"));
    const Polynomial d(c.params.at("d"));
    auto w = kahan_weierstrass(b, d, Polynomial(c.h));
    s.system = {2, 1, {-(b * x * x) - d}};
    s.scheme = ImplicitScheme{2, 1, {w.additive_form.shifted(1)}};
    s.map = w.additive_map;
    s.first_integral = RationalFunction(w.pencil.p2);
    s.integral_name = "Q";
  } else if (c.preset == "beam-sym") {
    s.title = "nonlinear beam, symmetric discretization";
    auto b = beam_symmetric(beam_params(c));
    s.system = b.system;
    s.scheme = b.scheme;
    s.map = b.map;
  } else {
    s.title = "nonlinear beam, Lagrangian discretization";
    auto l = beam_lagrangian(beam_params(c));
    s.system = {4, 1, {Polynomial(c.params.at("a")) * x.pow(4) + Polynomial(c.params.at("b")) * x * x +
                       Polynomial(c.params.at("c"))}};
    s.scheme = l.scheme;
    s.map = l.map;
  }
  return s;
}

std::vector<double> initial_window(const RunConfig& c, const PreparedSystem& s) {
  if (c.ode_initial.empty()) return c.window;
  const ReferenceSolver ref(s.system, {});
  const double h = to_double(c.h);
  return seed_window(ref, s.system.order, s.system.dim, c.ode_initial, h, h / 100.0);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string orbit_csv(const Orbit& orbit, int order, int dim) {
  std::ostringstream os;
  os << "step";
  for (const auto& v : state_variables(order, dim)) os << "," << var_label(v);
  os << "\n";
  for (std::size_t k = 0; k < orbit.points.size(); ++k) {
    os << k;
    for (double v : orbit.points[k]) os << "," << format_double(v);
    os << "\n";
  }
  return os.str();
}

std::string phase_portrait_svg(const Orbit& orbit, std::pair<int, int> plot, const std::vector<std::string>& labels) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 480.0;
  constexpr double kMargin = 48.0;
  const bool single = !orbit.points.empty() && orbit.points.front().size() == 1;

  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < orbit.points.size(); ++k) {
    const auto& p = orbit.points[k];
    const double px = single ? static_cast<double>(k) : p[static_cast<std::size_t>(plot.first)];
    const double py = single ? p[0] : p[static_cast<std::size_t>(plot.second)];
    if (std::isfinite(px) && std::isfinite(py)) pts.emplace_back(px, py);
  }
  const std::string xl = single ? "step" : labels.at(static_cast<std::size_t>(plot.first));
  const std::string yl = single ? labels.at(0) : labels.at(static_cast<std::size_t>(plot.second));

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
     << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\" font-size=\"14\">" << xl
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
     << kHeight / 2 << ")\">" << yl << "</text>\n";
  if (pts.size() >= 2) {
    double x0 = pts[0].first, x1 = pts[0].first, y0 = pts[0].second, y1 = pts[0].second;
    for (const auto& [px, py] : pts) {
      x0 = std::min(x0, px);
      x1 = std::max(x1, px);
      y0 = std::min(y0, py);
      y1 = std::max(y1, py);
    }
    if (x1 - x0 <= 0.0) {
      x0 -= 0.5;
      x1 += 0.5;
    }
    if (y1 - y0 <= 0.0) {
      y0 -= 0.5;
      y1 += 0.5;
    }
    os << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 8 << "\" font-size=\"11\">" << xl << " in ["
       << format_double(x0) << ", " << format_double(x1) << "], " << yl << " in [" << format_double(y0) << ", "
       << format_double(y1) << "]</text>\n";
    const double sx = (kWidth - 2 * kMargin) / (x1 - x0);
    const double sy = (kHeight - 2 * kMargin) / (y1 - y0);
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) os << " ";
      os << fixed(kMargin + (pts[i].first - x0) * sx, 2) << "," << fixed(kHeight - kMargin - (pts[i].second - y0) * sy, 2);
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

double relative_drift(const RationalFunction& k, const BirationalMap& m, const Orbit& orbit) {
  if (orbit.points.empty()) return 0.0;
  const double k0 = evaluate(k, make_point(m, orbit.points.front(), {}));
  double worst = 0.0;
  for (const auto& p : orbit.points) worst = std::max(worst, std::abs(evaluate(k, make_point(m, p, {})) - k0));
  return k0 == 0.0 ? worst : worst / std::abs(k0);
}

Artifacts run(Command cmd, const RunConfig& c, const std::filesystem::path& out) {
  if (cmd == Command::AnalyzeBeam && !c.is_beam())
    throw Error(ErrorCode::ValidationError, "analyze-beam needs the beam-sym or beam-lag preset");
  const PreparedSystem s = prepare(c);
  Artifacts a;
  std::ostringstream os;
  os << "kahan " << to_string(cmd) << " report\n";
  describe_system(os, c, s);

  std::optional<OrbitRun> orbit;
  auto ensure_orbit = [&]() -> const OrbitRun& {
    if (!orbit) orbit = run_orbit(c, s);
    return *orbit;
  };
  auto emit_orbit_files = [&](const OrbitRun& r) {
    const auto csv = out / c.csv;
    const auto svg = out / c.svg;
    write_file(csv, orbit_csv(r.orbit, s.map.order, s.map.dim));
    write_file(svg, phase_portrait_svg(r.orbit, c.plot, r.labels));
    a.files.push_back(csv);
    a.files.push_back(svg);
  };

  switch (cmd) {
    case Command::Discretize:
      describe_scheme(os, c, s);
      break;
    case Command::Orbit: {
      const auto& r = ensure_orbit();
      describe_orbit(os, c, s, r);
      emit_orbit_files(r);
      break;
    }
    case Command::Darboux:
      describe_darboux(os, c, s, nullptr);
      break;
    case Command::AnalyzeBeam:
      describe_beam(os, c, s, initial_window(c, s), true);
      break;
    case Command::Report: {
      describe_scheme(os, c, s);
      const auto& r = ensure_orbit();
      describe_orbit(os, c, s, r);
      emit_orbit_files(r);
      if (c.darboux_maxdeg >= 0) describe_darboux(os, c, s, &r);
      if (c.is_beam()) describe_beam(os, c, s, r.orbit.points.front(), false);
      if (c.convergence) describe_convergence(os, c, s, r.orbit.points.front());
      break;
    }
  }
  a.text = os.str();
  const auto report = out / c.report;
  write_file(report, a.text);
  a.files.push_back(report);
  return a;
}

}  // namespace kahan
