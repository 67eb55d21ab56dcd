// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
// Reference formulas are typed in here from their displayed form, independently
// of the library's own casebook expressions.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kahan/casebook.hpp"
#include "kahan/darboux.hpp"
#include "kahan/dynamics.hpp"
#include "kahan/scheme.hpp"
#include "kahan/text.hpp"

using namespace kahan;

namespace {

constexpr double kCertificateTol = 1e-8;
constexpr double kDriftTol = 1e-10;
constexpr double kMeasureTol = 1e-9;
constexpr double kSymplecticTol = 1e-8;
constexpr double kPalindromeTol = 1e-8;
constexpr double kUnitTol = 1e-7;
constexpr double kOrderTarget = 2.0;
constexpr double kOrderTol = 0.3;
constexpr double kGammaTol = 1e-12;

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void guarded(int id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Polynomial P(const std::string& s) { return parse_polynomial(s); }

// Difference-equation notation for the quartic oscillator: x = x1^(1), dx = x1^(0), tx = x1^(2).
const char* kAl = "(a*h^2)";
const char* kBe = "(b*h^2/3)";
const char* kGa = "(1 + c*h^2/3)";
const char* kDe = "(d*h^2)";

std::string qsub(std::string s) {
  const std::pair<std::string, std::string> reps[] = {{"AL", kAl}, {"BE", kBe}, {"GA", kGa}, {"DE", kDe}};
  for (const auto& [from, to] : reps)
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
      s.replace(pos, from.size(), to);
  return s;
}

// P1, P2 in (x, y) = (X, Y) placeholders.
std::string qrt_p1(const std::string& x, const std::string& y) {
  return "AL*" + x + "*" + y + " + BE*(" + x + " + " + y + ") + GA";
}
std::string qrt_p2(const std::string& x, const std::string& y) {
  const std::string xy = x + "*" + y;
  return "(AL*GA - BE^2)*(" + xy + ")^2 + (AL*DE + BE*(3 - GA))*" + xy + "*(" + x + " + " + y +
         ") + (BE*DE + GA*(3 - GA))*(" + x + "^2 + " + y + "^2) - (3 - GA)^2*" + xy + " + (3 - GA)*DE*(" + x +
         " + " + y + ") - DE^2";
}

const std::map<std::string, Rational> kQuarticValues = {
    {"a", 1}, {"b", 2}, {"c", 3}, {"d", 5}, {"h", Rational(1, 10)}};

Polynomial qrt_poly(const std::string& text) { return bind_parameters(P(qsub(text)), kQuarticValues); }

void criterion_1() {
  Timer t;
  const auto lv = lotka_volterra(Polynomial::param("alpha"));
  // (tx - x)/h = alpha/2 (x(1 - ty) + tx(1 - y)), (ty - y)/h = 1/2 (y(tx - 1) + ty(x - 1)), times h.
  const std::vector<Polynomial> displayed = {
      P("x1' - x1 - h*alpha/2*(x1*(1 - x2') + x1'*(1 - x2))"),
      P("x2' - x2 - h/2*(x2*(x1' - 1) + x2'*(x1 - 1))"),
  };
  const bool ok = lv.scheme.equations == displayed;
  const double s = t.seconds();
  report(1, "Lotka-Volterra reduction", ok && s < 1.0, fmt("exact identity, %.3f s (< 1 s)", s));
}

void criterion_2() {
  Timer t;
  const auto q = quartic_oscillator(QuarticParams::symbolic());
  const RationalFunction displayed(P(qsub("(3 - GA)*x1' - DE - (BE*x1' + GA)*x1")),
                                   P(qsub("BE*x1' + GA + (AL*x1' + BE)*x1")));
  const bool ok = q.map.forward.size() == 2 && q.map.forward[1] == displayed;
  const double s = t.seconds();
  report(2, "quartic map update", ok && s < 1.0, fmt("symbolic a,b,c,d,h cross-multiplied, %.3f s (< 1 s)", s));
}

struct QuarticNumeric {
  QuarticCase qc = quartic_oscillator(QuarticParams::rational(1, 2, 3, 5, Rational(1, 10)));
  Polynomial p1 = qrt_poly(qrt_p1("x1", "x1'"));
  Polynomial p2 = qrt_poly(qrt_p2("x1", "x1'"));
};

void criterion_3_4(const QuarticNumeric& qn) {
  Timer t;
  const auto certs = find_darboux(qn.qc.map, 4);
  const double s = t.seconds();
  std::vector<Polynomial> basis;
  for (const auto& c : certs) basis.push_back(c.p);
  const bool members = in_span(basis, qn.p1) && in_span(basis, qn.p2);
  report(3, "Darboux recovery", certs.size() == 2 && members && s < 60.0,
         "dimension " + std::to_string(certs.size()) + " (want 2), P1 and P2 in span: " + (members ? "yes" : "no") +
             fmt(", %.2f s (< 60 s)", s));

  bool exact = !certs.empty();
  for (const auto& c : certs) exact = exact && c.verified() && darboux_witness(qn.qc.map, c.p, c.cofactor).is_zero();

  // J * P - P o Phi at random float points; J and Phi from the map itself.
  const auto jac = jacobian(qn.qc.map).determinant;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int used = 0;
  while (used < 20) {
    const std::vector<double> xy = {u(rng), u(rng)};
    const Point<double> at = make_point(qn.qc.map, xy, {});
    double img[2];
    double jv = 0.0;
    try {
      img[0] = evaluate(qn.qc.map.forward[0], at);
      img[1] = evaluate(qn.qc.map.forward[1], at);
      jv = evaluate(jac, at);
    } catch (const Error&) {
      continue;
    }
    const Point<double> image = {{VarId::state(1, 0), img[0]}, {VarId::state(1, 1), img[1]}};
    for (const auto& c : certs) {
      const double lhs = jv * evaluate(c.p, at);
      const double rhs = evaluate(c.p, image);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    ++used;
  }
  report(4, "certificate exactness", exact && worst <= kCertificateTol,
         std::string("witnesses zero: ") + (exact ? "yes" : "no") + fmt(", max float relative defect %.3e", worst) +
             fmt(" (<= %.0e) at 20 points", kCertificateTol));
}

void criterion_5(const QuarticNumeric& qn) {
  const std::vector<double> start = {0.3, 0.31};
  const Orbit orbit = iterate(qn.qc.map, start, 0.1, 1000);
  const RationalFunction k(qn.p2, qn.p1);
  const auto value = [&](const std::vector<double>& s) {
    return evaluate(k, Point<double>{{VarId::state(1, 0), s[0]}, {VarId::state(1, 1), s[1]}});
  };
  const double k0 = value(orbit.points.front());
  double drift = 0.0;
  for (const auto& s : orbit.points) drift = std::max(drift, std::abs(value(s) - k0) / std::abs(k0));
  const bool ok = orbit.status == Orbit::Status::Complete && orbit.points.size() == 1001 && drift <= kDriftTol;
  report(5, "first-integral conservation", ok,
         fmt("max relative drift of P2/P1 over 1000 steps %.3e", drift) + fmt(" (<= %.0e)", kDriftTol));
}

void criterion_6() {
  const auto r = continuum_limit_check(quartic_pencil(QuarticParams::symbolic()));
  // Independent leading terms: y = x + h p with P1, P2 typed from the display.
  const Substitution sub = {{VarId::state(1, 1), RationalFunction(P("x1 + h*p"))}};
  const Polynomial p1 = substitute(P(qsub(qrt_p1("x1", "x1'"))), sub).num();
  const Polynomial p2 = substitute(P(qsub(qrt_p2("x1", "x1'"))), sub).num();
  const VarId h = VarId::param("h");
  const Polynomial four_h = P("4*(p^2/2 + a*x1^4/4 + b*x1^3/3 + c*x1^2/2 + d*x1)");
  const bool oracle = p1.coefficient_of(h, 0) == Polynomial(1) && p1.coefficient_of(h, 1).is_zero() &&
                      p2.coefficient_of(h, 0).is_zero() && p2.coefficient_of(h, 1).is_zero() &&
                      p2.coefficient_of(h, 2) == four_h;
  const bool agree = r.p1_h0 == p1.coefficient_of(h, 0) && r.p1_h1 == p1.coefficient_of(h, 1) &&
                     r.p2_h0 == p2.coefficient_of(h, 0) && r.p2_h1 == p2.coefficient_of(h, 1) &&
                     r.p2_h2 == p2.coefficient_of(h, 2);
  int held = 0;
  for (bool b : r.holds) held += b ? 1 : 0;
  report(6, "continuum limits", r.all() && oracle && agree,
         std::to_string(held) + "/5 assertions hold; independent expansion agrees: " + (agree && oracle ? "yes" : "no"));
}

void criterion_7() {
  const Pencil additive{P("1"), P("-beta^2*x1^2*x1'^2 + 4/3*beta*x1*x1'*(x1 + x1') + 4/3*(x1^2 + x1'^2)"
                                 " - 2/3*(4 + beta*delta)*x1*x1' + 4/3*delta*(x1 + x1')")};
  const Pencil reduced{P("1 + beta*(x1 + x1')"), P("-beta^2*x1^2*x1'^2 + 2*beta*x1*x1'*(x1 + x1')"
                                                   " + (beta*delta + 2)*(x1^2 + x1'^2) - 4*x1*x1'"
                                                   " + 2*delta*(x1 + x1') - delta^2")};
  const auto cmp = pencil_compare(additive, reduced);
  const bool ok = cmp.result == PencilComparison::Result::Different && !cmp.witness.empty();
  report(7, "pencil non-equivalence", ok,
         std::string(ok ? "different" : "equal") + ", joint rank " + std::to_string(cmp.joint_rank) +
             ", witness: " + cmp.witness);
}

void criterion_8() {
  const auto sym = beam_symmetric(BeamParams{});
  const Polynomial f4 = P("a/5*(__x1*_x1*x1*x1' + __x1*_x1*x1*x1'' + __x1*_x1*x1'*x1'' + __x1*x1*x1'*x1''"
                          " + _x1*x1*x1'*x1'')");
  const Polynomial f2 = P("b/10*(__x1*_x1 + __x1*x1 + __x1*x1' + __x1*x1'' + _x1*x1 + _x1*x1' + _x1*x1''"
                          " + x1*x1' + x1*x1'' + x1'*x1'')");
  const bool forms = sym.f4 == f4 && sym.f2 == f2 && sym.centred_matches();

  BeamParams numeric;
  numeric.a = 1;
  numeric.b = -2;
  numeric.c = Polynomial(Rational(3, 4));
  numeric.h = Polynomial(Rational(1, 10));
  const auto m = beam_measure_check(beam_symmetric(numeric), 20);
  const bool ok = forms && m.symmetry_identity && m.samples == 20 && m.max_error <= kMeasureTol;
  report(8, "beam symmetric scheme", ok,
         std::string("F4, F2 exact: ") + (forms ? "yes" : "no") + ", G = H: " + (m.symmetry_identity ? "yes" : "no") +
             fmt(", det ratio error with h^4 %.3e", m.max_error) + fmt(" (<= %.0e)", kMeasureTol) +
             fmt("; printed h^2 form gives %.3e", m.max_error_h2));
}

void criterion_9() {
  BeamParams p;
  p.alpha = BeamParams::symbolic_alpha();
  p.beta = BeamParams::symbolic_beta();
  const auto l = beam_lagrangian(p);
  const std::string a5 = "(1 - alpha0 - alpha1 - alpha2 - alpha3 - alpha4)";
  const std::string b3 = "(1 - beta0 - beta1 - beta2)";
  const Polynomial lf4 = P("a/5*(alpha0*(__x1*_x1^3 + 3*_x1*x1^2*x1' + x1'^3*x1'')"
                           " + alpha1*(3*_x1^2*x1^2 + 2*x1*x1'^3) + alpha2*(2*_x1^3*x1 + 3*x1^2*x1'^2)"
                           " + alpha3*(4*_x1*x1^3 + x1'^4) + alpha4*(_x1^4 + 4*x1^3*x1') + 5*" +
                           a5 + "*x1^4)");
  const Polynomial lf2 = P("b/3*(beta0*(__x1*_x1 + _x1*x1' + x1'*x1'') + beta1*(2*_x1*x1 + x1'^2)"
                           " + beta2*(_x1^2 + 2*x1*x1') + 3*" +
                           b3 + "*x1^2)");
  const Polynomial displayed = P("__x1 - 4*_x1 + 6*x1 - 4*x1' + x1''") - P("h^4") * (lf4 + lf2 + P("c"));
  const bool ok = l.euler_lagrange == displayed;
  report(9, "Lagrangian equivalence", ok, "h^4 * discrete Euler-Lagrange == stencil - h^4 (hatF4 + hatF2 + c), "
                                          "symbolic weights alpha0..4, beta0..2");
}

void criterion_10() {
  const std::pair<const char*, std::pair<std::array<Polynomial, 6>, std::array<Polynomial, 4>>> presets[] = {
      {"on-site", {BeamParams::on_site_alpha(), BeamParams::on_site_beta()}},
      {"uniform", {BeamParams::uniform_alpha(), BeamParams::uniform_beta()}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, w] : presets) {
    BeamParams p = BeamParams::normal_form(1, Rational(1, 4), Rational(1, 10));
    p.alpha = w.first;
    p.beta = w.second;
    const auto l = beam_lagrangian(p);
    const OstrogradskyTransform t(l.lagrangian);
    const auto r = symplecticity_check(l.map, t, 20);
    ok = ok && r.samples == 20 && r.defect <= kSymplecticTol;
    detail += std::string(detail.empty() ? "" : ", ") + name + fmt(" %.3e", r.defect);
  }
  report(10, "symplecticity", ok, "defect " + detail + fmt(" (<= %.0e) at 20 states", kSymplecticTol));
}

void criterion_11() {
  const double gamma = std::pow(6.0, 0.125);
  bool ok = true;
  std::string detail;
  for (auto kind : {BeamMapKind::Symmetric, BeamMapKind::Lagrangian}) {
    const auto a = beam_fixed_point_analysis(1, Rational(1, 4), Rational(1, 10), kind);
    int real = 0;
    int unit = 0;
    for (const auto& z : a.spectrum.roots) {
      if (std::abs(z.imag()) <= kUnitTol) ++real;
      else if (std::abs(std::abs(z) - 1.0) <= kUnitTol) ++unit;
    }
    const bool k_ok = std::abs(a.w_star - std::sqrt(1.5)) < 1e-12 && a.spectrum.palindromic_defect <= kPalindromeTol &&
                      a.pattern_ok && real == 2 && unit == 2 && a.reciprocal_defect <= kUnitTol &&
                      a.unit_defect <= kUnitTol && std::abs(a.continuous_gamma - gamma) <= kGammaTol;
    ok = ok && k_ok;
    detail += std::string(detail.empty() ? "" : "; ") + to_string(kind) +
              fmt(" palindromic %.1e", a.spectrum.palindromic_defect) + fmt(", |mu|-1 %.1e", a.unit_defect);
  }
  report(11, "fixed-point spectra", ok, detail + fmt("; continuous gamma %.7f", gamma));
}

void criterion_12() {
  const auto q = quartic_oscillator(QuarticParams::rational(1, 2, 3, 5, Rational(1, 10)));
  PolyOdeSystem sys = q.system;
  const std::vector<double> initial = {0.3, 0.1};
  const std::vector<double> hs = {0.1, 0.05, 0.025, 0.0125};
  const auto r = convergence_order(sys, initial, 1.0, hs, {});
  const bool ok = r.excluded.empty() && std::abs(r.slope - kOrderTarget) <= kOrderTol;
  report(12, "convergence order", ok, fmt("measured order %.3f", r.slope) + fmt(" (2.0 +- %.1f)", kOrderTol));
}

}  // namespace

int main() {
  guarded(1, "Lotka-Volterra reduction", criterion_1);
  guarded(2, "quartic map update", criterion_2);
  try {
    const QuarticNumeric qn;
    guarded(3, "Darboux recovery", [&] { criterion_3_4(qn); });
    guarded(5, "first-integral conservation", [&] { criterion_5(qn); });
  } catch (const std::exception& e) {
    report(3, "quartic setup", false, e.what());
  }
  guarded(6, "continuum limits", criterion_6);
  guarded(7, "pencil non-equivalence", criterion_7);
  guarded(8, "beam symmetric scheme", criterion_8);
  guarded(9, "Lagrangian equivalence", criterion_9);
  guarded(10, "symplecticity", criterion_10);
  guarded(11, "fixed-point spectra", criterion_11);
  guarded(12, "convergence order", criterion_12);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
