#pragma once

// Worked examples: Lotka-Volterra, the quartic oscillator, Kahan's method on
// the Weierstrass equation, and the two discretizations of the nonlinear beam
// w'''' = a w^4 + b w^2 + c.
//
// Parameters are Polynomials so the same constructor serves symbolic checks
// (pass Polynomial::param("a")) and numeric runs (pass Rational values).
// The step h enters every scheme through the parameter `h`; a non-symbolic
// h is substituted after discretization.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "kahan/darboux.hpp"
#include "kahan/dynamics.hpp"
#include "kahan/scheme.hpp"

namespace kahan {

using ParamBinding = std::map<std::string, Rational>;

/// Replaces the parameter `h` by the given polynomial.
Polynomial bind_step(const Polynomial& p, const Polynomial& h);

// ------------------------------------------------------------ Lotka-Volterra

struct LotkaVolterraCase {
  PolyOdeSystem system;
  ImplicitScheme scheme;
  /// The textbook Kahan scheme, multiplied through by h.
  ImplicitScheme expected;
  BirationalMap map;

  bool matches_expected() const;
};

/// x' = alpha x (1 - y), y' = y (x - 1).  Throws ValidationError for alpha = 0.
LotkaVolterraCase lotka_volterra(const Polynomial& alpha, const Polynomial& h = Polynomial::param(kStepParam));

// ------------------------------------------------------- quartic oscillator

struct QuarticParams {
  Polynomial a = Polynomial::param("a");
  Polynomial b = Polynomial::param("b");
  Polynomial c = Polynomial::param("c");
  Polynomial d = Polynomial::param("d");
  Polynomial h = Polynomial::param(kStepParam);

  static QuarticParams symbolic() { return {}; }
  static QuarticParams rational(const Rational& a, const Rational& b, const Rational& c, const Rational& d,
                                const Rational& h);

  Polynomial alpha() const;  // a h^2
  Polynomial beta() const;   // b h^2 / 3
  Polynomial gamma() const;  // 1 + c h^2 / 3
  Polynomial delta() const;  // d h^2
};

struct QuarticCase {
  QuarticParams params;
  PolyOdeSystem system;
  ImplicitScheme scheme;
  /// State (x, y) = (x1^(0), x1^(1)).
  BirationalMap map;
  /// Expected update for x1^(2) and Jacobian determinant in the same variables.
  RationalFunction expected_update;
  RationalFunction expected_jacobian;
  Polynomial p1;
  Polynomial p2;

  bool update_matches() const;
  bool jacobian_matches() const;
};

QuarticCase quartic_oscillator(const QuarticParams& p);

/// P1 and P2 of the quartic oscillator in x = x1^(0), y = x1^(1).
Pencil quartic_pencil(const QuarticParams& p);

/// True when conjugation by x -> -x leaves every forward component unchanged.
bool odd_symmetric(const BirationalMap& m);

struct ContinuumLimitReport {
  Polynomial p1_h0;
  Polynomial p1_h1;
  Polynomial p2_h0;
  Polynomial p2_h1;
  Polynomial p2_h2;
  /// 4H = 4 (p^2/2 + a x^4/4 + b x^3/3 + c x^2/2 + d x) with x = x1^(0).
  Polynomial four_h;
  std::array<bool, 5> holds{};
  /// |P2/(4 h^2) - H| at a=1, b=2, c=3, d=5, x=1/2, p=1/3, h=1/1000.
  double spot_check_error = 0.0;

  bool all() const;
};

/// Substitutes y = x + h p (p is the parameter `p`) into the quartic pencil
/// with symbolic a, b, c, d, h and inspects the low orders in h.
ContinuumLimitReport continuum_limit_check(const Pencil& quartic);

// ------------------------------------------------ Kahan on the Weierstrass ODE

struct WeierstrassCase {
  PolyOdeSystem system;  // x1' = x2, x2' = -b x1^2 - d
  ImplicitScheme scheme;
  BirationalMap first_order_map;
  /// Consistency condition of the scheme at windows (-1, 0) and (0, 1) with
  /// x2 eliminated; polynomial in x1^(-1), x1^(0), x1^(1).
  Polynomial relation;
  /// (x1^(1) + x1^(-1)) (3 beta x1^(0) + 2) - (4 x1^(0) - 2 delta).
  Polynomial additive_form;
  /// relation / additive_form when it divides exactly with a state-free quotient.
  std::optional<Polynomial> quotient;
  /// Second-order map from the additive form, state (x1^(0), x1^(1)).
  BirationalMap additive_map;
  /// lambda + Q for the additive map.
  Pencil pencil;

  bool elimination_matches() const { return quotient.has_value(); }
};

/// Throws ValidationError for b = 0.
WeierstrassCase kahan_weierstrass(const Polynomial& b, const Polynomial& d,
                                  const Polynomial& h = Polynomial::param(kStepParam));

/// The quartic pencil at alpha = 0, gamma = 1 written in beta, delta.
Pencil qrt_pencil_alpha0_gamma1(const Polynomial& beta, const Polynomial& delta);

// ------------------------------------------------------------------- beam

struct BeamParams {
  Polynomial a = Polynomial::param("a");
  Polynomial b = Polynomial::param("b");
  Polynomial c = Polynomial::param("c");
  Polynomial h = Polynomial::param(kStepParam);
  std::array<Polynomial, 6> alpha = {0, 0, 0, 0, 0, 1};
  std::array<Polynomial, 4> beta = {0, 0, 0, 1};

  /// Throws AffineConstraintViolated unless sum(alpha) = sum(beta) = 1 exactly.
  void validate() const;

  /// alpha_5 = beta_3 = 1 (on-site potential).
  static std::array<Polynomial, 6> on_site_alpha();
  static std::array<Polynomial, 4> on_site_beta();
  /// alpha_j = 1/6, beta_j = 1/4.
  static std::array<Polynomial, 6> uniform_alpha();
  static std::array<Polynomial, 4> uniform_beta();
  /// Free parameters alpha0..alpha4, beta0..beta2 with the last weight fixed
  /// by the affine constraint.
  static std::array<Polynomial, 6> symbolic_alpha();
  static std::array<Polynomial, 4> symbolic_beta();

  /// a = 1, b = -2 eps, c = 1 - delta.
  static BeamParams normal_form(const Rational& eps, const Rational& delta, const Rational& h);
};

/// F4 and F2 of the symmetric scheme on the window w^(-2..2) (state x1).
Polynomial beam_expected_f4(const Polynomial& a);
Polynomial beam_expected_f2(const Polynomial& b);

struct BeamSymmetricCase {
  BeamParams params;
  PolyOdeSystem system;
  /// Levels 0..4; the map state is x1^(0..3) = w^(-2..1).
  ImplicitScheme scheme;
  /// Levels -2..2.
  ImplicitScheme centred;
  Polynomial f4;
  Polynomial f2;
  Polynomial expected_f4;
  Polynomial expected_f2;
  BirationalMap map;

  bool f4_matches() const { return f4 == expected_f4; }
  bool f2_matches() const { return f2 == expected_f2; }
  /// centred equation == stencil - h^4 (F4 + F2 + c).
  bool centred_matches() const;
};

BeamSymmetricCase beam_symmetric(const BeamParams& p);

struct BeamMeasureReport {
  /// dF/dx1^(4) in x1^(0..3) and dF/dx1^(0) in x1^(1..4), F the symmetrized load.
  Polynomial h_poly;
  Polynomial g_poly;
  bool symmetry_identity = false;
  int samples = 0;
  /// max |det DPhi - (1 - h^4 G)/(1 - h^4 H)| / max(1, |ratio|).
  double max_error = 0.0;
  /// Same with h^2 in place of h^4.
  double max_error_h2 = 0.0;
};

/// Throws SymbolicParameters unless a, b, c, h are numbers.
BeamMeasureReport beam_measure_check(const BeamSymmetricCase& c, int samples = 20, std::uint64_t seed = 20240601);

struct DiscreteLagrangian {
  /// h^4 L as a polynomial in x1^(0), x1^(1), x1^(2) and parameters.
  Polynomial scaled;
  /// h^4.
  Polynomial scale;

  /// d(scaled)/d x1^(j), j = 0, 1, 2.
  Polynomial slot_derivative(int j) const;
};

DiscreteLagrangian beam_discrete_lagrangian(const BeamParams& p);

/// Hat-F4 and hat-F2 of the Lagrangian scheme on the window w^(-2..2).
Polynomial beam_expected_lagrangian_f4(const Polynomial& a, const std::array<Polynomial, 6>& alpha);
Polynomial beam_expected_lagrangian_f2(const Polynomial& b, const std::array<Polynomial, 4>& beta);

struct BeamLagrangianCase {
  BeamParams params;
  DiscreteLagrangian lagrangian;
  /// h^4 times the discrete Euler-Lagrange expression on w^(-2..2).
  Polynomial euler_lagrange;
  /// stencil - h^4 (hat-F4 + hat-F2 + c).
  Polynomial expected;
  ImplicitScheme scheme;
  BirationalMap map;

  bool matches_expected() const { return euler_lagrange == expected; }
};

/// Throws AffineConstraintViolated.
BeamLagrangianCase beam_lagrangian(const BeamParams& p);

template <class T>
struct CanonicalState {
  T q1{};
  T q2{};
  T p1{};
  T p2{};
};
using OstrogradskyState = CanonicalState<double>;

/// Canonical variables from a window w^(-2..1) = x1^(0..3):
///   q1 = w^(0), q2 = w^(1), p2 = L2(w^(-1), w^(0), w^(1)),
///   p1 = L1(w^(-1), w^(0), w^(1)) + L2(w^(-2), w^(-1), w^(0)).
class OstrogradskyTransform {
 public:
  /// Parameters of the Lagrangian must be bound (SymbolicParameters).
  explicit OstrogradskyTransform(const DiscreteLagrangian& l);

  /// Components as rational functions of x1^(0..3): q1, q2, p1, p2.
  const std::array<RationalFunction, 4>& components() const { return components_; }

  OstrogradskyState forward(std::span<const double> window) const;
  CanonicalState<Rational> forward(std::span<const Rational> window) const;
  /// Throws SingularStepError when the linear coefficient vanishes.
  std::vector<double> inverse(const OstrogradskyState& s) const;
  std::vector<Rational> inverse(const CanonicalState<Rational>& s) const;

  /// d(q1, q2, p1, p2)/d(x1^(0..3)) at a window.
  Matrix jacobian(std::span<const double> window) const;

 private:
  std::vector<VarId> slots_;
  std::array<RationalFunction, 4> components_;
  std::array<std::array<RationalFunction, 4>, 4> partials_;
  // p2 * scale = c2 * x1^(1) + r2, (p1 * scale - L1') = c1 * x1^(0) + r1.
  Polynomial scale_;
  Polynomial l1_up_;
  Polynomial c2_, r2_, c1_, r1_;
};

struct SymplecticityReport {
  double defect = 0.0;
  int samples = 0;
  int resampled = 0;
};

/// max over random windows of ||M^T Omega M - Omega||_inf, M the Jacobian of
/// the map in canonical coordinates.  Singular sample points are redrawn.
SymplecticityReport symplecticity_check(const BirationalMap& m, const OstrogradskyTransform& t, int samples = 20,
                                        std::uint64_t seed = 20240602);

enum class BeamMapKind { Symmetric, Lagrangian };

std::string to_string(BeamMapKind k);

struct BeamFixedPoint {
  double w = 0.0;
  /// Exact when eps + sqrt(delta) (or eps - sqrt(delta)) is rational.
  bool exact = false;
  double residual = 0.0;
};

struct BeamFixedPointAnalysis {
  BeamMapKind kind = BeamMapKind::Symmetric;
  std::vector<BeamFixedPoint> fixed_points;
  double w_star = 0.0;
  SpectrumReport spectrum;
  /// |lambda1 lambda2 - 1| of the real pair.
  double reciprocal_defect = 0.0;
  /// max ||mu| - 1| of the complex pair.
  double unit_defect = 0.0;
  bool pattern_ok = false;
  /// (4 w* sqrt(delta))^(1/4) and the corresponding exp(+-h gamma), exp(+-i h gamma).
  double continuous_gamma = 0.0;
  std::vector<std::complex<double>> continuous_multipliers;
};

/// Fixed points w = +-sqrt(eps +- sqrt(delta)) of the beam map at a = 1,
/// b = -2 eps, c = 1 - delta, with the spectrum at w* = sqrt(eps + sqrt(delta)).
/// Throws NoRealFixedPoint.
BeamFixedPointAnalysis beam_fixed_point_analysis(const Rational& eps, const Rational& delta, const Rational& h,
                                                 BeamMapKind kind, const std::array<Polynomial, 6>& alpha =
                                                                       BeamParams::on_site_alpha(),
                                                 const std::array<Polynomial, 4>& beta = BeamParams::on_site_beta());

}  // namespace kahan
