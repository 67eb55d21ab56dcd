#include "kahan/casebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "kahan/text.hpp"

namespace kahan {

namespace {

Polynomial w(int shift) { return Polynomial::x(1, shift); }

Rational numeric_value(const Polynomial& p, const char* what) {
  if (!p.is_constant())
    throw Error(ErrorCode::SymbolicParameters, std::string(what) + " must be a number, got " + to_string(p));
  return p.constant_term();
}

bool has_params(const BirationalMap& m) { return !m.parameters().empty(); }

bool is_rational_square(const Rational& q, Rational& root) {
  if (q < 0) return false;
  const Integer& n = q.get_num();
  const Integer& d = q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
  Integer rn;
  Integer rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

Polynomial sum(std::span<const Polynomial> ps) {
  Polynomial s;
  for (const auto& p : ps) s += p;
  return s;
}

Polynomial centred_stencil() { return difference_stencil(1, 4).shifted(-2); }

}  // namespace

Polynomial bind_step(const Polynomial& p, const Polynomial& h) {
  if (h == Polynomial::param(kStepParam)) return p;
  return substitute(p, PolySubstitution{{VarId::param(kStepParam), h}});
}

// ------------------------------------------------------------ Lotka-Volterra

bool LotkaVolterraCase::matches_expected() const { return scheme.equations == expected.equations; }

LotkaVolterraCase lotka_volterra(const Polynomial& alpha, const Polynomial& h) {
  if (alpha.is_zero()) throw Error(ErrorCode::ValidationError, "Lotka-Volterra needs alpha != 0");
  const Polynomial x = Polynomial::x(1);
  const Polynomial y = Polynomial::x(2);
  const Polynomial xt = Polynomial::x(1, 1);
  const Polynomial yt = Polynomial::x(2, 1);
  const Polynomial half(Rational(1, 2));

  LotkaVolterraCase c;
  c.system = {1, 2, {alpha * x * (1 - y), y * (x - 1)}};
  c.scheme = discretize(c.system);
  for (auto& e : c.scheme.equations) e = bind_step(e, h);
  c.expected = {1, 2,
                {xt - x - h * alpha * half * (x * (1 - yt) + xt * (1 - y)),
                 yt - y - h * half * (y * (xt - 1) + yt * (x - 1))}};
  c.map = solve_forward(c.scheme);
  return c;
}

// ------------------------------------------------------- quartic oscillator

QuarticParams QuarticParams::rational(const Rational& a, const Rational& b, const Rational& c, const Rational& d,
                                      const Rational& h) {
  return {Polynomial(a), Polynomial(b), Polynomial(c), Polynomial(d), Polynomial(h)};
}

Polynomial QuarticParams::alpha() const { return a * h * h; }
Polynomial QuarticParams::beta() const { return b * h * h * Polynomial(Rational(1, 3)); }
Polynomial QuarticParams::gamma() const { return 1 + c * h * h * Polynomial(Rational(1, 3)); }
Polynomial QuarticParams::delta() const { return d * h * h; }

bool QuarticCase::update_matches() const { return map.forward.size() == 2 && map.forward[1] == expected_update; }

bool QuarticCase::jacobian_matches() const { return jacobian(map).determinant == expected_jacobian; }

QuarticCase quartic_oscillator(const QuarticParams& p) {
  const Polynomial x = Polynomial::x(1);
  QuarticCase c;
  c.params = p;
  c.system = {2, 1, {-(p.a * x.pow(3)) - p.b * x.pow(2) - p.c * x - p.d}};
  c.scheme = discretize(c.system);
  for (auto& e : c.scheme.equations) e = bind_step(e, p.h);
  c.map = solve_forward(c.scheme);

  const Polynomial al = p.alpha();
  const Polynomial be = p.beta();
  const Polynomial ga = p.gamma();
  const Polynomial de = p.delta();
  const Polynomial cur = w(1);
  const Polynomial prev = w(0);
  c.expected_update = RationalFunction((3 - ga) * cur - de - (be * cur + ga) * prev, be * cur + ga + (al * cur + be) * prev);

  const Polynomial X = w(0);
  const Polynomial Y = w(1);
  const Polynomial p1 = al * X * Y + be * (X + Y) + ga;
  c.expected_jacobian = RationalFunction((be * Y + ga).pow(2) + (al * Y + be) * ((3 - ga) * Y - de), p1 * p1);

  const Pencil pencil = quartic_pencil(p);
  c.p1 = pencil.p1;
  c.p2 = pencil.p2;
  return c;
}

Pencil quartic_pencil(const QuarticParams& p) {
  const Polynomial al = p.alpha();
  const Polynomial be = p.beta();
  const Polynomial ga = p.gamma();
  const Polynomial de = p.delta();
  const Polynomial X = w(0);
  const Polynomial Y = w(1);
  const Polynomial eps = al * de + be * (3 - ga);
  const Polynomial zeta = be * de + ga * (3 - ga);
  Pencil out;
  out.p1 = al * X * Y + be * (X + Y) + ga;
  out.p2 = (al * ga - be * be) * X * X * Y * Y + eps * X * Y * (X + Y) + zeta * (X * X + Y * Y) -
           (3 - ga).pow(2) * X * Y + (3 - ga) * de * (X + Y) - de * de;
  return out;
}

bool odd_symmetric(const BirationalMap& m) {
  if (!m.has_symbolic()) throw Error(ErrorCode::InvalidSystem, "map has no symbolic forward components");
  Substitution neg;
  for (const auto& v : m.state) neg.emplace(v, RationalFunction(-Polynomial(v)));
  for (const auto& f : m.forward)
    if (!(substitute(f, neg) == -f)) return false;
  return true;
}

bool ContinuumLimitReport::all() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

ContinuumLimitReport continuum_limit_check(const Pencil& quartic) {
  const VarId hv = VarId::param(kStepParam);
  const Polynomial h = Polynomial::param(kStepParam);
  const Polynomial p = Polynomial::param("p");
  const Polynomial x = w(0);
  const PolySubstitution sub{{VarId::state(1, 1), x + h * p}};
  const Polynomial p1 = substitute(quartic.p1, sub);
  const Polynomial p2 = substitute(quartic.p2, sub);

  ContinuumLimitReport r;
  r.p1_h0 = p1.coefficient_of(hv, 0);
  r.p1_h1 = p1.coefficient_of(hv, 1);
  r.p2_h0 = p2.coefficient_of(hv, 0);
  r.p2_h1 = p2.coefficient_of(hv, 1);
  r.p2_h2 = p2.coefficient_of(hv, 2);
  const Polynomial a = Polynomial::param("a");
  const Polynomial b = Polynomial::param("b");
  const Polynomial c = Polynomial::param("c");
  const Polynomial d = Polynomial::param("d");
  r.four_h = 2 * p * p + a * x.pow(4) + Polynomial(Rational(4, 3)) * b * x.pow(3) + 2 * c * x * x + 4 * d * x;
  r.holds = {r.p1_h0 == Polynomial(1), r.p1_h1.is_zero(), r.p2_h0.is_zero(), r.p2_h1.is_zero(), r.p2_h2 == r.four_h};

  Point<Rational> at{{VarId::param("a"), Rational(1)},   {VarId::param("b"), Rational(2)},
                     {VarId::param("c"), Rational(3)},   {VarId::param("d"), Rational(5)},
                     {VarId::param("p"), Rational(1, 3)}, {hv, Rational(1, 1000)},
                     {VarId::state(1, 0), Rational(1, 2)}};
  const Rational hh = at[hv];
  const Rational approx = evaluate(p2, at) / (4 * hh * hh);
  const Rational exact = evaluate(r.four_h, at) / 4;
  r.spot_check_error = std::abs(to_double(Rational(approx - exact)));
  return r;
}

// ------------------------------------------------ Kahan on the Weierstrass ODE

Pencil qrt_pencil_alpha0_gamma1(const Polynomial& beta, const Polynomial& delta) {
  const Polynomial X = w(0);
  const Polynomial Y = w(1);
  Pencil out;
  out.p1 = 1 + beta * (X + Y);
  out.p2 = -(beta * beta * X * X * Y * Y) + 2 * beta * X * Y * (X + Y) + (beta * delta + 2) * (X * X + Y * Y) -
           4 * X * Y + 2 * delta * (X + Y) - delta * delta;
  return out;
}

WeierstrassCase kahan_weierstrass(const Polynomial& b, const Polynomial& d, const Polynomial& h) {
  if (b.is_zero()) throw Error(ErrorCode::ValidationError, "Weierstrass case needs b != 0");
  WeierstrassCase c;
  const Polynomial x = Polynomial::x(1);
  c.system = {1, 2, {Polynomial::x(2), -(b * x * x) - d}};
  c.scheme = discretize(c.system);
  for (auto& e : c.scheme.equations) e = bind_step(e, h);
  c.first_order_map = solve_forward(c.scheme);

  // Four equations, affine in the three momenta x2^(-1), x2^(0), x2^(1).
  const std::vector<VarId> momenta = {VarId::state(2, -1), VarId::state(2, 0), VarId::state(2, 1)};
  const std::set<VarId> unknowns(momenta.begin(), momenta.end());
  std::vector<std::vector<Polynomial>> augmented;
  for (int shift : {0, -1}) {
    for (const auto& e : c.scheme.equations) {
      const LinearCollection lc = collect_linear(e.shifted(shift), unknowns);
      std::vector<Polynomial> row;
      for (const auto& v : momenta) {
        auto it = lc.coefficients.find(v);
        row.push_back(it == lc.coefficients.end() ? Polynomial() : it->second);
      }
      row.push_back(lc.remainder);
      augmented.push_back(std::move(row));
    }
  }
  c.relation = determinant(augmented);

  const Polynomial beta = b * h * h * Polynomial(Rational(1, 3));
  const Polynomial delta = d * h * h;
  const Polynomial x0 = w(0);
  c.additive_form = (w(1) + w(-1)) * (3 * beta * x0 + 2) - (4 * x0 - 2 * delta);
  if (auto q = c.relation.divide_exact(c.additive_form); q && !q->is_zero() && !q->has_state_variables())
    c.quotient = *q;

  c.additive_map = solve_forward(ImplicitScheme{2, 1, {c.additive_form.shifted(1)}});

  const Polynomial X = w(0);
  const Polynomial Y = w(1);
  const Polynomial third(Rational(1, 3));
  c.pencil.p1 = Polynomial(1);
  c.pencil.p2 = -(beta * beta * X * X * Y * Y) + 4 * third * beta * X * Y * (X + Y) + 4 * third * (X * X + Y * Y) -
                2 * third * (4 + beta * delta) * X * Y + 4 * third * delta * (X + Y);
  return c;
}

// ------------------------------------------------------------------- beam

void BeamParams::validate() const {
  if (!(sum(alpha) == Polynomial(1)))
    throw Error(ErrorCode::AffineConstraintViolated, "sum of alpha weights is " + to_string(sum(alpha)) + ", not 1");
  if (!(sum(beta) == Polynomial(1)))
    throw Error(ErrorCode::AffineConstraintViolated, "sum of beta weights is " + to_string(sum(beta)) + ", not 1");
}

std::array<Polynomial, 6> BeamParams::on_site_alpha() { return {0, 0, 0, 0, 0, 1}; }
std::array<Polynomial, 4> BeamParams::on_site_beta() { return {0, 0, 0, 1}; }

std::array<Polynomial, 6> BeamParams::uniform_alpha() {
  std::array<Polynomial, 6> a;
  a.fill(Polynomial(Rational(1, 6)));
  return a;
}

std::array<Polynomial, 4> BeamParams::uniform_beta() {
  std::array<Polynomial, 4> b;
  b.fill(Polynomial(Rational(1, 4)));
  return b;
}

std::array<Polynomial, 6> BeamParams::symbolic_alpha() {
  std::array<Polynomial, 6> a;
  Polynomial rest(1);
  for (int j = 0; j < 5; ++j) {
    a[static_cast<std::size_t>(j)] = Polynomial::param("alpha" + std::to_string(j));
    rest -= a[static_cast<std::size_t>(j)];
  }
  a[5] = rest;
  return a;
}

std::array<Polynomial, 4> BeamParams::symbolic_beta() {
  std::array<Polynomial, 4> b;
  Polynomial rest(1);
  for (int j = 0; j < 3; ++j) {
    b[static_cast<std::size_t>(j)] = Polynomial::param("beta" + std::to_string(j));
    rest -= b[static_cast<std::size_t>(j)];
  }
  b[3] = rest;
  return b;
}

BeamParams BeamParams::normal_form(const Rational& eps, const Rational& delta, const Rational& h) {
  BeamParams p;
  p.a = Polynomial(1);
  p.b = Polynomial(Rational(-2 * eps));
  p.c = Polynomial(Rational(1 - delta));
  p.h = Polynomial(h);
  return p;
}

Polynomial beam_expected_f4(const Polynomial& a) {
  Polynomial s;
  for (int omit = -2; omit <= 2; ++omit) {
    Polynomial t(1);
    for (int k = -2; k <= 2; ++k)
      if (k != omit) t *= w(k);
    s += t;
  }
  return a * Polynomial(Rational(1, 5)) * s;
}

Polynomial beam_expected_f2(const Polynomial& b) {
  Polynomial s;
  for (int i = -2; i <= 2; ++i)
    for (int j = i + 1; j <= 2; ++j) s += w(i) * w(j);
  return b * Polynomial(Rational(1, 10)) * s;
}

bool BeamSymmetricCase::centred_matches() const {
  return centred.equations.at(0) == centred_stencil() - params.h.pow(4) * (f4 + f2 + params.c);
}

BeamSymmetricCase beam_symmetric(const BeamParams& p) {
  p.validate();
  const Polynomial x = Polynomial::x(1);
  BeamSymmetricCase c;
  c.params = p;
  c.system = {4, 1, {p.a * x.pow(4) + p.b * x * x + p.c}};
  c.scheme = discretize(c.system);
  for (auto& e : c.scheme.equations) e = bind_step(e, p.h);
  c.centred = recenter(c.scheme, -2);
  c.f4 = symmetrize(p.a * x.pow(4), 4).shifted(-2);
  c.f2 = symmetrize(p.b * x * x, 4).shifted(-2);
  c.expected_f4 = beam_expected_f4(p.a);
  c.expected_f2 = beam_expected_f2(p.b);
  c.map = solve_forward(c.scheme);
  return c;
}

BeamMeasureReport beam_measure_check(const BeamSymmetricCase& c, int samples, std::uint64_t seed) {
  if (has_params(c.map)) throw Error(ErrorCode::SymbolicParameters, "bind a, b, c, h before the measure check");
  const double h = to_double(numeric_value(c.params.h, "h"));
  const double h4 = std::pow(h, 4);
  const double h2 = h * h;

  BeamMeasureReport r;
  const Polynomial f = symmetrize(c.system.rhs.at(0), 4);
  r.h_poly = f.derivative(VarId::state(1, 4));
  r.g_poly = f.derivative(VarId::state(1, 0));
  r.symmetry_identity = r.g_poly.shifted(-1) == r.h_poly;

  const CompiledMap cm(c.map, {});
  const auto jac = jacobian(c.map).entries;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int attempts = 0;
  while (r.samples < samples && attempts < 100 * samples) {
    ++attempts;
    std::vector<double> s(4);
    for (auto& v : s) v = unif(rng);
    std::vector<double> image;
    try {
      image = cm.forward(s);
    } catch (const SingularStepError&) {
      continue;
    }
    Point<double> pt;
    for (int k = 0; k < 4; ++k) pt[VarId::state(1, k)] = s[static_cast<std::size_t>(k)];
    pt[VarId::state(1, 4)] = image[3];
    const double det = LuDecomposition(evaluate(jac, pt)).determinant();
    const double g = evaluate(r.g_poly, pt);
    const double hh = evaluate(r.h_poly, pt);
    const double ratio = (1.0 - h4 * g) / (1.0 - h4 * hh);
    const double ratio2 = (1.0 - h2 * g) / (1.0 - h2 * hh);
    r.max_error = std::max(r.max_error, std::abs(det - ratio) / std::max(1.0, std::abs(ratio)));
    r.max_error_h2 = std::max(r.max_error_h2, std::abs(det - ratio2) / std::max(1.0, std::abs(ratio2)));
    ++r.samples;
  }
  return r;
}

Polynomial DiscreteLagrangian::slot_derivative(int j) const { return scaled.derivative(VarId::state(1, j)); }

DiscreteLagrangian beam_discrete_lagrangian(const BeamParams& p) {
  p.validate();
  const Polynomial w0 = w(0);
  const Polynomial w1 = w(1);
  const Polynomial w2 = w(2);
  const Polynomial half(Rational(1, 2));
  const Polynomial third(Rational(1, 3));
  const auto& al = p.alpha;
  const auto& be = p.beta;

  const Polynomial kinetic = half * (2 * (w0 - w1).pow(2) - (w0 - w2).pow(2) + 2 * (w1 - w2).pow(2));
  const Polynomial v5 =
      p.a * Polynomial(Rational(1, 5)) *
      (al[0] * w0 * w1.pow(3) * w2 + half * al[1] * (w0.pow(2) * w1.pow(3) + w1.pow(2) * w2.pow(3)) +
       half * al[2] * (w1.pow(2) * w0.pow(3) + w2.pow(2) * w1.pow(3)) +
       half * al[3] * (w0 * w1.pow(4) + w1 * w2.pow(4)) + half * al[4] * (w1 * w0.pow(4) + w2 * w1.pow(4)) +
       third * al[5] * (w0.pow(5) + w1.pow(5) + w2.pow(5)));
  const Polynomial v3 = p.b * third *
                        (be[0] * w0 * w1 * w2 + half * be[1] * (w0 * w1.pow(2) + w1 * w2.pow(2)) +
                         half * be[2] * (w1 * w0.pow(2) + w2 * w1.pow(2)) +
                         third * be[3] * (w0.pow(3) + w1.pow(3) + w2.pow(3)));
  const Polynomial linear = p.c * third * (w0 + w1 + w2);

  DiscreteLagrangian l;
  l.scale = p.h.pow(4);
  l.scaled = kinetic - l.scale * (v5 + v3 + linear);
  return l;
}

Polynomial beam_expected_lagrangian_f4(const Polynomial& a, const std::array<Polynomial, 6>& al) {
  const Polynomial m2 = w(-2);
  const Polynomial m1 = w(-1);
  const Polynomial w0 = w(0);
  const Polynomial w1 = w(1);
  const Polynomial w2 = w(2);
  const Polynomial s = al[0] * (m2 * m1.pow(3) + 3 * m1 * w0.pow(2) * w1 + w1.pow(3) * w2) +
                       al[1] * (3 * m1.pow(2) * w0.pow(2) + 2 * w0 * w1.pow(3)) +
                       al[2] * (2 * m1.pow(3) * w0 + 3 * w0.pow(2) * w1.pow(2)) +
                       al[3] * (4 * m1 * w0.pow(3) + w1.pow(4)) + al[4] * (m1.pow(4) + 4 * w0.pow(3) * w1) +
                       5 * al[5] * w0.pow(4);
  return a * Polynomial(Rational(1, 5)) * s;
}

Polynomial beam_expected_lagrangian_f2(const Polynomial& b, const std::array<Polynomial, 4>& be) {
  const Polynomial m2 = w(-2);
  const Polynomial m1 = w(-1);
  const Polynomial w0 = w(0);
  const Polynomial w1 = w(1);
  const Polynomial w2 = w(2);
  const Polynomial s = be[0] * (m2 * m1 + m1 * w1 + w1 * w2) + be[1] * (2 * m1 * w0 + w1.pow(2)) +
                       be[2] * (m1.pow(2) + 2 * w0 * w1) + 3 * be[3] * w0.pow(2);
  return b * Polynomial(Rational(1, 3)) * s;
}

BeamLagrangianCase beam_lagrangian(const BeamParams& p) {
  p.validate();
  BeamLagrangianCase c;
  c.params = p;
  c.lagrangian = beam_discrete_lagrangian(p);
  for (int i = 0; i <= 2; ++i) c.euler_lagrange += c.lagrangian.slot_derivative(i).shifted(-i);
  c.expected = centred_stencil() - p.h.pow(4) * (beam_expected_lagrangian_f4(p.a, p.alpha) +
                                                 beam_expected_lagrangian_f2(p.b, p.beta) + p.c);
  c.scheme = ImplicitScheme{4, 1, {c.euler_lagrange.shifted(2)}};
  c.map = solve_forward(c.scheme);
  return c;
}

// ------------------------------------------------------------ Ostrogradsky

OstrogradskyTransform::OstrogradskyTransform(const DiscreteLagrangian& l) {
  if (l.scaled.has_parameters() || l.scale.has_parameters())
    throw Error(ErrorCode::SymbolicParameters, "bind the Lagrangian parameters before the canonical transform");
  if (l.scale.is_zero()) throw Error(ErrorCode::ValidationError, "Lagrangian scale is zero");
  slots_ = state_variables(4, 1);
  scale_ = l.scale;
  const Polynomial l1 = l.slot_derivative(1);
  const Polynomial l2 = l.slot_derivative(2);
  l1_up_ = l1.shifted(1);
  components_ = {RationalFunction(w(2)), RationalFunction(w(3)), RationalFunction(l1_up_ + l2, scale_),
                 RationalFunction(l2.shifted(1), scale_)};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) partials_[i][j] = components_[i].derivative(slots_[j]);

  const LinearCollection up = collect_linear(l2.shifted(1), {VarId::state(1, 1)});
  c2_ = up.coefficients.count(VarId::state(1, 1)) ? up.coefficients.at(VarId::state(1, 1)) : Polynomial();
  r2_ = up.remainder;
  const LinearCollection low = collect_linear(l2, {VarId::state(1, 0)});
  c1_ = low.coefficients.count(VarId::state(1, 0)) ? low.coefficients.at(VarId::state(1, 0)) : Polynomial();
  r1_ = low.remainder;
}

namespace {

template <class T>
Point<T> window_point(const std::vector<VarId>& slots, std::span<const T> window) {
  if (window.size() != slots.size()) throw Error(ErrorCode::InvalidSystem, "window must have length 4");
  Point<T> pt;
  for (std::size_t i = 0; i < slots.size(); ++i) pt[slots[i]] = window[i];
  return pt;
}

double as_value(const Rational& q, double) { return to_double(q); }
Rational as_value(const Rational& q, const Rational&) { return q; }

template <class T>
T divide_checked(const T& num, const T& den) {
  if (den == 0) throw SingularStepError("canonical inverse: linear coefficient vanishes", std::numeric_limits<double>::infinity());
  return num / den;
}

}  // namespace

OstrogradskyState OstrogradskyTransform::forward(std::span<const double> window) const {
  const auto pt = window_point(slots_, window);
  return {window[2], window[3], evaluate(components_[2], pt), evaluate(components_[3], pt)};
}

CanonicalState<Rational> OstrogradskyTransform::forward(std::span<const Rational> window) const {
  const auto pt = window_point(slots_, window);
  return {window[2], window[3], evaluate(components_[2], pt), evaluate(components_[3], pt)};
}

namespace {

template <class T>
std::vector<T> canonical_inverse(const CanonicalState<T>& s, const Polynomial& scale, const Polynomial& c2,
                                 const Polynomial& r2, const Polynomial& l1_up, const Polynomial& c1,
                                 const Polynomial& r1) {
  const T sc = as_value(scale.constant_term(), T{});
  Point<T> pt;
  pt[VarId::state(1, 2)] = s.q1;
  pt[VarId::state(1, 3)] = s.q2;
  const T x1 = divide_checked<T>(s.p2 * sc - evaluate(r2, pt), evaluate(c2, pt));
  pt[VarId::state(1, 1)] = x1;
  const T x0 = divide_checked<T>(s.p1 * sc - evaluate(l1_up, pt) - evaluate(r1, pt), evaluate(c1, pt));
  return {x0, x1, s.q1, s.q2};
}

}  // namespace

std::vector<double> OstrogradskyTransform::inverse(const OstrogradskyState& s) const {
  return canonical_inverse(s, scale_, c2_, r2_, l1_up_, c1_, r1_);
}

std::vector<Rational> OstrogradskyTransform::inverse(const CanonicalState<Rational>& s) const {
  return canonical_inverse(s, scale_, c2_, r2_, l1_up_, c1_, r1_);
}

Matrix OstrogradskyTransform::jacobian(std::span<const double> window) const {
  const auto pt = window_point(slots_, window);
  Matrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = partials_[i][j].is_zero() ? 0.0 : evaluate(partials_[i][j], pt);
  return m;
}

SymplecticityReport symplecticity_check(const BirationalMap& m, const OstrogradskyTransform& t, int samples,
                                        std::uint64_t seed) {
  if (m.order != 4 || m.dim != 1) throw Error(ErrorCode::InvalidSystem, "expected a fourth-order scalar map");
  if (has_params(m)) throw Error(ErrorCode::SymbolicParameters, "bind all map parameters before the check");
  const CompiledMap cm(m, {});
  const auto jac = jacobian(m).entries;
  Matrix omega(4, 4);
  omega(0, 2) = omega(1, 3) = 1.0;
  omega(2, 0) = omega(3, 1) = -1.0;

  SymplecticityReport r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  while (r.samples < samples && r.resampled < 100 * samples) {
    std::vector<double> s(4);
    for (auto& v : s) v = unif(rng);
    try {
      const auto image = cm.forward(s);
      const LuDecomposition dt(t.jacobian(s));
      if (dt.singular()) throw SingularStepError("canonical transform is singular", dt.condition_estimate());
      const Matrix dphi = evaluate(jac, make_point(m, s, {}));
      const Matrix mm = t.jacobian(image) * dphi * dt.inverse();
      r.defect = std::max(r.defect, (mm.transposed() * omega * mm - omega).max_abs());
      ++r.samples;
    } catch (const SingularStepError&) {
      ++r.resampled;
    }
  }
  return r;
}

// ------------------------------------------------------ fixed-point analysis

std::string to_string(BeamMapKind k) { return k == BeamMapKind::Symmetric ? "symmetric" : "lagrangian"; }

BeamFixedPointAnalysis beam_fixed_point_analysis(const Rational& eps, const Rational& delta, const Rational& h,
                                                 BeamMapKind kind, const std::array<Polynomial, 6>& alpha,
                                                 const std::array<Polynomial, 4>& beta) {
  if (delta < 0) throw Error(ErrorCode::NoRealFixedPoint, "delta < 0");
  BeamParams p = BeamParams::normal_form(eps, delta, h);
  p.alpha = alpha;
  p.beta = beta;
  BirationalMap map;
  Polynomial equation;
  if (kind == BeamMapKind::Symmetric) {
    auto c = beam_symmetric(p);
    map = std::move(c.map);
    equation = c.scheme.equations.at(0);
  } else {
    auto c = beam_lagrangian(p);
    map = std::move(c.map);
    equation = c.scheme.equations.at(0);
  }
  if (has_params(map)) throw Error(ErrorCode::SymbolicParameters, "weights must be numbers");

  // The scheme on a constant window, as a polynomial in u = x1^(0).
  const Polynomial constant = equation.map_variables([](const VarId& v) {
    return v.is_state() ? VarId::state(v.component, 0) : v;
  });

  BeamFixedPointAnalysis out;
  out.kind = kind;
  Rational root;
  const bool rational_root = is_rational_square(delta, root);
  const double sd = std::sqrt(to_double(delta));
  bool even = true;
  for (const auto& [m, coeff] : constant.terms()) even = even && m.degree() % 2 == 0;

  for (int sign : {1, -1}) {
    if (sign == -1 && delta == 0) break;
    const double r = to_double(eps) + sign * sd;
    if (r < 0) continue;
    bool exact = false;
    double residual = 0.0;
    if (rational_root && even) {
      // Evaluate at u^2 = eps +- sqrt(delta) exactly.
      const Rational u2 = eps + sign * root;
      Rational acc;
      for (const auto& [m, coeff] : constant.terms()) {
        Rational t = coeff;
        for (int e = 0; e < m.degree() / 2; ++e) t *= u2;
        acc += t;
      }
      exact = true;
      residual = std::abs(to_double(acc));
    }
    for (double s : {1.0, -1.0}) {
      if (r == 0 && s < 0) break;
      const double u = s * std::sqrt(r);
      if (!exact) residual = std::abs(evaluate(constant, Point<double>{{VarId::state(1, 0), u}}));
      out.fixed_points.push_back({u, exact, residual});
    }
  }
  if (out.fixed_points.empty()) throw Error(ErrorCode::NoRealFixedPoint, "eps +- sqrt(delta) < 0");

  out.w_star = std::sqrt(to_double(eps) + sd);
  const std::vector<double> star(4, out.w_star);
  out.spectrum = char_poly_and_roots(linearize_at(map, star, {}));

  std::vector<std::complex<double>> real;
  std::vector<std::complex<double>> complex;
  for (const auto& z : out.spectrum.roots)
    (std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z)) ? real : complex).push_back(z);
  if (real.size() == 2) out.reciprocal_defect = std::abs(real[0].real() * real[1].real() - 1.0);
  for (const auto& z : complex) out.unit_defect = std::max(out.unit_defect, std::abs(std::abs(z) - 1.0));
  out.pattern_ok = real.size() == 2 && complex.size() == 2 && out.reciprocal_defect <= 1e-8 &&
                   out.unit_defect <= kUnitCircleTolerance && std::abs(complex[0] - std::conj(complex[1])) <= 1e-8 &&
                   out.spectrum.palindromic_defect <= 1e-8;

  out.continuous_gamma = std::pow(4.0 * out.w_star * sd, 0.25);
  const double hg = to_double(h) * out.continuous_gamma;
  out.continuous_multipliers = {std::exp(hg), std::exp(-hg), std::polar(1.0, hg), std::polar(1.0, -hg)};
  return out;
}

}  // namespace kahan
