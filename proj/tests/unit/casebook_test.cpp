#include <gtest/gtest.h>

#include <cmath>

#include "kahan/casebook.hpp"
#include "kahan/text.hpp"

using namespace kahan;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ValidationError;
}

BeamParams numeric_beam() { return BeamParams::normal_form(1, Rational(1, 4), Rational(1, 10)); }

}  // namespace

TEST(LotkaVolterra, MatchesKahanScheme) {
  EXPECT_TRUE(lotka_volterra(Polynomial::param("alpha")).matches_expected());
  EXPECT_EQ(code_of([] { lotka_volterra(Polynomial(0)); }), ErrorCode::ValidationError);
}

TEST(Quartic, UpdateAndJacobian) {
  const auto q = quartic_oscillator(QuarticParams::symbolic());
  EXPECT_TRUE(q.update_matches());
  EXPECT_TRUE(q.jacobian_matches());
}

TEST(Quartic, OddSymmetryOnlyWithoutEvenTerms) {
  const auto duffing = quartic_oscillator({Polynomial::param("a"), 0, Polynomial::param("c"), 0});
  EXPECT_TRUE(odd_symmetric(duffing.map));
  EXPECT_FALSE(odd_symmetric(quartic_oscillator(QuarticParams::symbolic()).map));
}

TEST(Quartic, ContinuumLimit) {
  const auto r = continuum_limit_check(quartic_pencil(QuarticParams::symbolic()));
  EXPECT_TRUE(r.all());
  EXPECT_LT(r.spot_check_error, 1e-2);
}

TEST(Weierstrass, EliminationGivesAdditiveForm) {
  const auto w = kahan_weierstrass(Polynomial::param("b"), Polynomial::param("d"));
  EXPECT_TRUE(w.elimination_matches());
  ASSERT_TRUE(w.quotient.has_value());
  EXPECT_FALSE(w.quotient->has_state_variables());
  EXPECT_EQ(code_of([] { kahan_weierstrass(0, 1); }), ErrorCode::ValidationError);
}

TEST(Weierstrass, AdditivePencilIsDarboux) {
  const auto w = kahan_weierstrass(2, 5, Rational(1, 10));
  const auto j = jacobian(w.additive_map).determinant;
  EXPECT_EQ(j, RationalFunction(1));
  EXPECT_TRUE(darboux_witness(w.additive_map, w.pencil.p2, j).is_zero());
}

TEST(Beam, SymmetricSchemeForms) {
  const auto s = beam_symmetric(BeamParams{});
  EXPECT_TRUE(s.f4_matches());
  EXPECT_TRUE(s.f2_matches());
  EXPECT_TRUE(s.centred_matches());
}

TEST(Beam, AffineConstraint) {
  BeamParams p;
  p.alpha = {1, 1, 0, 0, 0, 0};
  EXPECT_EQ(code_of([&] { p.validate(); }), ErrorCode::AffineConstraintViolated);
  EXPECT_EQ(code_of([&] { beam_lagrangian(p); }), ErrorCode::AffineConstraintViolated);
}

TEST(Beam, MeasureNeedsNumbers) {
  const auto s = beam_symmetric(BeamParams{});
  EXPECT_EQ(code_of([&] { beam_measure_check(s); }), ErrorCode::SymbolicParameters);
}

TEST(Beam, MeasureDensity) {
  const auto r = beam_measure_check(beam_symmetric(numeric_beam()), 10);
  EXPECT_TRUE(r.symmetry_identity);
  EXPECT_LT(r.max_error, 1e-9);
  EXPECT_GT(r.max_error_h2, 1e-6);
}

TEST(Beam, LagrangianWithSymbolicWeights) {
  BeamParams p;
  p.alpha = BeamParams::symbolic_alpha();
  p.beta = BeamParams::symbolic_beta();
  EXPECT_TRUE(beam_lagrangian(p).matches_expected());
}

TEST(Ostrogradsky, ExactRoundTrip) {
  const auto l = beam_lagrangian(numeric_beam());
  const OstrogradskyTransform t(l.lagrangian);
  const std::vector<Rational> w = {Rational(1, 3), Rational(-2, 5), Rational(7, 4), Rational(1, 9)};
  const auto back = t.inverse(t.forward(std::span<const Rational>(w)));
  EXPECT_EQ(back, w);
  const std::vector<double> wd = {0.1, 0.2, -0.3, 0.4};
  const auto bd = t.inverse(t.forward(std::span<const double>(wd)));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(bd[i], wd[i], 1e-12);
}

TEST(Ostrogradsky, NeedsBoundParameters) {
  const auto l = beam_lagrangian(BeamParams{});
  EXPECT_EQ(code_of([&] { OstrogradskyTransform t(l.lagrangian); }), ErrorCode::SymbolicParameters);
}

TEST(Symplecticity, LagrangianMapOnlyIsSymplectic) {
  const auto l = beam_lagrangian(numeric_beam());
  const OstrogradskyTransform t(l.lagrangian);
  const auto lag = symplecticity_check(l.map, t, 10);
  const auto sym = symplecticity_check(beam_symmetric(numeric_beam()).map, t, 10);
  EXPECT_LT(lag.defect, 1e-8);
  EXPECT_GT(sym.defect, 1e-3);
}

TEST(FixedPoints, SpectrumPattern) {
  for (auto kind : {BeamMapKind::Symmetric, BeamMapKind::Lagrangian}) {
    const auto a = beam_fixed_point_analysis(1, Rational(1, 4), Rational(1, 10), kind);
    EXPECT_NEAR(a.w_star, std::sqrt(1.5), 1e-14);
    EXPECT_TRUE(a.pattern_ok);
    EXPECT_EQ(a.fixed_points.size(), 4U);
    for (const auto& f : a.fixed_points) {
      EXPECT_TRUE(f.exact);
      EXPECT_LT(f.residual, 1e-12);
    }
    EXPECT_NEAR(a.continuous_gamma, std::pow(6.0, 0.125), 1e-12);
    EXPECT_EQ(a.continuous_multipliers.size(), 4U);
  }
}

TEST(FixedPoints, NoRealFixedPoint) {
  EXPECT_EQ(code_of([] { beam_fixed_point_analysis(1, -1, Rational(1, 10), BeamMapKind::Symmetric); }),
            ErrorCode::NoRealFixedPoint);
}
