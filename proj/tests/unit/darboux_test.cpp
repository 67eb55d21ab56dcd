#include <gtest/gtest.h>

#include <random>

#include "kahan/casebook.hpp"
#include "kahan/darboux.hpp"
#include "kahan/text.hpp"

using namespace kahan;

namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }

std::vector<Polynomial> polys(const std::vector<DarbouxCertificate>& certs) {
  std::vector<Polynomial> out;
  for (const auto& c : certs) out.push_back(c.p);
  return out;
}

}  // namespace

TEST(Darboux, LotkaVolterraMeasureDensity) {
  const auto m = bind_parameters(lotka_volterra(Polynomial(2)).map, {{"h", Rational(1, 10)}});
  const auto certs = find_darboux(m, 2);
  ASSERT_FALSE(certs.empty());
  EXPECT_TRUE(in_span(polys(certs), P("x1*x2")));
  for (const auto& c : certs) {
    EXPECT_TRUE(c.verified());
    EXPECT_TRUE(darboux_witness(m, c.p, c.cofactor).is_zero());
  }
  const auto measure = invariant_measure(m, certs.front());
  EXPECT_FALSE(measure.description.empty());
}

TEST(Darboux, QuarticSpanAtRandomParameters) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int trial = 0; trial < 5; ++trial) {
    Rational vals[4];
    for (auto& v : vals) v = Rational(num(rng), 1 + static_cast<int>(rng() % 3));
    if (vals[0] == 0) vals[0] = 1;
    const auto q = quartic_oscillator(QuarticParams::rational(vals[0], vals[1], vals[2], vals[3], Rational(1, 7)));
    const auto certs = find_darboux(q.map, 4);
    const auto basis = polys(certs);
    EXPECT_EQ(certs.size(), 2U) << "trial " << trial;
    EXPECT_TRUE(in_span(basis, q.p1)) << "trial " << trial;
    EXPECT_TRUE(in_span(basis, q.p2)) << "trial " << trial;
    for (const auto& c : certs) EXPECT_TRUE(c.verified());
  }
}

TEST(Darboux, FirstIntegralIsInvariant) {
  const auto q = quartic_oscillator(QuarticParams::rational(1, 2, 3, 5, Rational(1, 10)));
  const RationalFunction j = jacobian(q.map).determinant;
  const DarbouxCertificate c1{q.p1, j, 4, darboux_witness(q.map, q.p1, j)};
  const DarbouxCertificate c2{q.p2, j, 4, darboux_witness(q.map, q.p2, j)};
  ASSERT_TRUE(c1.verified());
  ASSERT_TRUE(c2.verified());
  const auto k = first_integral(q.map, c1, c2);
  EXPECT_TRUE(k.invariance_witness.is_zero());
  EXPECT_EQ(k.value, RationalFunction(q.p2, q.p1));
}

TEST(Darboux, RejectsWrongCofactor) {
  const auto q = quartic_oscillator(QuarticParams::rational(1, 2, 3, 5, Rational(1, 10)));
  const DarbouxCertificate bad{P("x1 + 1"), RationalFunction(1), 1, darboux_witness(q.map, P("x1 + 1"), RationalFunction(1))};
  EXPECT_FALSE(bad.verified());
  try {
    (void)invariant_measure(q.map, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CofactorMismatch);
  }
}

TEST(Darboux, RequiresBoundParameters) {
  const auto q = quartic_oscillator(QuarticParams::symbolic());
  try {
    (void)find_darboux(q.map, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SymbolicParameters);
  }
}

TEST(Darboux, CertificateText) {
  const DarbouxCertificate c{P("x1*x2"), RationalFunction(P("2")), 2, Polynomial()};
  EXPECT_EQ(to_string(c), "P = x1*x2\ncofactor = 2\n");
}

TEST(Pencil, EqualUnderChangeOfBasis) {
  const Pencil a{P("1 + beta*x1"), P("x1^2 + x1'^2 - delta")};
  const Pencil b{P("2 + 2*beta*x1 + x1^2 + x1'^2 - delta"), P("3*x1^2 + 3*x1'^2 - 3*delta")};
  EXPECT_EQ(pencil_compare(a, b).result, PencilComparison::Result::Equal);
}

TEST(Pencil, DifferentWithWitness) {
  const Pencil a{P("1"), P("x1*x1'")};
  const Pencil b{P("1"), P("x1^2 + x1'^2")};
  const auto r = pencil_compare(a, b);
  EXPECT_EQ(r.result, PencilComparison::Result::Different);
  EXPECT_EQ(r.joint_rank, 3U);
  EXPECT_FALSE(r.witness.empty());
}
