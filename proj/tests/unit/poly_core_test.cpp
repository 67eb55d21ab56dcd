#include <gtest/gtest.h>

#include <random>

#include "kahan/linalg.hpp"
#include "kahan/polynomial.hpp"
#include "kahan/text.hpp"

using namespace kahan;

namespace kahan {
void PrintTo(const Polynomial& p, std::ostream* os) { *os << to_string(p); }
}  // namespace kahan

namespace {

class RandomPolys {
 public:
  explicit RandomPolys(std::uint64_t seed) : rng_(seed) {}

  Rational coeff() {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    Rational q(num(rng_), den(rng_));
    q.canonicalize();
    return q;
  }

  Polynomial poly(int terms = 4, int maxdeg = 3) {
    const std::vector<VarId> vars = {VarId::state(1, 0), VarId::state(1, 1), VarId::state(2, 0),
                                     VarId::param("a")};
    std::uniform_int_distribution<int> pick(0, static_cast<int>(vars.size()) - 1);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    Polynomial p;
    for (int t = 0; t < terms; ++t) {
      std::vector<Monomial::Factor> f;
      const int d = deg(rng_);
      for (int k = 0; k < d; ++k) f.emplace_back(vars[static_cast<std::size_t>(pick(rng_))], 1);
      p += Polynomial(Monomial(f), coeff());
    }
    return p;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

TEST(Polynomial, RingAxiomsOnRandomTriples) {
  RandomPolys g(1);
  for (int i = 0; i < 50; ++i) {
    const Polynomial a = g.poly(), b = g.poly(), c = g.poly();
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(a * Polynomial(1), a);
  }
}

TEST(Polynomial, DummyComponentIsOne) {
  EXPECT_EQ(Polynomial::x(0, 3), Polynomial(1));
  EXPECT_EQ(Polynomial::x(0) * Polynomial::x(1), Polynomial::x(1));
  EXPECT_EQ(parse_polynomial("x0^2*x1"), parse_polynomial("x1"));
}

TEST(Polynomial, GradedLexLeadingTerm) {
  const Polynomial p = parse_polynomial("x1 + x2^2 + 3*x1*x2");
  EXPECT_EQ(p.leading().first, Monomial({{VarId::state(1), 1}, {VarId::state(2), 1}}));
  EXPECT_EQ(p.total_degree(), 2);
}

TEST(Polynomial, DerivativeSatisfiesLeibniz) {
  RandomPolys g(2);
  const VarId v = VarId::state(1, 0);
  for (int i = 0; i < 30; ++i) {
    const Polynomial a = g.poly(), b = g.poly();
    EXPECT_EQ((a * b).derivative(v), a.derivative(v) * b + a * b.derivative(v));
  }
}

TEST(Polynomial, ExactDivision) {
  RandomPolys g(3);
  for (int i = 0; i < 20; ++i) {
    const Polynomial a = g.poly(), b = g.poly();
    if (b.is_zero()) continue;
    const auto q = (a * b).divide_exact(b);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, a);
  }
  EXPECT_FALSE(parse_polynomial("x1^2 + 1").divide_exact(parse_polynomial("x1 + 1")).has_value());
}

TEST(Polynomial, SubstituteCommutesWithEvaluation) {
  RandomPolys g(4);
  for (int i = 0; i < 30; ++i) {
    const Polynomial p = g.poly(5, 3);
    const PolySubstitution sigma = {{VarId::state(1, 0), g.poly(3, 2)}, {VarId::state(2, 0), g.poly(3, 2)}};
    const Point<Rational> at = {{VarId::state(1, 0), g.coeff()},
                                {VarId::state(1, 1), g.coeff()},
                                {VarId::state(2, 0), g.coeff()},
                                {VarId::param("a"), g.coeff()}};
    Point<Rational> image = at;
    for (const auto& [v, q] : sigma) image[v] = evaluate(q, at);
    EXPECT_EQ(evaluate(substitute(p, sigma), at), evaluate(p, image));
  }
}

TEST(Polynomial, CollectLinearReconstructs) {
  RandomPolys g(5);
  const VarId u = VarId::state(3, 2);
  const VarId v = VarId::state(4, 2);
  for (int i = 0; i < 20; ++i) {
    const Polynomial p = g.poly() * Polynomial(u) + g.poly() * Polynomial(v) + g.poly();
    const auto lc = collect_linear(p, {u, v});
    Polynomial back = lc.remainder;
    for (const auto& [var, c] : lc.coefficients) back += c * Polynomial(var);
    EXPECT_EQ(back, p);
  }
  EXPECT_THROW(collect_linear(Polynomial(u) * Polynomial(v), {u, v}), Error);
}

TEST(Polynomial, BindParameters) {
  const Polynomial p = parse_polynomial("a*x1^2 + b");
  EXPECT_EQ(bind_parameters(p, {{"a", 2}, {"b", Rational(1, 3)}}), parse_polynomial("2*x1^2 + 1/3"));
}

TEST(RationalFunction, EqualityByCrossMultiplication) {
  const RationalFunction f(parse_polynomial("x1^2 - 1"), parse_polynomial("x1 - 1"));
  EXPECT_EQ(f, RationalFunction(parse_polynomial("x1 + 1")));
  const RationalFunction g(parse_polynomial("2*x1"), parse_polynomial("4*x2"));
  EXPECT_EQ(g, RationalFunction(parse_polynomial("x1"), parse_polynomial("2*x2")));
}

TEST(RationalFunction, FieldOperations) {
  const RationalFunction a(parse_polynomial("x1"), parse_polynomial("x2 + 1"));
  const RationalFunction b(parse_polynomial("x2"), parse_polynomial("x1 - 3"));
  EXPECT_EQ((a + b) - b, a);
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a.pow(2), a * a);
}

TEST(RationalFunction, EvaluationAtPoleThrows) {
  const RationalFunction f(parse_polynomial("1"), parse_polynomial("x1 - 1"));
  try {
    (void)evaluate(f, Point<Rational>{{VarId::state(1), Rational(1)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DenominatorVanished);
  }
}

TEST(RationalFunction, QuotientRuleDerivative) {
  const VarId x = VarId::state(1);
  const RationalFunction f(parse_polynomial("x1^2 + a"), parse_polynomial("x1 - b"));
  const RationalFunction expected(parse_polynomial("2*x1*(x1 - b) - (x1^2 + a)"), parse_polynomial("(x1 - b)^2"));
  EXPECT_EQ(f.derivative(x), expected);
}

TEST(Text, PrintParseRoundTrip) {
  RandomPolys g(6);
  for (int i = 0; i < 50; ++i) {
    const Polynomial p = g.poly(6, 4).shifted(i % 3 - 1);
    EXPECT_EQ(parse_polynomial(to_string(p)), p) << to_string(p);
  }
}

TEST(Text, ShiftSyntax) {
  EXPECT_EQ(parse_polynomial("x1''"), Polynomial::x(1, 2));
  EXPECT_EQ(parse_polynomial("x1'3"), Polynomial::x(1, 3));
  EXPECT_EQ(parse_polynomial("__x2"), Polynomial::x(2, -2));
  EXPECT_EQ(parse_polynomial("3/2*x1'^2*x2 - a*_x1 + h^2"),
            Rational(3, 2) * Polynomial::x(1, 1).pow(2) * Polynomial::x(2) - Polynomial::param("a") * Polynomial::x(1, -1) +
                Polynomial::param("h").pow(2));
}

TEST(Text, ParseErrorCarriesColumn) {
  try {
    (void)parse_polynomial("x1 + * 2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 6);
  }
  EXPECT_THROW(parse_polynomial("x1 / x2"), ParseError);
}

TEST(Text, ExactDecimals) {
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-3/7"), Rational(-3, 7));
  EXPECT_EQ(parse_rational("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_rational("010"), 10);
  EXPECT_EQ(parse_polynomial("007/010*x1"), Rational(7, 10) * Polynomial::x(1));
  EXPECT_EQ(to_double(Rational(1, 10)), 0.1);
  EXPECT_EQ(to_double(Rational(-2, 3)), -2.0 / 3.0);
}

TEST(Linalg, NullspaceVectorsAnnihilateAndCountMatchesRank) {
  RandomPolys g(7);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int i = 0; i < 40; ++i) {
    const std::size_t rows = static_cast<std::size_t>(dim(g.rng()));
    const std::size_t cols = static_cast<std::size_t>(dim(g.rng()));
    RationalMatrix m(rows, RationalVector(cols));
    for (auto& r : m)
      for (auto& x : r) x = (g.rng()() % 3 == 0) ? Rational(0) : g.coeff();
    if (rows > 1) m.back() = m.front();
    const auto ns = nullspace_exact(m, cols);
    EXPECT_EQ(ns.size() + rank_exact(m), cols);
    for (const auto& v : ns) {
      for (const auto& r : m) {
        Rational s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += r[j] * v[j];
        EXPECT_EQ(s, 0);
      }
    }
  }
}

TEST(Linalg, InverseExact) {
  const RationalMatrix m = {{2, 1}, {Rational(1, 2), 3}};
  const auto inv = inverse_exact(m);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < 2; ++k) s += m[i][k] * inv[k][j];
      EXPECT_EQ(s, i == j ? 1 : 0);
    }
  EXPECT_THROW(inverse_exact({{1, 2}, {2, 4}}), Error);
}

TEST(Linalg, LuSolve) {
  Matrix a(3, 3);
  const double v[3][3] = {{4, 1, 2}, {1, 5, 1}, {2, 1, 6}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = v[i][j];
  const LuDecomposition lu(a);
  const std::vector<double> b = {1, 2, 3};
  const auto x = lu.solve(b);
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 3; ++j) s += v[i][j] * x[j];
    EXPECT_NEAR(s, b[i], 1e-12);
  }
  EXPECT_NEAR(lu.determinant(), 4 * 29 - 1 * 4 + 2 * (-9), 1e-12);
}
