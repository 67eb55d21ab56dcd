#pragma once

// Exact sparse multivariate polynomials and rational functions over Q.
//
// Variables are either state variables x_j^(k) (component j >= 1, time shift k)
// or named parameters.  The dummy component j = 0 stands for the constant 1 and
// is eliminated at construction, so it never appears in a stored term.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "kahan/error.hpp"

namespace kahan {

using Rational = mpq_class;

/// Nearest double to q (mpq_get_d truncates toward zero).
double to_double(const Rational& q);

using Integer = mpz_class;

enum class VarKind : std::uint8_t { State = 0, Parameter = 1 };

struct VarId {
  VarKind kind = VarKind::State;
  int component = 1;
  int shift = 0;
  std::string name;

  static VarId state(int component, int shift = 0) { return {VarKind::State, component, shift, {}}; }
  static VarId param(std::string name) { return {VarKind::Parameter, 0, 0, std::move(name)}; }

  bool is_state() const noexcept { return kind == VarKind::State; }
  bool is_param() const noexcept { return kind == VarKind::Parameter; }
  bool is_dummy() const noexcept { return is_state() && component == 0; }

  VarId shifted(int by) const {
    VarId v = *this;
    if (v.is_state()) v.shift += by;
    return v;
  }

  // State variables precede parameters; states order by (component, shift),
  // parameters by name.
  friend std::strong_ordering operator<=>(const VarId& a, const VarId& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.component <=> b.component; c != 0) return c;
    if (auto c = a.shift <=> b.shift; c != 0) return c;
    return a.name.compare(b.name) <=> 0;
  }
  friend bool operator==(const VarId&, const VarId&) = default;
};

std::string to_string(const VarId& v);

/// Product of variables with positive exponents, sorted by VarId.
class Monomial {
 public:
  using Factor = std::pair<VarId, int>;

  Monomial() = default;
  explicit Monomial(const VarId& v, int exponent = 1);
  /// Accepts unsorted factors; merges duplicates, drops zero exponents and dummies.
  explicit Monomial(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  int degree() const noexcept;
  int degree_in(const std::function<bool(const VarId&)>& pred) const;
  int state_degree() const { return degree_in([](const VarId& v) { return v.is_state(); }); }
  int exponent(const VarId& v) const;

  /// Removes every factor in `v` and returns the rest.
  Monomial without(const VarId& v) const;
  bool divides(const Monomial& other) const;
  /// Precondition: divides(other).
  Monomial quotient_of(const Monomial& other) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  Monomial map_variables(const std::function<VarId(const VarId&)>& fn) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Graded lexicographic order: total degree first, then lex on VarId order
  /// (a larger exponent on an earlier variable is larger).
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  std::vector<Factor> factors_;
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c);                // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  Polynomial(const VarId& v);                   // NOLINT(google-explicit-constructor)
  Polynomial(const Monomial& m, const Rational& c = 1);

  static Polynomial var(const VarId& v) { return Polynomial(v); }
  static Polynomial x(int component, int shift = 0) { return Polynomial(VarId::state(component, shift)); }
  static Polynomial param(const std::string& name) { return Polynomial(VarId::param(name)); }

  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  /// Constant term (0 when absent).
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  /// Leading term in graded-lex order. Precondition: non-zero.
  const Terms::value_type& leading() const;

  int total_degree() const;
  int degree_in(const std::function<bool(const VarId&)>& pred) const;
  int degree_in(const VarId& v) const;
  int state_degree() const { return degree_in([](const VarId& v) { return v.is_state(); }); }
  std::set<VarId> variables() const;
  bool has_state_variables() const;
  bool has_parameters() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(Polynomial a);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial pow(unsigned e) const;
  Polynomial derivative(const VarId& v) const;
  Polynomial map_variables(const std::function<VarId(const VarId&)>& fn) const;
  /// Shifts every state variable by `by`.
  Polynomial shifted(int by) const;

  /// Coefficient of v^k viewed as a polynomial in v over the other variables.
  Polynomial coefficient_of(const VarId& v, int k) const;

  /// Multiplies by the rational making all coefficients coprime integers with a
  /// positive leading coefficient; returns that factor (1 for zero).
  Rational make_primitive();
  Polynomial primitive() const {
    Polynomial p = *this;
    p.make_primitive();
    return p;
  }
  /// Largest monomial dividing every term (1 for zero).
  Monomial monomial_content() const;
  /// Divides each term by m. Precondition: m divides every term.
  Polynomial divided_by(const Monomial& m) const;

  /// Exact division; nullopt when `divisor` does not divide this polynomial.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

using PolySubstitution = std::map<VarId, Polynomial>;

/// Polynomial composition: replaces each mapped variable by its image.
Polynomial substitute(const Polynomial& p, const PolySubstitution& sigma);

/// Reduced numerator / denominator pair.  Normal form: denominator primitive
/// with positive leading coefficient, common monomial factors cancelled,
/// zero numerator stored as 0/1.  Equality is by cross-multiplication.
class RationalFunction {
 public:
  RationalFunction() : num_(0), den_(1) {}
  RationalFunction(Polynomial num);  // NOLINT(google-explicit-constructor)
  RationalFunction(Polynomial num, Polynomial den);

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_zero() const { return num_.is_zero(); }

  /// Exact-division cancellation: removes the denominator when it divides
  /// the numerator (and vice versa).  Not a full gcd.
  RationalFunction reduced() const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

  RationalFunction pow(unsigned e) const;
  RationalFunction derivative(const VarId& v) const;
  RationalFunction map_variables(const std::function<VarId(const VarId&)>& fn) const;
  RationalFunction shifted(int by) const;

 private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

using Substitution = std::map<VarId, RationalFunction>;

/// Composition p(sigma); variables not in sigma stay fixed.
/// Throws DivisionUndefined when a substituted denominator is zero.
RationalFunction substitute(const Polynomial& p, const Substitution& sigma);
RationalFunction substitute(const RationalFunction& f, const Substitution& sigma);

template <class T>
using Point = std::map<VarId, T>;

Rational evaluate(const Polynomial& p, const Point<Rational>& at);
double evaluate(const Polynomial& p, const Point<double>& at);
/// Throws DenominatorVanished when the denominator is zero at the point.
Rational evaluate(const RationalFunction& f, const Point<Rational>& at);
double evaluate(const RationalFunction& f, const Point<double>& at);

/// Replaces parameters by rational values, leaving state variables symbolic.
Polynomial bind_parameters(const Polynomial& p, const std::map<std::string, Rational>& values);
RationalFunction bind_parameters(const RationalFunction& f, const std::map<std::string, Rational>& values);

struct LinearCollection {
  std::map<VarId, Polynomial> coefficients;
  Polynomial remainder;
};

/// Splits p = sum_v coefficients[v] * v + remainder for the variables in
/// `vars`.  Throws NotLinear when a term has joint degree >= 2 in `vars`.
LinearCollection collect_linear(const Polynomial& p, const std::set<VarId>& vars);

/// Polynomial in a fixed list of double slots, with parameters folded in.
/// Used on the float path where maps are stepped many times.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  /// Throws UnboundVariable when p references something outside `slots`/`params`.
  CompiledPolynomial(const Polynomial& p, std::span<const VarId> slots,
                     const std::map<std::string, double>& params);

  double operator()(std::span<const double> x) const;
  /// Sum of absolute term values, a scale for cancellation checks.
  double magnitude(std::span<const double> x) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> powers;
  };
  std::vector<Term> terms_;
};

}  // namespace kahan
