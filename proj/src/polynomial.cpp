#include "kahan/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>

#include "kahan/text.hpp"

namespace kahan {

std::string to_string(const VarId& v) {
  if (v.is_param()) return v.name;
  std::string out;
  if (v.shift < 0) out.append(static_cast<std::size_t>(-v.shift), '_');
  out += "x" + std::to_string(v.component);
  if (v.shift > 0) out.append(static_cast<std::size_t>(v.shift), '\'');
  return out;
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(const VarId& v, int exponent) {
  if (exponent < 0) throw Error(ErrorCode::ValidationError, "negative exponent");
  if (exponent > 0 && !v.is_dummy()) factors_.emplace_back(v, exponent);
}

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  for (auto& [v, e] : factors) {
    if (e < 0) throw Error(ErrorCode::ValidationError, "negative exponent");
    if (e == 0 || v.is_dummy()) continue;
    if (!factors_.empty() && factors_.back().first == v) {
      factors_.back().second += e;
    } else {
      factors_.emplace_back(std::move(v), e);
    }
  }
}

int Monomial::degree() const noexcept {
  int d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

int Monomial::degree_in(const std::function<bool(const VarId&)>& pred) const {
  int d = 0;
  for (const auto& [v, e] : factors_)
    if (pred(v)) d += e;
  return d;
}

int Monomial::exponent(const VarId& v) const {
  for (const auto& [w, e] : factors_)
    if (w == v) return e;
  return 0;
}

Monomial Monomial::without(const VarId& v) const {
  Monomial m;
  for (const auto& f : factors_)
    if (f.first != v) m.factors_.push_back(f);
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  for (const auto& [v, e] : factors_)
    if (other.exponent(v) < e) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  Monomial m;
  for (const auto& [v, e] : other.factors_) {
    int r = e - exponent(v);
    if (r > 0) m.factors_.emplace_back(v, r);
  }
  return m;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (const auto& [v, e] : a.factors_) {
    int f = std::min(e, b.exponent(v));
    if (f > 0) m.factors_.emplace_back(v, f);
  }
  return m;
}

Monomial Monomial::map_variables(const std::function<VarId(const VarId&)>& fn) const {
  std::vector<Factor> mapped;
  mapped.reserve(factors_.size());
  for (const auto& [v, e] : factors_) mapped.emplace_back(fn(v), e);
  return Monomial(std::move(mapped));
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() && j != b.factors_.end()) {
    if (i->first == j->first) {
      m.factors_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    } else if (i->first < j->first) {
      m.factors_.push_back(*i++);
    } else {
      m.factors_.push_back(*j++);
    }
  }
  m.factors_.insert(m.factors_.end(), i, a.factors_.end());
  m.factors_.insert(m.factors_.end(), j, b.factors_.end());
  return m;
}

bool operator<(const Monomial& a, const Monomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() && j != b.factors_.end()) {
    if (i->first == j->first) {
      if (i->second != j->second) return i->second < j->second;
      ++i;
      ++j;
    } else {
      // The monomial carrying the earlier variable is the larger one.
      return !(i->first < j->first);
    }
  }
  return false;
}

// -------------------------------------------------------------- Polynomial

namespace {

Rational canonical(Rational c) {
  c.canonicalize();
  return c;
}

}  // namespace

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial(), canonical(c));
}

Polynomial::Polynomial(const VarId& v) {
  if (v.is_dummy()) {
    terms_.emplace(Monomial(), Rational(1));
  } else {
    terms_.emplace(Monomial(v), Rational(1));
  }
}

Polynomial::Polynomial(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.emplace(m, canonical(c));
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, canonical(c));
  if (!inserted) {
    it->second += canonical(c);
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const { return coefficient(Monomial()); }

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

const Polynomial::Terms::value_type& Polynomial::leading() const {
  if (terms_.empty()) throw Error(ErrorCode::DivisionUndefined, "leading term of zero polynomial");
  return *terms_.rbegin();
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree());
  return terms_.empty() ? -1 : d;
}

int Polynomial::degree_in(const std::function<bool(const VarId&)>& pred) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.degree_in(pred));
  return d;
}

int Polynomial::degree_in(const VarId& v) const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.exponent(v));
  return d;
}

std::set<VarId> Polynomial::variables() const {
  std::set<VarId> vs;
  for (const auto& t : terms_)
    for (const auto& f : t.first.factors()) vs.insert(f.first);
  return vs;
}

bool Polynomial::has_state_variables() const {
  for (const auto& t : terms_)
    for (const auto& f : t.first.factors())
      if (f.first.is_state()) return true;
  return false;
}

bool Polynomial::has_parameters() const {
  for (const auto& t : terms_)
    for (const auto& f : t.first.factors())
      if (f.first.is_param()) return true;
  return false;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  const Rational k = canonical(c);
  for (auto& t : terms_) t.second *= k;
  return *this;
}

Polynomial operator-(Polynomial a) {
  for (auto& t : a.terms_) t.second = -t.second;
  return a;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(const VarId& v) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    const int e = m.exponent(v);
    if (e == 0) continue;
    std::vector<Monomial::Factor> fs;
    for (const auto& f : m.factors()) fs.emplace_back(f.first, f.first == v ? f.second - 1 : f.second);
    r.add_term(Monomial(std::move(fs)), c * e);
  }
  return r;
}

Polynomial Polynomial::map_variables(const std::function<VarId(const VarId&)>& fn) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.add_term(m.map_variables(fn), c);
  return r;
}

Polynomial Polynomial::shifted(int by) const {
  if (by == 0) return *this;
  return map_variables([by](const VarId& v) { return v.shifted(by); });
}

Polynomial Polynomial::coefficient_of(const VarId& v, int k) const {
  Polynomial r;
  for (const auto& [m, c] : terms_)
    if (m.exponent(v) == k) r.add_term(m.without(v), c);
  return r;
}

Rational Polynomial::make_primitive() {
  if (terms_.empty()) return 1;
  Integer lcm_den = 1;
  for (const auto& t : terms_) lcm_den = lcm(lcm_den, t.second.get_den());
  Integer g = 0;
  for (const auto& t : terms_) g = gcd(g, Integer(t.second.get_num() * (lcm_den / t.second.get_den())));
  Rational factor(lcm_den, g);
  factor.canonicalize();
  if (terms_.rbegin()->second < 0) factor = -factor;
  for (auto& t : terms_) t.second *= factor;
  return factor;
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.begin()->first;
  for (const auto& t : terms_) {
    g = Monomial::gcd(g, t.first);
    if (g.is_one()) break;
  }
  return g;
}

Polynomial Polynomial::divided_by(const Monomial& m) const {
  if (m.is_one()) return *this;
  Polynomial r;
  for (const auto& [t, c] : terms_) r.terms_.emplace(m.quotient_of(t), c);
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorCode::DivisionUndefined, "division by zero polynomial");
  const auto& [lead_m, lead_c] = divisor.leading();
  Polynomial rem = *this;
  Polynomial q;
  while (!rem.is_zero()) {
    const auto& [rm, rc] = rem.leading();
    if (!lead_m.divides(rm)) return std::nullopt;
    Polynomial t(lead_m.quotient_of(rm), rc / lead_c);
    q += t;
    rem -= t * divisor;
  }
  return q;
}

Polynomial substitute(const Polynomial& p, const PolySubstitution& sigma) {
  if (sigma.empty()) return p;
  std::map<VarId, std::vector<Polynomial>> powers;
  auto power = [&](const VarId& v, const Polynomial& image, int e) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Polynomial(1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * image);
    return cache[static_cast<std::size_t>(e)];
  };
  Polynomial r;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Factor> fixed;
    Polynomial term(1);
    for (const auto& [v, e] : m.factors()) {
      auto it = sigma.find(v);
      if (it == sigma.end()) {
        fixed.emplace_back(v, e);
      } else {
        term *= power(v, it->second, e);
      }
    }
    r += term * Polynomial(Monomial(std::move(fixed)), c);
  }
  return r;
}

Polynomial bind_parameters(const Polynomial& p, const std::map<std::string, Rational>& values) {
  PolySubstitution s;
  for (const auto& [name, value] : values) s.emplace(VarId::param(name), Polynomial(value));
  return substitute(p, s);
}

RationalFunction bind_parameters(const RationalFunction& f, const std::map<std::string, Rational>& values) {
  return RationalFunction(bind_parameters(f.num(), values), bind_parameters(f.den(), values));
}

// -------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)), den_(1) { normalize(); }

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void RationalFunction::normalize() {
  if (den_.is_zero()) throw Error(ErrorCode::DivisionUndefined, "zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  Monomial g = Monomial::gcd(num_.monomial_content(), den_.monomial_content());
  if (!g.is_one()) {
    num_ = num_.divided_by(g);
    den_ = den_.divided_by(g);
  }
  num_ *= den_.make_primitive();
}

RationalFunction RationalFunction::reduced() const {
  if (den_.is_constant()) return *this;
  if (num_ == den_) return RationalFunction(1);
  if (auto q = num_.divide_exact(den_)) return RationalFunction(std::move(*q));
  if (auto q = den_.divide_exact(num_)) return RationalFunction(Polynomial(1), std::move(*q));
  return *this;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a) {
  RationalFunction r = a;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.den_ == b.num_) return RationalFunction(a.num_, b.den_);
  if (b.den_ == a.num_) return RationalFunction(b.num_, a.den_);
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionUndefined, "division by zero rational function");
  return a * RationalFunction(b.den_, b.num_);
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

RationalFunction RationalFunction::pow(unsigned e) const { return RationalFunction(num_.pow(e), den_.pow(e)); }

RationalFunction RationalFunction::derivative(const VarId& v) const {
  if (den_.is_constant()) return RationalFunction(num_.derivative(v), den_);
  return RationalFunction(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

RationalFunction RationalFunction::map_variables(const std::function<VarId(const VarId&)>& fn) const {
  return RationalFunction(num_.map_variables(fn), den_.map_variables(fn));
}

RationalFunction RationalFunction::shifted(int by) const {
  return RationalFunction(num_.shifted(by), den_.shifted(by));
}

RationalFunction substitute(const Polynomial& p, const Substitution& sigma) {
  if (sigma.empty()) return RationalFunction(p);
  // Variables sharing an identical denominator are cleared together.
  std::vector<Polynomial> group_den;
  std::map<VarId, int> group_of;
  for (const auto& v : p.variables()) {
    auto it = sigma.find(v);
    if (it == sigma.end() || it->second.den().is_constant()) continue;
    const Polynomial& d = it->second.den();
    auto g = std::find(group_den.begin(), group_den.end(), d);
    group_of[v] = static_cast<int>(g - group_den.begin());
    if (g == group_den.end()) group_den.push_back(d);
  }
  std::vector<int> group_max(group_den.size(), 0);
  for (const auto& t : p.terms()) {
    std::vector<int> deg(group_den.size(), 0);
    for (const auto& [v, e] : t.first.factors()) {
      auto it = group_of.find(v);
      if (it != group_of.end()) deg[static_cast<std::size_t>(it->second)] += e;
    }
    for (std::size_t g = 0; g < deg.size(); ++g) group_max[g] = std::max(group_max[g], deg[g]);
  }

  std::map<VarId, std::vector<Polynomial>> num_pow;
  std::vector<std::vector<Polynomial>> den_pow(group_den.size());
  auto cached = [](std::vector<Polynomial>& cache, const Polynomial& base, int e) -> const Polynomial& {
    if (cache.empty()) cache.push_back(Polynomial(1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[static_cast<std::size_t>(e)];
  };

  Polynomial num;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Factor> fixed;
    std::vector<int> deg(group_den.size(), 0);
    Polynomial term(1);
    for (const auto& [v, e] : m.factors()) {
      auto it = sigma.find(v);
      if (it == sigma.end()) {
        fixed.emplace_back(v, e);
        continue;
      }
      const RationalFunction& image = it->second;
      term *= cached(num_pow[v], image.num(), e);
      auto g = group_of.find(v);
      if (g != group_of.end()) deg[static_cast<std::size_t>(g->second)] += e;
    }
    for (std::size_t g = 0; g < deg.size(); ++g)
      term *= cached(den_pow[g], group_den[g], group_max[g] - deg[g]);
    num += term * Polynomial(Monomial(std::move(fixed)), c);
  }
  Polynomial den(1);
  for (std::size_t g = 0; g < group_den.size(); ++g) den *= cached(den_pow[g], group_den[g], group_max[g]);
  return RationalFunction(std::move(num), std::move(den));
}

RationalFunction substitute(const RationalFunction& f, const Substitution& sigma) {
  RationalFunction n = substitute(f.num(), sigma);
  RationalFunction d = substitute(f.den(), sigma);
  if (d.is_zero()) throw Error(ErrorCode::DivisionUndefined, "substituted denominator is zero");
  return n / d;
}

// -------------------------------------------------------------- evaluation

double to_double(const Rational& q) {
  const double d = q.get_d();
  if (!std::isfinite(d) || q == Rational(d)) return d;
  const double toward = q > Rational(d) ? std::nextafter(d, HUGE_VAL) : std::nextafter(d, -HUGE_VAL);
  if (!std::isfinite(toward)) return d;
  const Rational ed = abs(q - Rational(d));
  const Rational et = abs(q - Rational(toward));
  if (et < ed) return toward;
  if (ed < et) return d;
  return (std::bit_cast<std::uint64_t>(d) & 1U) == 0 ? d : toward;
}


namespace {

template <class T>
T eval_impl(const Polynomial& p, const Point<T>& at) {
  T sum = 0;
  for (const auto& [m, c] : p.terms()) {
    T term;
    if constexpr (std::is_same_v<T, double>) {
      term = to_double(c);
    } else {
      term = c;
    }
    for (const auto& [v, e] : m.factors()) {
      auto it = at.find(v);
      if (it == at.end()) throw Error(ErrorCode::UnboundVariable, to_string(v));
      T f = it->second;
      for (int k = 0; k < e; ++k) term *= f;
    }
    sum += term;
  }
  return sum;
}

}  // namespace

Rational evaluate(const Polynomial& p, const Point<Rational>& at) { return eval_impl(p, at); }
double evaluate(const Polynomial& p, const Point<double>& at) { return eval_impl(p, at); }

Rational evaluate(const RationalFunction& f, const Point<Rational>& at) {
  Rational d = evaluate(f.den(), at);
  if (d == 0) throw Error(ErrorCode::DenominatorVanished, "denominator " + to_string(f.den()) + " is zero");
  return evaluate(f.num(), at) / d;
}

double evaluate(const RationalFunction& f, const Point<double>& at) {
  double d = evaluate(f.den(), at);
  if (d == 0.0) throw Error(ErrorCode::DenominatorVanished, "denominator " + to_string(f.den()) + " is zero");
  return evaluate(f.num(), at) / d;
}

LinearCollection collect_linear(const Polynomial& p, const std::set<VarId>& vars) {
  LinearCollection out;
  for (const auto& [m, c] : p.terms()) {
    const VarId* hit = nullptr;
    int joint = 0;
    for (const auto& [v, e] : m.factors()) {
      if (vars.count(v) != 0) {
        joint += e;
        hit = &v;
      }
    }
    if (joint == 0) {
      out.remainder += Polynomial(m, c);
    } else if (joint == 1) {
      out.coefficients[*hit] += Polynomial(m.without(*hit), c);
    } else {
      throw Error(ErrorCode::NotLinear, "term " + to_string(Polynomial(m, c)) + " has degree " +
                                            std::to_string(joint) + " in the collected variables");
    }
  }
  return out;
}

// ------------------------------------------------------ CompiledPolynomial

CompiledPolynomial::CompiledPolynomial(const Polynomial& p, std::span<const VarId> slots,
                                       const std::map<std::string, double>& params) {
  for (const auto& [m, c] : p.terms()) {
    Term t{to_double(c), {}};
    for (const auto& [v, e] : m.factors()) {
      if (v.is_param()) {
        auto it = params.find(v.name);
        if (it == params.end()) throw Error(ErrorCode::UnboundVariable, "parameter " + v.name);
        t.coeff *= std::pow(it->second, e);
        continue;
      }
      auto s = std::find(slots.begin(), slots.end(), v);
      if (s == slots.end()) throw Error(ErrorCode::UnboundVariable, to_string(v));
      t.powers.emplace_back(static_cast<int>(s - slots.begin()), e);
    }
    terms_.push_back(std::move(t));
  }
}

double CompiledPolynomial::operator()(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (auto [slot, e] : t.powers)
      for (int k = 0; k < e; ++k) v *= x[static_cast<std::size_t>(slot)];
    sum += v;
  }
  return sum;
}

double CompiledPolynomial::magnitude(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (auto [slot, e] : t.powers)
      for (int k = 0; k < e; ++k) v *= x[static_cast<std::size_t>(slot)];
    sum += std::abs(v);
  }
  return sum;
}

}  // namespace kahan
