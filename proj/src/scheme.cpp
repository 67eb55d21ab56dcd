#include "kahan/scheme.hpp"

#include <algorithm>

#include "kahan/text.hpp"

namespace kahan {

namespace {

Integer binomial(int n, int k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

void PolyOdeSystem::validate() const {
  if (order < 1) throw Error(ErrorCode::InvalidSystem, "order must be >= 1");
  if (dim < 1) throw Error(ErrorCode::InvalidSystem, "dimension must be >= 1");
  if (static_cast<int>(rhs.size()) != dim)
    throw Error(ErrorCode::InvalidSystem, "expected " + std::to_string(dim) + " right-hand sides");
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    for (const auto& v : rhs[i].variables()) {
      if (!v.is_state()) continue;
      if (v.shift != 0) throw Error(ErrorCode::InvalidSystem, "shifted variable " + to_string(v) + " in rhs");
      if (v.component > dim) throw Error(ErrorCode::InvalidSystem, "component out of range: " + to_string(v));
    }
    if (rhs[i].state_degree() > order + 1)
      throw Error(ErrorCode::DegreeTooHigh, "rhs " + std::to_string(i + 1) + " has state degree " +
                                                std::to_string(rhs[i].state_degree()) + " > " +
                                                std::to_string(order + 1));
  }
}

std::vector<VarId> ImplicitScheme::level(int shift) const {
  std::vector<VarId> vs;
  for (int j = 1; j <= dim; ++j) vs.push_back(VarId::state(j, shift));
  return vs;
}

Polynomial symmetrize_monomial(const Monomial& m, int order) {
  std::vector<int> slots;
  std::vector<Monomial::Factor> params;
  for (const auto& [v, e] : m.factors()) {
    if (v.is_param()) {
      params.emplace_back(v, e);
      continue;
    }
    if (v.shift != 0) throw Error(ErrorCode::InvalidSystem, "symmetrize expects shift-0 variables");
    slots.insert(slots.end(), static_cast<std::size_t>(e), v.component);
  }
  if (static_cast<int>(slots.size()) > order + 1)
    throw Error(ErrorCode::DegreeTooHigh, "monomial " + to_string(m) + " has state degree " +
                                              std::to_string(slots.size()) + " > " + std::to_string(order + 1));
  slots.resize(static_cast<std::size_t>(order + 1), 0);
  std::sort(slots.begin(), slots.end());

  // Each distinct arrangement of the multiset occurs equally often among the
  // (n+1)! permutations, so averaging over distinct arrangements is the same.
  Polynomial sum;
  long count = 0;
  do {
    std::vector<Monomial::Factor> fs = params;
    for (std::size_t k = 0; k < slots.size(); ++k)
      fs.emplace_back(VarId::state(slots[k], static_cast<int>(k)), 1);
    sum += Polynomial(Monomial(std::move(fs)));
    ++count;
  } while (std::next_permutation(slots.begin(), slots.end()));
  sum *= Rational(1, count);
  return sum;
}

Polynomial symmetrize(const Polynomial& p, int order) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    Polynomial s = symmetrize_monomial(m, order);
    s *= c;
    out += s;
  }
  return out;
}

Polynomial difference_stencil(int component, int order) {
  Polynomial s;
  for (int k = 0; k <= order; ++k) {
    Rational c(binomial(order, k));
    if ((order - k) % 2 != 0) c = -c;
    s += Polynomial(Monomial(VarId::state(component, k)), c);
  }
  return s;
}

ImplicitScheme discretize(const PolyOdeSystem& sys) {
  sys.validate();
  ImplicitScheme s{sys.order, sys.dim, {}};
  const Polynomial hn = Polynomial::param(kStepParam).pow(static_cast<unsigned>(sys.order));
  for (int i = 0; i < sys.dim; ++i)
    s.equations.push_back(difference_stencil(i + 1, sys.order) - hn * symmetrize(sys.rhs[static_cast<std::size_t>(i)], sys.order));
  return s;
}

Polynomial reverse_shifts(const Polynomial& p, int order) {
  return p.map_variables([order](const VarId& v) {
    VarId w = v;
    if (w.is_state()) w.shift = order - w.shift;
    return w;
  });
}

ImplicitScheme recenter(const ImplicitScheme& s, int offset) {
  ImplicitScheme r = s;
  for (auto& e : r.equations) e = e.shifted(offset);
  return r;
}

VecfCheck check_vecf_identity(const PolyOdeSystem& sys) {
  sys.validate();
  if (sys.order != 2) throw Error(ErrorCode::InvalidSystem, "vector-field identity applies to order 2");
  const int n = sys.dim;
  auto at = [n](const std::vector<std::pair<int, Rational>>& weights) {
    PolySubstitution s;
    for (int j = 1; j <= n; ++j) {
      Polynomial e;
      for (const auto& [k, w] : weights) e += Polynomial(Monomial(VarId::state(j, k)), w);
      s.emplace(VarId::state(j, 0), e);
    }
    return s;
  };
  const Rational third(1, 3);
  const Rational half(1, 2);
  const auto mid3 = at({{0, third}, {1, third}, {2, third}});
  const auto m01 = at({{0, half}, {1, half}});
  const auto m02 = at({{0, half}, {2, half}});
  const auto m12 = at({{1, half}, {2, half}});
  const auto p0 = at({{0, Rational(1)}});
  const auto p1 = at({{1, Rational(1)}});
  const auto p2 = at({{2, Rational(1)}});

  for (int i = 0; i < n; ++i) {
    const Polynomial& f = sys.rhs[static_cast<std::size_t>(i)];
    Polynomial rhs = substitute(f, mid3);
    rhs *= Rational(9, 2);
    Polynomial pairs = substitute(f, m01) + substitute(f, m02) + substitute(f, m12);
    pairs *= Rational(4, 3);
    Polynomial points = substitute(f, p0) + substitute(f, p1) + substitute(f, p2);
    points *= Rational(1, 6);
    rhs = rhs - pairs + points;
    Polynomial diff = rhs - symmetrize(f, 2);
    if (!diff.is_zero()) return {false, i + 1, diff.leading().first};
  }
  return {true, std::nullopt, std::nullopt};
}

namespace {

PolySubstitution affine_substitution(const RationalMatrix& a, const RationalVector& b, int shift) {
  const std::size_t n = a.size();
  PolySubstitution s;
  for (std::size_t j = 0; j < n; ++j) {
    Polynomial e(b[j]);
    for (std::size_t l = 0; l < n; ++l)
      e += Polynomial(Monomial(VarId::state(static_cast<int>(l + 1), shift)), a[j][l]);
    s.emplace(VarId::state(static_cast<int>(j + 1), shift), std::move(e));
  }
  return s;
}

std::vector<Polynomial> apply_inverse(const RationalMatrix& inv, const std::vector<Polynomial>& v) {
  std::vector<Polynomial> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (inv[i][j] == 0) continue;
      Polynomial t = v[j];
      t *= inv[i][j];
      out[i] += t;
    }
  return out;
}

void check_affine_shape(std::size_t dim, const RationalMatrix& a, const RationalVector& b) {
  if (a.size() != dim || b.size() != dim)
    throw Error(ErrorCode::InvalidSystem, "affine map dimension does not match the system");
}

}  // namespace

PolyOdeSystem affine_conjugate(const PolyOdeSystem& sys, const RationalMatrix& a, const RationalVector& b) {
  sys.validate();
  check_affine_shape(static_cast<std::size_t>(sys.dim), a, b);
  const RationalMatrix inv = inverse_exact(a);
  const PolySubstitution s = affine_substitution(a, b, 0);
  std::vector<Polynomial> pulled;
  for (const auto& f : sys.rhs) pulled.push_back(substitute(f, s));
  return {sys.order, sys.dim, apply_inverse(inv, pulled)};
}

ImplicitScheme affine_transform_scheme(const ImplicitScheme& s, const RationalMatrix& a, const RationalVector& b) {
  check_affine_shape(static_cast<std::size_t>(s.dim), a, b);
  const RationalMatrix inv = inverse_exact(a);
  PolySubstitution all;
  for (int k = 0; k <= s.order; ++k) all.merge(affine_substitution(a, b, k));
  std::vector<Polynomial> eqs;
  for (const auto& e : s.equations) eqs.push_back(substitute(e, all));
  return {s.order, s.dim, apply_inverse(inv, eqs)};
}

}  // namespace kahan
