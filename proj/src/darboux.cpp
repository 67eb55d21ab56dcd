#include "kahan/darboux.hpp"

#include <algorithm>
#include <sstream>

#include "kahan/linalg.hpp"
#include "kahan/text.hpp"

namespace kahan {

namespace {

void require_bound(const BirationalMap& m) {
  if (!m.has_symbolic()) throw Error(ErrorCode::InvalidSystem, "map has no symbolic forward components");
  for (const auto& f : m.forward)
    if (f.num().has_parameters() || f.den().has_parameters())
      throw Error(ErrorCode::SymbolicParameters, "bind all parameters before searching for Darboux polynomials");
}

Substitution forward_substitution(const BirationalMap& m) {
  Substitution s;
  for (std::size_t i = 0; i < m.state.size(); ++i) s.emplace(m.state[i], m.forward[i]);
  return s;
}

void enumerate_monomials(const std::vector<VarId>& vars, std::size_t idx, int remaining,
                         std::vector<Monomial::Factor>& current, std::vector<Monomial>& out) {
  if (idx == vars.size()) {
    out.emplace_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    if (e > 0) current.emplace_back(vars[idx], e);
    enumerate_monomials(vars, idx + 1, remaining - e, current, out);
    if (e > 0) current.pop_back();
  }
}

RationalMatrix coefficient_matrix(const std::vector<Polynomial>& columns) {
  std::map<Monomial, std::size_t> rows;
  for (const auto& c : columns)
    for (const auto& t : c.terms()) rows.emplace(t.first, 0);
  std::size_t r = 0;
  for (auto& entry : rows) entry.second = r++;
  RationalMatrix a(rows.size(), RationalVector(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [m, c] : columns[j].terms()) a[rows[m]][j] = c;
  return a;
}

std::string join_state(const BirationalMap& m) {
  std::string s;
  for (std::size_t i = 0; i < m.state.size(); ++i) {
    if (i > 0) s += "^";
    s += "d" + to_string(m.state[i]);
  }
  return s;
}

}  // namespace

std::string to_string(const DarbouxCertificate& c) {
  return "P = " + to_string(c.p) + "\ncofactor = " + to_string(c.cofactor) + "\n";
}

RationalFunction jacobian_det_2d(const BirationalMap& m) {
  if (m.state_size() != 2) throw Error(ErrorCode::InvalidSystem, "expected a map on two state variables");
  return jacobian(m).determinant;
}

Polynomial darboux_witness(const BirationalMap& m, const Polynomial& p, const RationalFunction& cofactor) {
  const RationalFunction image = substitute(p, forward_substitution(m));
  return image.num() * cofactor.den() - cofactor.num() * p * image.den();
}

std::vector<DarbouxCertificate> find_darboux(const BirationalMap& m, int maxdeg) {
  require_bound(m);
  if (maxdeg < 0) throw Error(ErrorCode::ValidationError, "maxdeg must be >= 0");
  const RationalFunction cofactor = jacobian(m).determinant;

  // Ansatz monomials, leading (graded-lex largest) first.
  std::vector<Monomial> ansatz;
  std::vector<Monomial::Factor> scratch;
  enumerate_monomials(m.state, 0, maxdeg, scratch, ansatz);
  std::sort(ansatz.begin(), ansatz.end(), [](const Monomial& a, const Monomial& b) { return b < a; });

  // Group components by identical denominators; L = prod_g D_g^maxdeg.
  std::vector<Polynomial> groups;
  std::vector<int> group_of(m.forward.size(), -1);
  for (std::size_t i = 0; i < m.forward.size(); ++i) {
    const Polynomial& d = m.forward[i].den();
    if (d.is_constant()) continue;
    auto it = std::find(groups.begin(), groups.end(), d);
    group_of[i] = static_cast<int>(it - groups.begin());
    if (it == groups.end()) groups.push_back(d);
  }
  std::vector<std::vector<Polynomial>> num_pow(m.forward.size());
  std::vector<std::vector<Polynomial>> den_pow(groups.size());
  auto power = [](std::vector<Polynomial>& cache, const Polynomial& base, int e) -> const Polynomial& {
    if (cache.empty()) cache.emplace_back(1);
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[static_cast<std::size_t>(e)];
  };
  Polynomial clear(1);
  for (std::size_t g = 0; g < groups.size(); ++g) clear *= power(den_pow[g], groups[g], maxdeg);
  const Polynomial jn_clear = cofactor.num() * clear;

  std::vector<Polynomial> columns;
  columns.reserve(ansatz.size());
  for (const auto& mono : ansatz) {
    Polynomial image(1);
    std::vector<int> used(groups.size(), 0);
    for (std::size_t i = 0; i < m.state.size(); ++i) {
      const int e = mono.exponent(m.state[i]);
      if (e == 0) continue;
      image *= power(num_pow[i], m.forward[i].num(), e);
      if (group_of[i] >= 0) used[static_cast<std::size_t>(group_of[i])] += e;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) image *= power(den_pow[g], groups[g], maxdeg - used[g]);
    columns.push_back(image * cofactor.den() - jn_clear * Polynomial(mono));
  }

  const auto basis = nullspace_exact(coefficient_matrix(columns), ansatz.size());
  std::vector<DarbouxCertificate> certs;
  for (const auto& u : basis) {
    Polynomial p;
    for (std::size_t k = 0; k < ansatz.size(); ++k)
      if (u[k] != 0) p += Polynomial(ansatz[k], u[k]);
    p.make_primitive();
    DarbouxCertificate c{p, cofactor, maxdeg, darboux_witness(m, p, cofactor)};
    certs.push_back(std::move(c));
  }
  return certs;
}

InvariantMeasure invariant_measure(const BirationalMap& m, const DarbouxCertificate& cert) {
  if (!darboux_witness(m, cert.p, cert.cofactor).is_zero())
    throw Error(ErrorCode::CofactorMismatch, "P(phi) != J * P for " + to_string(cert.p));
  if (!(cert.cofactor == jacobian(m).determinant))
    throw Error(ErrorCode::CofactorMismatch, "certificate cofactor is not the Jacobian determinant");
  InvariantMeasure im{cert.p, {}};
  im.description = join_state(m) + (cert.p == Polynomial(1) ? "" : " / (" + to_string(cert.p) + ")");
  return im;
}

FirstIntegral first_integral(const BirationalMap& m, const DarbouxCertificate& c1, const DarbouxCertificate& c2) {
  if (!(c1.cofactor == c2.cofactor)) throw Error(ErrorCode::CofactorMismatch, "certificates have different cofactors");
  FirstIntegral fi{RationalFunction(c2.p, c1.p).reduced(), {}};
  const RationalFunction image = substitute(fi.value, forward_substitution(m));
  fi.invariance_witness = image.num() * fi.value.den() - fi.value.num() * image.den();
  return fi;
}

bool in_span(const std::vector<Polynomial>& basis, const Polynomial& p) {
  std::vector<Polynomial> cols = basis;
  const std::size_t r0 = rank_exact(coefficient_matrix(cols));
  cols.push_back(p);
  return rank_exact(coefficient_matrix(cols)) == r0;
}

std::string Pencil::description() const { return "lambda*(" + to_string(p1) + ") + (" + to_string(p2) + ")"; }

PencilComparison pencil_compare(const Pencil& p, const Pencil& q) {
  std::set<std::string> names;
  for (const auto* poly : {&p.p1, &p.p2, &q.p1, &q.p2})
    for (const auto& v : poly->variables())
      if (v.is_param()) names.insert(v.name);

  static const std::vector<Rational> generic = {Rational(3, 7),   Rational(5, 11),  Rational(13, 17),
                                                Rational(19, 23), Rational(29, 31), Rational(37, 41),
                                                Rational(43, 47), Rational(53, 59)};
  PencilComparison out;
  std::size_t k = 0;
  for (const auto& n : names) {
    out.specialization[n] = generic[k % generic.size()] + Rational(static_cast<long>(k / generic.size()));
    ++k;
  }

  const Polynomial p1 = bind_parameters(p.p1, out.specialization);
  const Polynomial p2 = bind_parameters(p.p2, out.specialization);
  const Polynomial q1 = bind_parameters(q.p1, out.specialization);
  const Polynomial q2 = bind_parameters(q.p2, out.specialization);

  const std::size_t rank_p = rank_exact(coefficient_matrix({p1, p2}));
  const std::size_t rank_q = rank_exact(coefficient_matrix({q1, q2}));
  out.joint_rank = rank_exact(coefficient_matrix({p1, p2, q1, q2}));
  if (out.joint_rank == rank_p && out.joint_rank == rank_q) {
    out.result = PencilComparison::Result::Equal;
    return out;
  }
  out.result = PencilComparison::Result::Different;
  std::ostringstream w;
  if (out.joint_rank > rank_p) {
    out.outside_member = in_span({p1, p2}, q1) ? 2 : 1;
    const Polynomial& member = out.outside_member == 1 ? q1 : q2;
    w << "second pencil member " << out.outside_member << " = " << to_string(member)
      << " is not in span{P1, P2} (rank " << rank_p << " -> " << out.joint_rank << ")";
  } else {
    out.outside_member = in_span({q1, q2}, p1) ? -2 : -1;
    const Polynomial& member = out.outside_member == -1 ? p1 : p2;
    w << "first pencil member " << -out.outside_member << " = " << to_string(member)
      << " is not in span{Q1, Q2} (rank " << rank_q << " -> " << out.joint_rank << ")";
  }
  if (!out.specialization.empty()) {
    w << " at";
    for (const auto& [n, v] : out.specialization) w << " " << n << "=" << v.get_str();
  }
  out.witness = w.str();
  return out;
}

}  // namespace kahan
