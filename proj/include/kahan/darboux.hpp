#pragma once

// Darboux polynomials with the Jacobian determinant as cofactor:
//   P(phi(x)) = J(x) * P(x).
// A certificate P gives the invariant form (volume)/P; the ratio of two
// certificates with the same cofactor is a first integral.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kahan/dynamics.hpp"
#include "kahan/polynomial.hpp"

namespace kahan {

struct DarbouxCertificate {
  Polynomial p;
  RationalFunction cofactor;
  int degree_bound = 0;
  /// P(phi) * L * den(J) - num(J) * P * L with L clearing phi's denominators;
  /// zero for a valid certificate.
  Polynomial witness;

  bool verified() const { return witness.is_zero(); }
};

/// Canonical text: the polynomial followed by its cofactor, one per line.
std::string to_string(const DarbouxCertificate& c);

/// Determinant of the Jacobian of a map with two state variables.
RationalFunction jacobian_det_2d(const BirationalMap& m);

/// Recomputes the certificate witness for P against the map.
Polynomial darboux_witness(const BirationalMap& m, const Polynomial& p, const RationalFunction& cofactor);

/// All P with total degree <= maxdeg satisfying P(phi) = J * P, returned as
/// primitive integer polynomials (positive leading coefficient) spanning the
/// solution space.  The map must have no free parameters (SymbolicParameters).
/// Works in any state dimension; above two it is experimental and costly.
std::vector<DarbouxCertificate> find_darboux(const BirationalMap& m, int maxdeg);

struct InvariantMeasure {
  Polynomial density_denominator;
  std::string description;
};

/// dx^dy/P; throws CofactorMismatch unless the certificate witness vanishes.
InvariantMeasure invariant_measure(const BirationalMap& m, const DarbouxCertificate& cert);

struct FirstIntegral {
  RationalFunction value;
  /// K(phi) - K, cross-multiplied; zero when K is invariant.
  Polynomial invariance_witness;
};

/// K = P2/P1.  Throws CofactorMismatch when the cofactors differ.
FirstIntegral first_integral(const BirationalMap& m, const DarbouxCertificate& c1, const DarbouxCertificate& c2);

/// True when p lies in the rational span of the given polynomials.
bool in_span(const std::vector<Polynomial>& basis, const Polynomial& p);

struct Pencil {
  Polynomial p1;
  Polynomial p2;
  std::string description() const;
};

struct PencilComparison {
  enum class Result { Equal, Different };
  Result result = Result::Equal;
  /// Member of the second pencil outside the first span (1 or 2); negative
  /// when instead a member of the first pencil leaves the second span.
  int outside_member = 0;
  std::size_t joint_rank = 0;
  std::string witness;
  /// Parameter values used when the members carried symbolic parameters.
  std::map<std::string, Rational> specialization;
};

/// Compares span{P1,P2} with span{Q1,Q2} by exact coefficient linear algebra.
/// Symbolic parameters are specialized to fixed generic rationals first.
/// Specialization can only lower ranks, so a joint rank above two at the
/// specialization certifies `Different` for the symbolic pencils as well.
PencilComparison pencil_compare(const Pencil& p, const Pencil& q);

}  // namespace kahan
