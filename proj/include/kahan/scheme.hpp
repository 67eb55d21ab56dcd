#pragma once

// Polynomial ODE systems d^n x_i/dt^n = f_i(x) with deg f_i <= n+1, and their
// symmetrized implicit discretization.  The step h is always the symbolic
// parameter `h`; numeric values are bound only when a map is iterated.

#include <optional>
#include <string>
#include <vector>

#include "kahan/linalg.hpp"
#include "kahan/polynomial.hpp"

namespace kahan {

inline const std::string kStepParam = "h";

struct PolyOdeSystem {
  int order = 1;
  int dim = 1;
  std::vector<Polynomial> rhs;

  /// Throws InvalidSystem on shifted variables, components out of range or a
  /// wrong rhs count; DegreeTooHigh when a state degree exceeds order + 1.
  void validate() const;
};

/// Equations E_i = 0 in x_j^(0..order) and parameters.
struct ImplicitScheme {
  int order = 1;
  int dim = 1;
  std::vector<Polynomial> equations;

  std::vector<VarId> level(int shift) const;
};

/// Symmetrizes a shift-0 monomial for order n: pads its state factors with the
/// dummy x0 up to n+1 slots and averages the product over all assignments of
/// shifts 0..n to the slots.  Throws DegreeTooHigh when state degree > n+1.
Polynomial symmetrize_monomial(const Monomial& m, int order);
Polynomial symmetrize(const Polynomial& p, int order);

/// E_i = sum_k (-1)^(n-k) C(n,k) x_i^(k) - h^n * symmetrize(f_i).
ImplicitScheme discretize(const PolyOdeSystem& sys);

/// Forward-difference stencil sum_k (-1)^(n-k) C(n,k) x_i^(k).
Polynomial difference_stencil(int component, int order);

/// Maps shift k to order - k in every state variable.
Polynomial reverse_shifts(const Polynomial& p, int order);

/// Shifts every equation by `offset` (e.g. -2 recentres a fourth-order scheme
/// onto the window -2..2).
ImplicitScheme recenter(const ImplicitScheme& s, int offset);

struct VecfCheck {
  bool equal = false;
  std::optional<int> component;
  std::optional<Monomial> counterexample;
};

/// For order-2 systems, compares the symmetrized right-hand side (on levels
/// 0,1,2) with the averaged-evaluation formula
///   9/2 f(m3) - 4/3 [f(m01) + f(m02) + f(m12)] + 1/6 [f(x0) + f(x1) + f(x2)].
VecfCheck check_vecf_identity(const PolyOdeSystem& sys);

/// Pullback by x = A y + b: rhs becomes A^-1 f(A y + b).  Throws SingularMatrix.
PolyOdeSystem affine_conjugate(const PolyOdeSystem& sys, const RationalMatrix& a, const RationalVector& b);

/// Applies x_j^(k) -> sum_l A_jl y_l^(k) + b_j on every shift, then left-multiplies
/// the equation vector by A^-1.  Used to state affine covariance of the scheme.
ImplicitScheme affine_transform_scheme(const ImplicitScheme& s, const RationalMatrix& a, const RationalVector& b);

}  // namespace kahan
