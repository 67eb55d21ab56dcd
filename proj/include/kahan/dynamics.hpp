#pragma once

// Explicit birational maps solved from an implicit scheme, their float-path
// iteration, Jacobians and spectra.
//
// State layout (length order*dim): shift-major, i.e.
//   (x_1^(0), ..., x_N^(0), x_1^(1), ..., x_N^(n-1)).
// The forward map sends it to the same tuple shifted by one level; the last N
// outputs are the solved highest shifts.  The backward map takes a state
// interpreted as (x^(1), ..., x^(n)) back to (x^(0), ..., x^(n-1)).

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kahan/linalg.hpp"
#include "kahan/polynomial.hpp"
#include "kahan/scheme.hpp"

namespace kahan {

using ParamValues = std::map<std::string, double>;

/// E = A * x^(level) + rest, with A and rest expressed in the map's state variables.
struct LinearLevelSystem {
  std::vector<std::vector<Polynomial>> coefficients;  // N x N
  std::vector<Polynomial> rest;                        // N
};

struct BirationalMap {
  int order = 1;
  int dim = 1;
  std::vector<VarId> state;
  /// Symbolic components; empty when the symbolic solve was skipped (N > 3).
  std::vector<RationalFunction> forward;
  std::vector<RationalFunction> backward;
  LinearLevelSystem forward_system;
  LinearLevelSystem backward_system;

  std::size_t state_size() const { return state.size(); }
  bool has_symbolic() const { return !forward.empty(); }
  std::set<std::string> parameters() const;
};

/// State variable list for the given order/dimension, shift-major.
std::vector<VarId> state_variables(int order, int dim);

/// Solves the scheme for the highest (forward) and lowest (backward) shifts.
/// Throws NotLinear; ZeroDeterminant when the symbolic coefficient
/// determinant vanishes identically.
BirationalMap solve_forward(const ImplicitScheme& s);

/// Substitutes rational parameter values into every component.
BirationalMap bind_parameters(const BirationalMap& m, const std::map<std::string, Rational>& values);

/// Float-path evaluator with parameters bound.
class CompiledMap {
 public:
  CompiledMap(const BirationalMap& m, const ParamValues& params);

  /// Throws SingularStepError.
  std::vector<double> forward(std::span<const double> state) const;
  std::vector<double> backward(std::span<const double> state) const;

  std::size_t state_size() const { return static_cast<std::size_t>(order_ * dim_); }

 private:
  struct Solver {
    std::vector<std::vector<CompiledPolynomial>> a;
    std::vector<CompiledPolynomial> rest;
    std::vector<double> solve(std::span<const double> state) const;
  };
  std::vector<double> advance(const Solver& s, std::span<const double> state, bool forward) const;

  int order_;
  int dim_;
  Solver fwd_;
  Solver bwd_;
};

/// One forward step with h bound to the `h` parameter.  Throws SingularStepError.
std::vector<double> step(const BirationalMap& m, std::span<const double> state, double h,
                         const ParamValues& params = {});

struct Orbit {
  enum class Status { Complete, Singular };
  double h = 0.0;
  std::vector<std::vector<double>> points;
  Status status = Status::Complete;
  int singular_step = -1;
  std::string message;
};

/// Repeated forward steps; a singular step ends the orbit with status Singular.
Orbit iterate(const BirationalMap& m, std::span<const double> state, double h, int steps,
              const ParamValues& params = {});

/// Relative residual of the implicit scheme on consecutive orbit windows.
double scheme_residual(const ImplicitScheme& s, const Orbit& orbit, const ParamValues& params);

struct SymbolicJacobian {
  std::vector<std::vector<RationalFunction>> entries;
  RationalFunction determinant;
};

/// Exact partial derivatives of the forward components and their determinant.
SymbolicJacobian jacobian(const BirationalMap& m);

/// Determinant of a square matrix of rational functions (cofactor expansion,
/// skipping zero entries).
RationalFunction determinant(const std::vector<std::vector<RationalFunction>>& a);
Polynomial determinant(const std::vector<std::vector<Polynomial>>& a);

Matrix evaluate(const std::vector<std::vector<RationalFunction>>& a, const Point<double>& at);
Point<double> make_point(const BirationalMap& m, std::span<const double> state, const ParamValues& params);

/// Numeric Jacobian at a fixed point; throws NotFixedPoint when
/// ||m(p) - p||_inf > 1e-9.
Matrix linearize_at(const BirationalMap& m, std::span<const double> p, const ParamValues& params);

struct SpectrumReport {
  enum class RootClass { Inside, OnCircle, Outside };
  Matrix matrix;
  /// Monic characteristic polynomial, highest power first: [1, c1, ..., cd].
  std::vector<double> char_poly;
  std::vector<std::complex<double>> roots;
  std::vector<RootClass> classes;
  double palindromic_defect = 0.0;
  double max_root_residual = 0.0;
};

inline constexpr double kFixedPointTolerance = 1e-9;
inline constexpr double kUnitCircleTolerance = 1e-7;

/// Faddeev-LeVerrier characteristic polynomial and Durand-Kerner roots.
/// Throws NoConvergence after 10^4 iterations.
SpectrumReport char_poly_and_roots(const Matrix& m);

/// Durand-Kerner on a monic polynomial [1, c1, ..., cd].
std::vector<std::complex<double>> polynomial_roots(std::span<const double> monic);

struct ConvergenceReport {
  std::vector<double> hs;
  std::vector<double> errors;
  std::vector<double> excluded;
  double slope = 0.0;
  double oracle_richardson_error = 0.0;
};

/// Reference solution of d^n x/dt^n = f(x) by classical RK4 on the
/// first-order system (x, x', ..., x^(n-1)).
class ReferenceSolver {
 public:
  ReferenceSolver(const PolyOdeSystem& sys, const ParamValues& params);
  /// `initial` holds x^(d)_j at t=0 in derivative-major order (d = 0..n-1).
  std::vector<double> solve(std::span<const double> initial, double t, double dt) const;
  /// Positions x_j(t) only.
  std::vector<double> positions(std::span<const double> initial, double t, double dt) const;

 private:
  std::vector<double> rhs(std::span<const double> y) const;
  int order_;
  int dim_;
  std::vector<CompiledPolynomial> f_;
};

/// Seeds the order-n window from the reference solution at t = 0, h, ..., (n-1)h.
std::vector<double> seed_window(const ReferenceSolver& ref, int order, int dim, std::span<const double> initial,
                                double h, double dt);

/// Measured order: least-squares slope of log(error at T) against log(h).
ConvergenceReport convergence_order(const PolyOdeSystem& sys, std::span<const double> initial, double horizon,
                                    std::span<const double> hs, const ParamValues& params);

}  // namespace kahan
