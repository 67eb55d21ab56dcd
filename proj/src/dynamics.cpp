#include "kahan/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kahan/text.hpp"

namespace kahan {

namespace {

}  // namespace

Polynomial determinant(const std::vector<std::vector<Polynomial>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return Polynomial(1);
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Polynomial det;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    Polynomial t = a[0][c] * determinant(minor);
    if (c % 2 == 0) {
      det += t;
    } else {
      det -= t;
    }
  }
  return det;
}

namespace {

LinearLevelSystem collect_level(const ImplicitScheme& s, int shift) {
  const auto level = s.level(shift);
  const std::set<VarId> vars(level.begin(), level.end());
  LinearLevelSystem sys;
  for (const auto& e : s.equations) {
    LinearCollection lc = collect_linear(e, vars);
    std::vector<Polynomial> row;
    for (const auto& v : level) {
      auto it = lc.coefficients.find(v);
      row.push_back(it == lc.coefficients.end() ? Polynomial() : it->second);
    }
    sys.coefficients.push_back(std::move(row));
    sys.rest.push_back(std::move(lc.remainder));
  }
  return sys;
}

LinearLevelSystem shift_system(const LinearLevelSystem& s, int by) {
  LinearLevelSystem out;
  for (const auto& row : s.coefficients) {
    std::vector<Polynomial> r;
    for (const auto& p : row) r.push_back(p.shifted(by));
    out.coefficients.push_back(std::move(r));
  }
  for (const auto& p : s.rest) out.rest.push_back(p.shifted(by));
  return out;
}

/// Cramer's rule for A x = -rest.
std::vector<RationalFunction> cramer(const LinearLevelSystem& s, const char* direction) {
  const Polynomial det = determinant(s.coefficients);
  if (det.is_zero())
    throw Error(ErrorCode::ZeroDeterminant, std::string("coefficient determinant of the ") + direction +
                                                " solve vanishes identically");
  std::vector<RationalFunction> out;
  for (std::size_t l = 0; l < s.rest.size(); ++l) {
    auto a = s.coefficients;
    for (std::size_t i = 0; i < a.size(); ++i) a[i][l] = -s.rest[i];
    out.emplace_back(determinant(a), det);
  }
  return out;
}

std::vector<CompiledPolynomial> compile_all(const std::vector<Polynomial>& ps, std::span<const VarId> slots,
                                            const ParamValues& params) {
  std::vector<CompiledPolynomial> out;
  for (const auto& p : ps) out.emplace_back(p, slots, params);
  return out;
}

}  // namespace

std::vector<VarId> state_variables(int order, int dim) {
  std::vector<VarId> vs;
  for (int k = 0; k < order; ++k)
    for (int j = 1; j <= dim; ++j) vs.push_back(VarId::state(j, k));
  return vs;
}

std::set<std::string> BirationalMap::parameters() const {
  std::set<std::string> names;
  auto scan = [&names](const Polynomial& p) {
    for (const auto& v : p.variables())
      if (v.is_param()) names.insert(v.name);
  };
  for (const auto* sys : {&forward_system, &backward_system}) {
    for (const auto& row : sys->coefficients)
      for (const auto& p : row) scan(p);
    for (const auto& p : sys->rest) scan(p);
  }
  return names;
}

BirationalMap solve_forward(const ImplicitScheme& s) {
  if (static_cast<int>(s.equations.size()) != s.dim)
    throw Error(ErrorCode::InvalidSystem, "scheme needs one equation per component");
  BirationalMap m;
  m.order = s.order;
  m.dim = s.dim;
  m.state = state_variables(s.order, s.dim);
  m.forward_system = collect_level(s, s.order);
  m.backward_system = shift_system(collect_level(s, 0), -1);

  if (s.dim <= 3) {
    const auto top = cramer(m.forward_system, "forward");
    const auto bottom = cramer(m.backward_system, "backward");
    const std::size_t n = static_cast<std::size_t>(s.dim);
    for (std::size_t i = n; i < m.state.size(); ++i) m.forward.emplace_back(Polynomial(m.state[i]));
    m.forward.insert(m.forward.end(), top.begin(), top.end());
    m.backward = bottom;
    for (std::size_t i = 0; i + n < m.state.size(); ++i) m.backward.emplace_back(Polynomial(m.state[i]));
  }
  return m;
}

BirationalMap bind_parameters(const BirationalMap& m, const std::map<std::string, Rational>& values) {
  BirationalMap r = m;
  for (auto& f : r.forward) f = bind_parameters(f, values);
  for (auto& f : r.backward) f = bind_parameters(f, values);
  for (auto* sys : {&r.forward_system, &r.backward_system}) {
    for (auto& row : sys->coefficients)
      for (auto& p : row) p = bind_parameters(p, values);
    for (auto& p : sys->rest) p = bind_parameters(p, values);
  }
  return r;
}

// -------------------------------------------------------------- CompiledMap

CompiledMap::CompiledMap(const BirationalMap& m, const ParamValues& params) : order_(m.order), dim_(m.dim) {
  for (const auto& row : m.forward_system.coefficients) fwd_.a.push_back(compile_all(row, m.state, params));
  fwd_.rest = compile_all(m.forward_system.rest, m.state, params);
  for (const auto& row : m.backward_system.coefficients) bwd_.a.push_back(compile_all(row, m.state, params));
  bwd_.rest = compile_all(m.backward_system.rest, m.state, params);
}

std::vector<double> CompiledMap::Solver::solve(std::span<const double> state) const {
  const std::size_t n = rest.size();
  if (n == 1) {
    const double den = a[0][0](state);
    const double scale = a[0][0].magnitude(state);
    if (den == 0.0 || std::abs(den) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      std::ostringstream os;
      os << "denominator " << den << " vanishes at the current state";
      throw SingularStepError(os.str(), den == 0.0 ? std::numeric_limits<double>::infinity() : scale / std::abs(den));
    }
    return {-rest[0](state) / den};
  }
  Matrix mat(n, n);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mat(i, j) = a[i][j](state);
    rhs[i] = -rest[i](state);
  }
  LuDecomposition lu(std::move(mat));
  if (lu.singular()) throw SingularStepError("linear system for the next level is singular", lu.condition_estimate());
  return lu.solve(rhs);
}

std::vector<double> CompiledMap::advance(const Solver& s, std::span<const double> state, bool forward) const {
  if (state.size() != state_size()) throw Error(ErrorCode::InvalidSystem, "state has the wrong length");
  const std::size_t n = static_cast<std::size_t>(dim_);
  std::vector<double> solved = s.solve(state);
  std::vector<double> out;
  out.reserve(state.size());
  if (forward) {
    out.insert(out.end(), state.begin() + static_cast<std::ptrdiff_t>(n), state.end());
    out.insert(out.end(), solved.begin(), solved.end());
  } else {
    out.insert(out.end(), solved.begin(), solved.end());
    out.insert(out.end(), state.begin(), state.end() - static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

std::vector<double> CompiledMap::forward(std::span<const double> state) const { return advance(fwd_, state, true); }
std::vector<double> CompiledMap::backward(std::span<const double> state) const { return advance(bwd_, state, false); }

std::vector<double> step(const BirationalMap& m, std::span<const double> state, double h, const ParamValues& params) {
  ParamValues p = params;
  p[kStepParam] = h;
  return CompiledMap(m, p).forward(state);
}

Orbit iterate(const BirationalMap& m, std::span<const double> state, double h, int steps, const ParamValues& params) {
  ParamValues p = params;
  p[kStepParam] = h;
  const CompiledMap cm(m, p);
  Orbit orbit;
  orbit.h = h;
  orbit.points.emplace_back(state.begin(), state.end());
  for (int k = 0; k < steps; ++k) {
    try {
      std::vector<double> next = cm.forward(orbit.points.back());
      if (!std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); })) {
        orbit.status = Orbit::Status::Singular;
        orbit.singular_step = k;
        orbit.message = "state left the finite range";
        break;
      }
      orbit.points.push_back(std::move(next));
    } catch (const SingularStepError& e) {
      orbit.status = Orbit::Status::Singular;
      orbit.singular_step = k;
      orbit.message = e.what();
      break;
    }
  }
  return orbit;
}

double scheme_residual(const ImplicitScheme& s, const Orbit& orbit, const ParamValues& params) {
  ParamValues p = params;
  p[kStepParam] = orbit.h;
  const auto slots = state_variables(s.order + 1, s.dim);
  std::vector<CompiledPolynomial> eqs = compile_all(s.equations, slots, p);
  const std::size_t n = static_cast<std::size_t>(s.dim);
  double worst = 0.0;
  for (std::size_t t = 0; t + 1 < orbit.points.size(); ++t) {
    std::vector<double> window = orbit.points[t];
    window.insert(window.end(), orbit.points[t + 1].end() - static_cast<std::ptrdiff_t>(n), orbit.points[t + 1].end());
    for (const auto& e : eqs) {
      const double mag = e.magnitude(window);
      if (mag > 0.0) worst = std::max(worst, std::abs(e(window)) / mag);
    }
  }
  return worst;
}

// ---------------------------------------------------------------- Jacobian

RationalFunction determinant(const std::vector<std::vector<RationalFunction>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return RationalFunction(Polynomial(1));
  if (n == 1) return a[0][0];
  // Expand along the row with the most zero entries.
  std::size_t best = 0;
  std::size_t best_zeros = 0;
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t z = 0;
    for (const auto& e : a[r]) z += e.is_zero() ? 1 : 0;
    if (z > best_zeros) {
      best = r;
      best_zeros = z;
    }
  }
  RationalFunction det;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[best][c].is_zero()) continue;
    std::vector<std::vector<RationalFunction>> minor;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == best) continue;
      std::vector<RationalFunction> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    RationalFunction t = a[best][c] * determinant(minor);
    det = ((best + c) % 2 == 0) ? det + t : det - t;
  }
  return det;
}

SymbolicJacobian jacobian(const BirationalMap& m) {
  if (!m.has_symbolic()) throw Error(ErrorCode::InvalidSystem, "map has no symbolic forward components");
  SymbolicJacobian j;
  for (const auto& f : m.forward) {
    std::vector<RationalFunction> row;
    for (const auto& v : m.state) row.push_back(f.derivative(v));
    j.entries.push_back(std::move(row));
  }
  j.determinant = determinant(j.entries).reduced();
  return j;
}

Point<double> make_point(const BirationalMap& m, std::span<const double> state, const ParamValues& params) {
  Point<double> pt;
  for (std::size_t i = 0; i < m.state.size(); ++i) pt[m.state[i]] = state[i];
  for (const auto& [name, value] : params) pt[VarId::param(name)] = value;
  return pt;
}

Matrix evaluate(const std::vector<std::vector<RationalFunction>>& a, const Point<double>& at) {
  Matrix out(a.size(), a.empty() ? 0 : a.front().size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out(i, j) = a[i][j].is_zero() ? 0.0 : evaluate(a[i][j], at);
  return out;
}

Matrix linearize_at(const BirationalMap& m, std::span<const double> p, const ParamValues& params) {
  const CompiledMap cm(m, params);
  const auto image = cm.forward(p);
  double gap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) gap = std::max(gap, std::abs(image[i] - p[i]));
  if (gap > kFixedPointTolerance) {
    std::ostringstream os;
    os << "||m(p) - p|| = " << gap;
    throw Error(ErrorCode::NotFixedPoint, os.str());
  }
  return evaluate(jacobian(m).entries, make_point(m, p, params));
}

// ---------------------------------------------------------------- spectra

std::vector<std::complex<double>> polynomial_roots(std::span<const double> monic) {
  using C = std::complex<double>;
  const std::size_t d = monic.size() - 1;
  if (d == 0) return {};
  double bound = 0.0;
  for (std::size_t k = 1; k <= d; ++k) bound = std::max(bound, std::abs(monic[k]));
  const double radius = 1.0 + bound;

  auto eval = [&](C z) {
    C v = 0.0;
    for (double c : monic) v = v * z + c;
    return v;
  };
  auto scale_at = [&](C z) {
    double s = 0.0;
    const double r = std::abs(z);
    for (double c : monic) s = s * r + std::abs(c);
    return s;
  };

  std::vector<C> z(d);
  const C seed(0.4, 0.9);
  C w = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    w *= seed;
    z[k] = radius * w / std::abs(w) * (0.5 + 0.5 * static_cast<double>(k + 1) / static_cast<double>(d));
  }
  for (int it = 0; it < 10000; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      C denom = 1.0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != k) denom *= z[k] - z[j];
      if (std::abs(denom) == 0.0) denom = 1e-300;
      z[k] -= eval(z[k]) / denom;
    }
    for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(eval(z[k])) / scale_at(z[k]));
    if (worst <= 1e-12 && it > 2) {
      // A few polishing sweeps once within tolerance.
      for (int polish = 0; polish < 5; ++polish)
        for (std::size_t k = 0; k < d; ++k) {
          C denom = 1.0;
          for (std::size_t j = 0; j < d; ++j)
            if (j != k) denom *= z[k] - z[j];
          if (std::abs(denom) > 0.0) z[k] -= eval(z[k]) / denom;
        }
      std::sort(z.begin(), z.end(), [](C a, C b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
      });
      return z;
    }
  }
  throw Error(ErrorCode::NoConvergence, "Durand-Kerner did not converge in 10^4 iterations");
}

SpectrumReport char_poly_and_roots(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw Error(ErrorCode::InvalidSystem, "matrix must be square");
  if (n > 8) throw Error(ErrorCode::InvalidSystem, "dimension above 8 is not supported");
  SpectrumReport r;
  r.matrix = a;
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k)/k.
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  Matrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[k - 1];
    mk = std::move(next);
    const Matrix am = a * mk;
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[k] = -tr / static_cast<double>(k);
  }
  r.char_poly = c;

  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  for (std::size_t k = 0; k <= n; ++k) r.palindromic_defect = std::max(r.palindromic_defect, std::abs(c[k] - c[n - k]));
  r.palindromic_defect /= cmax;

  r.roots = polynomial_roots(c);
  std::vector<std::complex<double>> rebuilt{1.0};
  for (const auto& z : r.roots) {
    std::vector<std::complex<double>> next(rebuilt.size() + 1, 0.0);
    for (std::size_t k = 0; k < rebuilt.size(); ++k) {
      next[k] += rebuilt[k];
      next[k + 1] -= rebuilt[k] * z;
    }
    rebuilt = std::move(next);
  }
  for (std::size_t k = 0; k <= n; ++k)
    r.max_root_residual = std::max(r.max_root_residual, std::abs(rebuilt[k] - c[k]) / cmax);
  for (const auto& z : r.roots) {
    const double rho = std::abs(z);
    if (std::abs(rho - 1.0) <= kUnitCircleTolerance) {
      r.classes.push_back(SpectrumReport::RootClass::OnCircle);
    } else {
      r.classes.push_back(rho < 1.0 ? SpectrumReport::RootClass::Inside : SpectrumReport::RootClass::Outside);
    }
  }
  return r;
}

// ------------------------------------------------------------- convergence

ReferenceSolver::ReferenceSolver(const PolyOdeSystem& sys, const ParamValues& params)
    : order_(sys.order), dim_(sys.dim) {
  sys.validate();
  const auto slots = state_variables(1, sys.dim);
  f_ = compile_all(sys.rhs, slots, params);
}

std::vector<double> ReferenceSolver::rhs(std::span<const double> y) const {
  const std::size_t n = static_cast<std::size_t>(dim_);
  const std::size_t len = y.size();
  std::vector<double> dy(len);
  for (std::size_t i = 0; i + n < len; ++i) dy[i] = y[i + n];
  const auto pos = y.subspan(0, n);
  for (std::size_t j = 0; j < n; ++j) dy[len - n + j] = f_[j](pos);
  return dy;
}

std::vector<double> ReferenceSolver::solve(std::span<const double> initial, double t, double dt) const {
  std::vector<double> y(initial.begin(), initial.end());
  if (t == 0.0) return y;
  const long steps = std::max(1L, std::lround(std::ceil(t / dt - 1e-9)));
  const double step = t / static_cast<double>(steps);
  const std::size_t len = y.size();
  std::vector<double> tmp(len);
  for (long s = 0; s < steps; ++s) {
    const auto k1 = rhs(y);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = y[i] + 0.5 * step * k1[i];
    const auto k2 = rhs(tmp);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = y[i] + 0.5 * step * k2[i];
    const auto k3 = rhs(tmp);
    for (std::size_t i = 0; i < len; ++i) tmp[i] = y[i] + step * k3[i];
    const auto k4 = rhs(tmp);
    for (std::size_t i = 0; i < len; ++i) y[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

std::vector<double> ReferenceSolver::positions(std::span<const double> initial, double t, double dt) const {
  auto y = solve(initial, t, dt);
  y.resize(static_cast<std::size_t>(dim_));
  return y;
}

std::vector<double> seed_window(const ReferenceSolver& ref, int order, int dim, std::span<const double> initial,
                                double h, double dt) {
  std::vector<double> window;
  for (int k = 0; k < order; ++k) {
    auto x = ref.positions(initial, k * h, dt);
    window.insert(window.end(), x.begin(), x.begin() + dim);
  }
  return window;
}

ConvergenceReport convergence_order(const PolyOdeSystem& sys, std::span<const double> initial, double horizon,
                                    std::span<const double> hs, const ParamValues& params) {
  if (hs.empty()) throw Error(ErrorCode::ValidationError, "no step sizes given");
  if (initial.size() != static_cast<std::size_t>(sys.order * sys.dim))
    throw Error(ErrorCode::ValidationError, "initial data needs order*dim values");
  const BirationalMap map = solve_forward(discretize(sys));
  const ReferenceSolver ref(sys, params);
  const double dt = *std::min_element(hs.begin(), hs.end()) / 100.0;
  const auto exact = ref.positions(initial, horizon, dt);
  const auto finer = ref.positions(initial, horizon, dt / 2.0);

  ConvergenceReport rep;
  for (std::size_t j = 0; j < exact.size(); ++j)
    rep.oracle_richardson_error = std::max(rep.oracle_richardson_error, std::abs(exact[j] - finer[j]));

  std::vector<double> lx;
  std::vector<double> ly;
  for (double h : hs) {
    const long steps = std::lround(horizon / h);
    const auto window = seed_window(ref, sys.order, sys.dim, initial, h, dt);
    const Orbit orbit = iterate(map, window, h, static_cast<int>(steps), params);
    if (orbit.status != Orbit::Status::Complete) {
      rep.excluded.push_back(h);
      continue;
    }
    double err = 0.0;
    const auto& last = orbit.points.back();
    for (std::size_t j = 0; j < exact.size(); ++j) err = std::max(err, std::abs(last[j] - exact[j]));
    rep.hs.push_back(h);
    rep.errors.push_back(err);
    if (err > 0.0) {
      lx.push_back(std::log(h));
      ly.push_back(std::log(err));
    }
  }
  if (lx.size() < 2) {
    rep.slope = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace kahan
