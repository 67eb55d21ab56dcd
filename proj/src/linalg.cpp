#include "kahan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kahan {

EchelonForm echelon_form(const RationalMatrix& m, std::size_t ncols) {
  const std::size_t nrows = m.size();
  std::vector<std::vector<Integer>> a(nrows, std::vector<Integer>(ncols));
  for (std::size_t i = 0; i < nrows; ++i) {
    Integer l = 1;
    for (const auto& q : m[i]) l = lcm(l, q.get_den());
    for (std::size_t j = 0; j < ncols; ++j) a[i][j] = m[i][j].get_num() * (l / m[i][j].get_den());
  }

  EchelonForm out;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && a[p][c] == 0) ++p;
    if (p == nrows) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < nrows; ++i) {
      for (std::size_t j = c + 1; j < ncols; ++j) {
        Integer t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    out.pivot_columns.push_back(c);
    ++r;
  }

  const std::size_t rank = out.pivot_columns.size();
  out.rref.assign(rank, RationalVector(ncols));
  for (std::size_t i = 0; i < rank; ++i) {
    const Rational piv(a[i][out.pivot_columns[i]]);
    for (std::size_t j = 0; j < ncols; ++j) out.rref[i][j] = Rational(a[i][j]) / piv;
  }
  for (std::size_t i = rank; i-- > 0;) {
    const std::size_t pc = out.pivot_columns[i];
    for (std::size_t k = 0; k < i; ++k) {
      const Rational f = out.rref[k][pc];
      if (f == 0) continue;
      for (std::size_t j = pc; j < ncols; ++j) out.rref[k][j] -= f * out.rref[i][j];
    }
  }
  return out;
}

RationalVector primitive(RationalVector v) {
  Integer l = 1;
  for (const auto& q : v) l = lcm(l, q.get_den());
  Integer g = 0;
  for (const auto& q : v) g = gcd(g, Integer(q.get_num() * (l / q.get_den())));
  if (g == 0) return v;
  Rational f(l, g);
  f.canonicalize();
  auto first = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
  if (*first < 0) f = -f;
  for (auto& q : v) q *= f;
  return v;
}

std::vector<RationalVector> nullspace_exact(const RationalMatrix& m, std::size_t ncols) {
  const EchelonForm e = echelon_form(m, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : e.pivot_columns) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(ncols);
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivot_columns[i]] = -e.rref[i][f];
    // Leading sign convention: keep the free entry positive.
    Integer l = 1;
    for (const auto& q : v) l = lcm(l, q.get_den());
    Integer g = 0;
    for (const auto& q : v) g = gcd(g, Integer(q.get_num() * (l / q.get_den())));
    Rational s(l, g);
    s.canonicalize();
    for (auto& q : v) q *= s;
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank_exact(const RationalMatrix& m) {
  return echelon_form(m, m.empty() ? 0 : m.front().size()).rank();
}

RationalMatrix inverse_exact(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = m;
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw Error(ErrorCode::SingularMatrix, "matrix is not square");
    inv[i][i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    const Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// ------------------------------------------------------------------ floats

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double f = a(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += f * b(k, j);
    }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  const double scale = std::max(lu_.max_abs(), std::numeric_limits<double>::min());
  double inv_pivot_max = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const double piv = lu_(k, k);
    if (std::abs(piv) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      singular_ = true;
      condition_ = std::numeric_limits<double>::infinity();
      if (piv == 0.0) continue;
    }
    inv_pivot_max = std::max(inv_pivot_max, 1.0 / std::abs(piv));
    for (std::size_t i = k + 1; i < n; ++i) {
      lu_(i, k) /= piv;
      const double f = lu_(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
  if (!singular_) condition_ = scale * inv_pivot_max;
}

double LuDecomposition::determinant() const {
  double d = sign_;
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

std::vector<double> LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::inverse() const {
  const std::size_t n = lu_.rows();
  Matrix inv(n, n);
  std::vector<double> e(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    auto col = solve(e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

}  // namespace kahan
