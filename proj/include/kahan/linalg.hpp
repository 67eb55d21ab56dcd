#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kahan/polynomial.hpp"

namespace kahan {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

/// Reduced row echelon form computed fraction-free (integer Bareiss
/// elimination) and normalized at the end.  Pivot rule: columns left to
/// right, first row with a non-zero entry.
struct EchelonForm {
  RationalMatrix rref;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank() const { return pivot_columns.size(); }
};

EchelonForm echelon_form(const RationalMatrix& m, std::size_t ncols);

/// Exact basis of the right nullspace.  One vector per free column, each
/// scaled to coprime integers with a positive entry at its free column.
std::vector<RationalVector> nullspace_exact(const RationalMatrix& m, std::size_t ncols);
inline std::vector<RationalVector> nullspace_exact(const RationalMatrix& m) {
  return nullspace_exact(m, m.empty() ? 0 : m.front().size());
}

std::size_t rank_exact(const RationalMatrix& m);

/// Throws SingularMatrix.
RationalMatrix inverse_exact(const RationalMatrix& m);

/// Scales v to coprime integers; sign chosen so the first non-zero entry is positive.
RationalVector primitive(RationalVector v);

/// Row-major dense float matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Matrix transposed() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial pivoting.
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix a);

  /// True when a pivot underflows relative to the matrix scale.
  bool singular() const noexcept { return singular_; }
  /// Cheap reciprocal-pivot condition estimate (max|a| * max|1/u_ii|).
  double condition_estimate() const noexcept { return condition_; }
  double determinant() const;
  std::vector<double> solve(std::span<const double> b) const;
  Matrix inverse() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
  double condition_ = 0.0;
};

}  // namespace kahan
