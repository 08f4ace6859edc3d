#pragma once

#include "sdasel/types.hpp"

namespace sdasel {

/// Relative pivot floor: a pivot below this times the largest diagonal entry
/// is treated as singular.
inline constexpr double kPivotTolerance = 1e-12;

/// Lower-triangular Cholesky factor A = L L' of a symmetric positive-definite
/// matrix. Construction throws SingularMatrix naming the first pivot that falls
/// below kPivotTolerance * max_i A_ii.
class Cholesky {
 public:
  Cholesky() = default;
  explicit Cholesky(const Matrix& a);

  Index dim() const noexcept { return lower_.rows(); }
  const Matrix& lower() const noexcept { return lower_; }

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

  /// log det A.
  double log_determinant() const;

 private:
  Matrix lower_;
};

/// Solves a x = b through a Cholesky factorization; no explicit inverse is formed.
Vector solve_spd(const Matrix& a, const Vector& b);
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// True when |a_ij - a_ji| <= tol * max(1, max|a|) for all pairs.
bool is_symmetric(const Matrix& a, double rel_tol = 1e-12);

Matrix submatrix(const Matrix& a, const IndexSet& rows, const IndexSet& cols);
Vector subvector(const Vector& v, const IndexSet& idx);

/// [0, p) minus `set`, sorted.
IndexSet complement(const IndexSet& set, Index p);

/// Sorted indices of the nonzero entries of v.
IndexSet support_of(const Vector& v);

/// Componentwise sign in {-1, 0, +1}.
SignVector signs_of(const Vector& v);

/// Writes `values` at positions `idx` of a zero vector of length p.
Vector embed(const Vector& values, const IndexSet& idx, Index p);

Vector to_vector(const SignVector& signs);

}  // namespace sdasel
