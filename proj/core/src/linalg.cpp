#include "sdasel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdasel/errors.hpp"

namespace sdasel {

Cholesky::Cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("cholesky: matrix is not square");
  }
  if (!is_symmetric(a)) throw InvalidArgument("cholesky: matrix is not symmetric");
  const Index d = a.rows();
  lower_ = Matrix::Zero(d, d);
  if (d == 0) return;

  const double floor = kPivotTolerance * a.diagonal().cwiseAbs().maxCoeff();
  for (Index j = 0; j < d; ++j) {
    double pivot = a(j, j) - lower_.row(j).head(j).squaredNorm();
    if (!(pivot > floor) || !std::isfinite(pivot)) {
      std::ostringstream msg;
      msg << "cholesky: pivot " << j << " is " << pivot
          << " (floor " << floor << "); matrix is not positive definite";
      throw SingularMatrix(j, pivot, msg.str());
    }
    const double ljj = std::sqrt(pivot);
    lower_(j, j) = ljj;
    for (Index i = j + 1; i < d; ++i) {
      lower_(i, j) = (a(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j))) / ljj;
    }
  }
}

Vector Cholesky::solve(const Vector& b) const {
  if (b.size() != dim()) throw InvalidArgument("cholesky solve: dimension mismatch");
  Vector x = lower_.triangularView<Eigen::Lower>().solve(b);
  lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

Matrix Cholesky::solve(const Matrix& b) const {
  if (b.rows() != dim()) throw InvalidArgument("cholesky solve: dimension mismatch");
  Matrix x = lower_.triangularView<Eigen::Lower>().solve(b);
  lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

double Cholesky::log_determinant() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

Vector solve_spd(const Matrix& a, const Vector& b) { return Cholesky(a).solve(b); }

Matrix solve_spd(const Matrix& a, const Matrix& b) { return Cholesky(a).solve(b); }

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix submatrix(const Matrix& a, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
    }
  }
  return out;
}

Vector subvector(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

IndexSet complement(const IndexSet& set, Index p) {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(0, p - static_cast<Index>(set.size()))));
  std::size_t k = 0;
  for (Index j = 0; j < p; ++j) {
    while (k < set.size() && set[k] < j) ++k;
    if (k < set.size() && set[k] == j) continue;
    out.push_back(j);
  }
  return out;
}

IndexSet support_of(const Vector& v) {
  IndexSet out;
  for (Index j = 0; j < v.size(); ++j) {
    if (v(j) != 0.0) out.push_back(j);
  }
  return out;
}

SignVector signs_of(const Vector& v) {
  SignVector out(static_cast<std::size_t>(v.size()));
  for (Index j = 0; j < v.size(); ++j) {
    out[static_cast<std::size_t>(j)] = (v(j) > 0.0) - (v(j) < 0.0);
  }
  return out;
}

Vector embed(const Vector& values, const IndexSet& idx, Index p) {
  if (values.size() != static_cast<Index>(idx.size())) {
    throw InvalidArgument("embed: value and index counts differ");
  }
  Vector out = Vector::Zero(p);
  for (std::size_t i = 0; i < idx.size(); ++i) out(idx[i]) = values(static_cast<Index>(i));
  return out;
}

Vector to_vector(const SignVector& signs) {
  Vector out(static_cast<Index>(signs.size()));
  for (std::size_t i = 0; i < signs.size(); ++i) out(static_cast<Index>(i)) = signs[i];
  return out;
}

}  // namespace sdasel
