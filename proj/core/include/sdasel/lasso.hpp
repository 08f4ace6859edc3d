#pragma once

#include <optional>
#include <vector>

#include "sdasel/types.hpp"

namespace sdasel {

/// Objective  1/2 v'Qv - c'v + lambda ||v||_1  with  Q = base + weight * u u'.
///
/// The rank-one part is optional (empty `u`); keeping it separate lets the
/// coordinate-descent gradient update stay O(d) without forming the dense sum.
struct QuadraticProgram {
  Matrix base;
  Vector u;
  double weight = 0.0;
  Vector c;
  double lambda = 0.0;

  Index dim() const noexcept { return c.size(); }
  bool has_rank_one() const noexcept { return u.size() > 0 && weight != 0.0; }

  /// Throws InvalidArgument on shape mismatch, asymmetry or negative lambda.
  void validate() const;

  Vector apply(const Vector& v) const;
  double diagonal(Index j) const;
  Matrix dense() const;
  double objective(const Vector& v) const;
};

struct SolveOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  /// Keep the objective value after every sweep in SolveReport::objective_trace.
  bool trace_objective = false;
};

struct SolveReport {
  Vector solution;
  long iterations = 0;
  double max_kkt_violation = 0.0;
  bool converged = false;
  /// Coordinates with Q_jj = 0 and a nonzero gradient; held at zero.
  std::vector<Index> flagged;
  std::vector<double> objective_trace;
};

/// Cyclic coordinate descent with exact soft-threshold updates. Stops once the
/// subgradient optimality residual is at most `opts.tol`.
SolveReport lasso_quadratic(const QuadraticProgram& qp,
                            const std::optional<Vector>& start = std::nullopt,
                            const SolveOptions& opts = {});

/// max_j distance from 0 to the subdifferential of the objective at v.
double kkt_residual(const QuadraticProgram& qp, const Vector& v);

/// Per-coordinate residuals behind kkt_residual.
Vector kkt_residuals(const QuadraticProgram& qp, const Vector& v);

/// S(z, t) = sign(z) max(|z| - t, 0); exactly zero at the kink |z| = t.
double soft_threshold(double z, double t) noexcept;

}  // namespace sdasel
