#include "sdasel/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "sdasel/errors.hpp"
#include "sdasel/linalg.hpp"

namespace sdasel {

void QuadraticProgram::validate() const {
  const Index d = c.size();
  if (base.rows() != d || base.cols() != d) {
    throw InvalidArgument("quadratic program: Q must be d x d with d = len(c)");
  }
  if (u.size() != 0 && u.size() != d) {
    throw InvalidArgument("quadratic program: rank-one vector has wrong length");
  }
  if (!is_symmetric(base, 1e-12)) {
    throw InvalidArgument("quadratic program: Q is not symmetric");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("quadratic program: lambda must be finite and non-negative");
  }
}

Vector QuadraticProgram::apply(const Vector& v) const {
  Vector out = base * v;
  if (has_rank_one()) out += (weight * u.dot(v)) * u;
  return out;
}

double QuadraticProgram::diagonal(Index j) const {
  double d = base(j, j);
  if (has_rank_one()) d += weight * u(j) * u(j);
  return d;
}

Matrix QuadraticProgram::dense() const {
  Matrix q = base;
  if (has_rank_one()) q.noalias() += weight * u * u.transpose();
  return q;
}

double QuadraticProgram::objective(const Vector& v) const {
  return 0.5 * v.dot(apply(v)) - c.dot(v) + lambda * v.lpNorm<1>();
}

double soft_threshold(double z, double t) noexcept {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace {

double coordinate_residual(double grad, double vj, double lambda) {
  if (vj > 0.0) return std::abs(grad + lambda);
  if (vj < 0.0) return std::abs(grad - lambda);
  return std::max(0.0, std::abs(grad) - lambda);
}

}  // namespace

Vector kkt_residuals(const QuadraticProgram& qp, const Vector& v) {
  if (v.size() != qp.dim()) throw InvalidArgument("kkt_residual: dimension mismatch");
  const Vector grad = qp.apply(v) - qp.c;
  Vector r(v.size());
  for (Index j = 0; j < v.size(); ++j) r(j) = coordinate_residual(grad(j), v(j), qp.lambda);
  return r;
}

double kkt_residual(const QuadraticProgram& qp, const Vector& v) {
  if (v.size() == 0) return 0.0;
  return kkt_residuals(qp, v).maxCoeff();
}

SolveReport lasso_quadratic(const QuadraticProgram& qp, const std::optional<Vector>& start,
                            const SolveOptions& opts) {
  qp.validate();
  if (!(opts.tol > 0.0)) throw InvalidArgument("lasso_quadratic: tol must be positive");
  if (opts.max_iter < 1) throw InvalidArgument("lasso_quadratic: max_iter must be >= 1");

  const Index d = qp.dim();
  SolveReport report;
  Vector v = Vector::Zero(d);
  if (start) {
    if (start->size() != d) throw InvalidArgument("lasso_quadratic: start has wrong length");
    v = *start;
  }

  Vector diag(d);
  std::vector<char> held(static_cast<std::size_t>(d), 0);
  for (Index j = 0; j < d; ++j) {
    diag(j) = qp.diagonal(j);
    if (!(diag(j) > 0.0)) {
      held[static_cast<std::size_t>(j)] = 1;
      v(j) = 0.0;
    }
  }

  const bool rank_one = qp.has_rank_one();
  Vector grad = qp.apply(v) - qp.c;

  // Residual of the non-held coordinates from the maintained gradient.
  auto residual_of = [&](const Vector& g) {
    double worst = 0.0;
    for (Index j = 0; j < d; ++j) {
      if (held[static_cast<std::size_t>(j)]) continue;
      worst = std::max(worst, coordinate_residual(g(j), v(j), qp.lambda));
    }
    return worst;
  };

  if (opts.trace_objective) report.objective_trace.push_back(qp.objective(v));

  bool done = d == 0 || residual_of(grad) <= opts.tol;
  long sweep = 0;
  while (!done && sweep < opts.max_iter) {
    ++sweep;
    for (Index j = 0; j < d; ++j) {
      if (held[static_cast<std::size_t>(j)]) continue;
      const double old = v(j);
      // Gradient of the smooth part with coordinate j removed, negated.
      const double z = diag(j) * old - grad(j);
      const double updated = soft_threshold(z, qp.lambda) / diag(j);
      const double delta = updated - old;
      if (delta == 0.0) continue;
      v(j) = updated;
      grad.noalias() += delta * qp.base.col(j);
      if (rank_one) grad.noalias() += (qp.weight * qp.u(j) * delta) * qp.u;
    }
    if (opts.trace_objective) report.objective_trace.push_back(qp.objective(v));
    if (residual_of(grad) <= opts.tol) {
      // Confirm against a freshly computed gradient; drift in the running
      // update can otherwise certify a point that is slightly off.
      grad = qp.apply(v) - qp.c;
      done = residual_of(grad) <= opts.tol;
    }
  }

  grad = qp.apply(v) - qp.c;
  for (Index j = 0; j < d; ++j) {
    if (held[static_cast<std::size_t>(j)] && std::abs(grad(j)) > qp.lambda) {
      report.flagged.push_back(j);
    }
  }
  report.solution = std::move(v);
  report.iterations = sweep;
  report.max_kkt_violation = kkt_residual(qp, report.solution);
  report.converged = report.max_kkt_violation <= opts.tol;
  return report;
}

}  // namespace sdasel
