#include "sdasel/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdasel/errors.hpp"
#include "sdasel/linalg.hpp"
#include "sdasel/subsets.hpp"

namespace sdasel {

Vector encode_labels(const Dataset& data) { return encode_labels(data, canonical_class1_value(data)); }

Vector encode_labels(const Dataset& data, double class1_value) {
  const double class2_value =
      -static_cast<double>(data.n1()) * class1_value / static_cast<double>(data.n2());
  Vector z(data.n());
  for (Index i = 0; i < data.n(); ++i) {
    z(i) = data.y()[static_cast<std::size_t>(i)] == 1 ? class1_value : class2_value;
  }
  return z;
}

double canonical_class1_value(const Dataset& data) {
  return static_cast<double>(data.n2()) / static_cast<double>(data.n());
}

QuadraticProgram sda_program(const Dataset& data, double lambda) {
  return sda_program(data, lambda, canonical_class1_value(data));
}

QuadraticProgram sda_program(const Dataset& data, double lambda, double class1_value) {
  if (!(lambda >= 0.0)) throw InvalidArgument("sda: lambda must be non-negative");
  QuadraticProgram qp;
  qp.base = data.pooled();
  qp.u = data.mean_difference();
  qp.weight = data.rank_one_weight();
  qp.c = (static_cast<double>(data.n1()) * class1_value / static_cast<double>(data.n() - 2)) *
         data.mean_difference();
  qp.lambda = lambda;
  return qp;
}

double residual_objective(const Dataset& data, const Vector& v, double lambda) {
  if (v.size() != data.p()) throw InvalidArgument("residual_objective: dimension mismatch");
  const Vector z = encode_labels(data);
  const Matrix centered = data.x().rowwise() - data.grand_mean().transpose();
  const Vector residual = z + centered * v;  // z - (-v)'(x - xbar)
  return residual.squaredNorm() / (2.0 * static_cast<double>(data.n() - 2)) + lambda * v.lpNorm<1>();
}

KktCertificate kkt_certify(const Dataset& data, const Vector& v, double lambda) {
  if (v.size() != data.p()) throw InvalidArgument("kkt_certify: dimension mismatch");
  const QuadraticProgram qp = sda_program(data, lambda);
  const Vector grad = qp.apply(v) - qp.c;
  KktCertificate cert;
  double worst_inactive = 0.0;
  for (Index j = 0; j < v.size(); ++j) {
    if (v(j) != 0.0) {
      const double sign = v(j) > 0.0 ? 1.0 : -1.0;
      cert.equality_residual = std::max(cert.equality_residual, std::abs(grad(j) + lambda * sign));
    } else {
      worst_inactive = std::max(worst_inactive, std::abs(grad(j)));
    }
  }
  cert.margin = lambda - worst_inactive;
  cert.strictly_dual_feasible = cert.margin > 0.0;
  return cert;
}

namespace {

struct ActiveSummary {
  std::optional<double> gamma;
  Vector beta_hat;
};

ActiveSummary summarize_active(const Dataset& data, const IndexSet& active, const SignVector& signs,
                               double lambda) {
  ActiveSummary out;
  if (active.empty() || static_cast<Index>(active.size()) > data.n() - 2) return out;
  try {
    const Cholesky factor(submatrix(data.pooled(), active, active));
    const Vector mu_t = subvector(data.mean_difference(), active);
    out.beta_hat = factor.solve(mu_t);
    const Vector sign_solve = factor.solve(to_vector(signs));
    const double kappa = data.rank_one_weight();
    out.gamma = kappa * (1.0 + lambda * mu_t.dot(sign_solve)) / (1.0 + kappa * mu_t.dot(out.beta_hat));
  } catch (const SingularMatrix&) {
    out.beta_hat.resize(0);
  }
  return out;
}

}  // namespace

SdaFit fit_sda(const Dataset& data, double lambda, const FitOptions& options) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("fit_sda: lambda must be non-negative");
  const QuadraticProgram qp = sda_program(data, lambda);
  SolveReport report = lasso_quadratic(qp, options.warm_start, options.solver);

  SdaFit fit;
  fit.lambda = lambda;
  fit.v_hat = std::move(report.solution);
  if (options.support_threshold > 0.0) {
    for (Index j = 0; j < fit.v_hat.size(); ++j) {
      if (std::abs(fit.v_hat(j)) <= options.support_threshold) fit.v_hat(j) = 0.0;
    }
  }
  fit.active_set = support_of(fit.v_hat);
  fit.signs = signs_of(subvector(fit.v_hat, fit.active_set));
  fit.converged = report.converged;
  fit.iterations = report.iterations;
  fit.kkt_residual = kkt_residual(qp, fit.v_hat);

  const KktCertificate cert = kkt_certify(data, fit.v_hat, lambda);
  fit.margin = cert.margin;
  fit.strictly_dual_feasible = cert.strictly_dual_feasible;

  ActiveSummary summary = summarize_active(data, fit.active_set, fit.signs, lambda);
  fit.scale_factor = summary.gamma;
  fit.beta_hat_active = std::move(summary.beta_hat);
  return fit;
}

double lambda_max(const Dataset& data) {
  return sda_program(data, 0.0).c.cwiseAbs().maxCoeff();
}

std::vector<SdaFit> fit_sda_path(const Dataset& data, const PathOptions& options) {
  if (options.points < 1) throw InvalidArgument("fit_sda_path: need at least one point");
  if (!(options.min_ratio > 0.0 && options.min_ratio <= 1.0)) {
    throw InvalidArgument("fit_sda_path: min_ratio must lie in (0, 1]");
  }
  const double top = lambda_max(data);
  std::vector<SdaFit> path;
  path.reserve(static_cast<std::size_t>(options.points));
  FitOptions fit_options = options.fit;
  for (int k = 0; k < options.points; ++k) {
    const double frac = options.points == 1 ? 0.0 : static_cast<double>(k) / (options.points - 1);
    const double lambda = top * std::pow(options.min_ratio, frac);
    path.push_back(fit_sda(data, lambda, fit_options));
    fit_options.warm_start = path.back().v_hat;
  }
  return path;
}

SignVector estimated_signs(const Dataset& data, const IndexSet& support) {
  const Vector beta_hat = solve_spd(submatrix(data.pooled(), support, support),
                                    subvector(data.mean_difference(), support));
  return signs_of(beta_hat);
}

Vector oracle_fit(const Dataset& data, const IndexSet& support, const SignVector& signs, double lambda) {
  if (!is_valid_index_set(support, data.p())) throw InvalidArgument("oracle_fit: invalid support");
  if (signs.size() != support.size()) throw InvalidArgument("oracle_fit: one sign per support entry required");
  for (int s : signs) {
    if (s != 1 && s != -1) throw InvalidArgument("oracle_fit: signs must be +1 or -1");
  }
  if (static_cast<Index>(support.size()) >= data.n() - 1) {
    std::ostringstream msg;
    msg << "oracle_fit: |T| = " << support.size() << " >= n - 1 = " << data.n() - 1 << " makes S_TT singular";
    throw InvalidArgument(msg.str());
  }
  if (!(lambda >= 0.0)) throw InvalidArgument("oracle_fit: lambda must be non-negative");

  const Cholesky factor(submatrix(data.pooled(), support, support));
  const Vector mu_t = subvector(data.mean_difference(), support);
  const Vector beta_hat = factor.solve(mu_t);
  const Vector sign_solve = factor.solve(to_vector(signs));
  const double kappa = data.rank_one_weight();
  const double gamma = kappa * (1.0 + lambda * mu_t.dot(sign_solve)) / (1.0 + kappa * mu_t.dot(beta_hat));
  return gamma * beta_hat - lambda * sign_solve;
}

PopulationSolution population_solution(const GaussianLdaModel& model, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("population_solution: lambda must be non-negative");
  const DiscriminantDirection dir = discriminant_direction(model);
  PopulationSolution out;
  out.support = dir.support;
  const Index p = model.dim();
  if (dir.support.empty()) {
    out.w_hat = Vector::Zero(p);
    out.correction = Vector::Zero(0);
    return out;
  }
  const Vector beta_t = subvector(dir.beta, dir.support);
  const double pp = model.pi1() * model.pi2();
  out.gamma = pp * (1.0 + lambda * beta_t.lpNorm<1>()) / (1.0 + pp * dir.beta_norm_sigma_sq);
  out.correction = lambda * solve_spd(submatrix(model.sigma(), dir.support, dir.support), to_vector(dir.signs));
  out.w_hat = embed(out.gamma * beta_t - out.correction, dir.support, p);
  return out;
}

QuadraticProgram population_program(const GaussianLdaModel& model, double lambda) {
  QuadraticProgram qp;
  const double pp = model.pi1() * model.pi2();
  qp.base = model.sigma();
  qp.u = model.mean_difference();
  qp.weight = pp;
  qp.c = pp * model.mean_difference();
  qp.lambda = lambda;
  return qp;
}

RecodedFit recode_equivalence(const Dataset& data, double class1_value, double lambda,
                              const std::optional<SdaFit>& canonical, const FitOptions& options) {
  if (!(class1_value > 0.0)) throw InvalidArgument("recode_equivalence: class-1 code must be positive");
  const SdaFit base = canonical ? *canonical : fit_sda(data, lambda, options);

  RecodedFit out;
  out.scaled_lambda = class1_value * static_cast<double>(data.n()) / static_cast<double>(data.n2()) * lambda;
  const QuadraticProgram qp = sda_program(data, out.scaled_lambda, class1_value);
  SolveReport report = lasso_quadratic(qp, std::nullopt, options.solver);

  SdaFit& fit = out.fit;
  fit.lambda = out.scaled_lambda;
  fit.v_hat = std::move(report.solution);
  if (options.support_threshold > 0.0) {
    for (Index j = 0; j < fit.v_hat.size(); ++j) {
      if (std::abs(fit.v_hat(j)) <= options.support_threshold) fit.v_hat(j) = 0.0;
    }
  }
  fit.active_set = support_of(fit.v_hat);
  fit.signs = signs_of(subvector(fit.v_hat, fit.active_set));
  fit.converged = report.converged;
  fit.iterations = report.iterations;
  fit.kkt_residual = kkt_residual(qp, fit.v_hat);

  // Dual feasibility in the recoded problem, checked directly on its own program.
  const Vector grad = qp.apply(fit.v_hat) - qp.c;
  double worst_inactive = 0.0;
  for (Index j = 0; j < fit.v_hat.size(); ++j) {
    if (fit.v_hat(j) == 0.0) worst_inactive = std::max(worst_inactive, std::abs(grad(j)));
  }
  fit.margin = out.scaled_lambda - worst_inactive;
  fit.strictly_dual_feasible = fit.margin > 0.0;

  out.same_support = fit.active_set == base.active_set;
  if (out.same_support && !fit.active_set.empty()) {
    Vector ratios(static_cast<Index>(fit.active_set.size()));
    for (std::size_t k = 0; k < fit.active_set.size(); ++k) {
      const Index j = fit.active_set[k];
      ratios(static_cast<Index>(k)) = fit.v_hat(j) / base.v_hat(j);
    }
    out.ratio = ratios.mean();
    out.max_ratio_deviation = (ratios.array() - out.ratio).abs().maxCoeff() / std::abs(out.ratio);
  }
  return out;
}

}  // namespace sdasel
