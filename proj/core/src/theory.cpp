#include "sdasel/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdasel/errors.hpp"
#include "sdasel/linalg.hpp"
#include "sdasel/subsets.hpp"

namespace sdasel {

namespace {

void check_support(const Matrix& sigma, const IndexSet& support) {
  if (sigma.rows() != sigma.cols()) throw InvalidArgument("theory: sigma must be square");
  if (!is_valid_index_set(support, sigma.rows())) {
    throw InvalidArgument("theory: support must be a sorted index set inside [0, p)");
  }
}

void check_enumeration(Index p, Index s, std::uint64_t cap) {
  const double count = binomial(p, s);
  if (count > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "phi enumeration over C(" << p << ", " << s << ") = " << count << " supports exceeds the cap " << cap;
    throw EnumerationCapExceeded(count, cap, msg.str());
  }
}

struct SupportSummary {
  DiscriminantDirection dir;
  Matrix sigma_tt;
  Cholesky factor;
  Index p = 0;
  Index s = 0;
};

SupportSummary summarize(const GaussianLdaModel& model) {
  SupportSummary out;
  out.dir = discriminant_direction(model);
  out.p = model.dim();
  out.s = static_cast<Index>(out.dir.support.size());
  if (out.s == 0) throw InvalidArgument("theory: the discriminant direction is zero (empty support)");
  out.sigma_tt = submatrix(model.sigma(), out.dir.support, out.dir.support);
  out.factor = Cholesky(out.sigma_tt);
  return out;
}

}  // namespace

IrrepresentableValue irrepresentable(const Matrix& sigma, const IndexSet& support, const SignVector& signs) {
  check_support(sigma, support);
  if (signs.size() != support.size()) throw InvalidArgument("irrepresentable: one sign per support entry required");
  IrrepresentableValue out;
  const IndexSet rest = complement(support, sigma.rows());
  if (rest.empty() || support.empty()) return out;
  const Vector direction = solve_spd(submatrix(sigma, support, support), to_vector(signs));
  out.value = (submatrix(sigma, rest, support) * direction).cwiseAbs().maxCoeff();
  out.margin = 1.0 - out.value;
  return out;
}

std::optional<double> max_sigma_conditional(const Matrix& sigma, const IndexSet& support) {
  check_support(sigma, support);
  const IndexSet rest = complement(support, sigma.rows());
  if (rest.empty()) return std::nullopt;
  if (support.empty()) return sigma.diagonal().maxCoeff();
  const Cholesky factor(submatrix(sigma, support, support));
  const Matrix cross = submatrix(sigma, support, rest);
  const Matrix reduced = factor.lower().triangularView<Eigen::Lower>().solve(cross);
  double worst = 0.0;
  for (std::size_t k = 0; k < rest.size(); ++k) {
    const double value = sigma(rest[k], rest[k]) - reduced.col(static_cast<Index>(k)).squaredNorm();
    worst = std::max(worst, value);
  }
  return worst;
}

LambdaZero lambda0(const GaussianLdaModel& model, double n, double k_lambda0) {
  const SupportSummary sum = summarize(model);
  if (!(n > static_cast<double>(sum.s))) throw InvalidArgument("lambda0: need n > s");
  LambdaZero out;
  const auto sigma_max = max_sigma_conditional(model.sigma(), sum.dir.support);
  out.empty_complement = !sigma_max.has_value();
  const double noise = sigma_max.value_or(1.0);
  const double complement_size = std::max<double>(1.0, static_cast<double>(sum.p - sum.s));
  const double log_term = std::log(complement_size * std::log(n));
  if (!(log_term > 0.0)) throw InvalidArgument("lambda0: log((p-s) log n) must be positive");
  const double pp = model.pi1() * model.pi2();
  out.value = k_lambda0 * std::sqrt(pp * noise * std::max(1.0, sum.dir.beta_norm_sigma_sq) * log_term / n);
  return out;
}

double lambda_of(const GaussianLdaModel& model, double n, double k_lambda0) {
  const DiscriminantDirection dir = discriminant_direction(model);
  const double pp = model.pi1() * model.pi2();
  return lambda0(model, n, k_lambda0).value / (1.0 + pp * dir.beta_norm_sigma_sq);
}

double lambda_sda(double beta_norm_sigma_sq, Index p, Index s, double n) {
  if (p <= s + 1) throw InvalidArgument("lambda_sda: need p > s + 1 so that log(p - s) > 0");
  if (!(n > 0.0)) throw InvalidArgument("lambda_sda: n must be positive");
  if (!(beta_norm_sigma_sq >= 0.0)) throw InvalidArgument("lambda_sda: ||beta_T||^2 must be non-negative");
  return 0.3 / (1.0 + beta_norm_sigma_sq / 4.0) *
         std::sqrt(std::max(1.0, beta_norm_sigma_sq) * std::log(static_cast<double>(p - s)) / n);
}

double lambda_sda(const GaussianLdaModel& model, double n) {
  const DiscriminantDirection dir = discriminant_direction(model);
  return lambda_sda(dir.beta_norm_sigma_sq, model.dim(), static_cast<Index>(dir.support.size()), n);
}

double beta_min_threshold(const GaussianLdaModel& model, double n, const TheoryConstants& constants) {
  const SupportSummary sum = summarize(model);
  const Matrix inverse = sum.factor.solve(Matrix(Matrix::Identity(sum.s, sum.s)));
  const double max_diag = inverse.diagonal().maxCoeff();
  const double log_term = std::max(0.0, std::log(static_cast<double>(sum.s) * std::log(n)));
  const double first = std::sqrt(max_diag * std::max(1.0, sum.dir.beta_norm_sigma_sq) * log_term / n);
  const double sign_norm = sum.factor.solve(to_vector(sum.dir.signs)).cwiseAbs().maxCoeff();
  const double second = lambda0(model, n, constants.k_lambda0).value * sign_norm;
  return constants.k_beta * std::max(first, second);
}

double sample_size_rhs(const GaussianLdaModel& model, double n, double k_sample) {
  const SupportSummary sum = summarize(model);
  const double noise = max_sigma_conditional(model.sigma(), sum.dir.support).value_or(1.0);
  const double lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(sum.sigma_tt, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff();
  const double complement_size = std::max<double>(1.0, static_cast<double>(sum.p - sum.s));
  const double inner = complement_size * std::log(n);
  if (!(inner > 0.0)) return -std::numeric_limits<double>::infinity();
  return k_sample * model.pi1() * model.pi2() * noise / lambda_min * static_cast<double>(sum.s) * std::log(inner);
}

Index sufficient_n(const GaussianLdaModel& model, double k_sample) {
  const SupportSummary sum = summarize(model);
  auto holds = [&](Index n) { return static_cast<double>(n) >= sample_size_rhs(model, static_cast<double>(n), k_sample); };

  Index n = std::max<Index>(8, sum.s);
  constexpr int kMaxIterations = 1000;
  for (int it = 0; it < kMaxIterations && !holds(n); ++it) {
    n = std::max(n + 1, static_cast<Index>(std::ceil(sample_size_rhs(model, static_cast<double>(n), k_sample))));
  }
  if (!holds(n)) throw NumericError("sufficient_n: fixed-point iteration did not settle");
  while (n > 2 && holds(n - 1)) --n;
  return n;
}

double phi_close_enumerated(const Matrix& sigma, Index s, std::uint64_t cap) {
  const Index p = sigma.rows();
  if (s < 1 || s >= p) throw InvalidArgument("phi_close: need 1 <= s < p");
  check_enumeration(p, s, cap);
  const Vector diag = sigma.diagonal();
  const Vector row_sum = sigma.rowwise().sum();
  const double diag_total = diag.sum();
  const double m = static_cast<double>(p - s);

  double best = std::numeric_limits<double>::infinity();
  IndexSet t(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) t[static_cast<std::size_t>(i)] = i;
  do {
    double diag_t = 0.0;
    for (Index a : t) diag_t += diag(a);
    for (Index u : t) {
      double cross_t = 0.0;  // sum over v in T of Sigma_uv
      for (Index v : t) cross_t += sigma(u, v);
      const double cross_rest = row_sum(u) - cross_t;
      const double value = (m * diag(u) + (diag_total - diag_t) - 2.0 * cross_rest) / m;
      best = std::min(best, value);
    }
  } while (next_combination(t, p));
  return best;
}

double phi_far_enumerated(const Matrix& sigma, Index s, std::uint64_t cap) {
  const Index p = sigma.rows();
  if (s < 1 || 2 * s > p) throw InvalidArgument("phi_far: need 1 <= s and 2s <= p");
  check_enumeration(p, s, cap);
  const Vector diag = sigma.diagonal();
  const Vector row_sum = sigma.rowwise().sum();
  const double total = row_sum.sum();
  const double diag_total = diag.sum();
  const double m = static_cast<double>(p - s);
  const double sd = static_cast<double>(s);
  const double pair_weight = m > 1.0 ? sd * (sd - 1.0) / (m * (m - 1.0)) : 0.0;

  double best = std::numeric_limits<double>::infinity();
  IndexSet t(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) t[static_cast<std::size_t>(i)] = i;
  do {
    double inner = 0.0, rows = 0.0, diag_t = 0.0;
    for (Index a : t) {
      rows += row_sum(a);
      diag_t += diag(a);
      for (Index b : t) inner += sigma(a, b);
    }
    const double cross = rows - inner;               // T x R
    const double rest_all = total - 2.0 * rows + inner;  // R x R
    const double rest_diag = diag_total - diag_t;
    // E over uniform T' in R of 1' Sigma_{T u T'} 1.
    const double value =
        inner + 2.0 * (sd / m) * cross + (sd / m) * rest_diag + pair_weight * (rest_all - rest_diag);
    best = std::min(best, value);
  } while (next_combination(t, p));
  return best;
}

std::optional<std::pair<double, double>> equal_correlation_structure(const Matrix& sigma) {
  const Index p = sigma.rows();
  if (p < 1 || sigma.cols() != p) return std::nullopt;
  const double d = sigma(0, 0);
  const double g = p > 1 ? sigma(0, 1) : 0.0;
  for (Index a = 0; a < p; ++a) {
    for (Index b = 0; b < p; ++b) {
      if (sigma(a, b) != (a == b ? d : g)) return std::nullopt;
    }
  }
  return std::make_pair(d, g);
}

double phi_close(const Matrix& sigma, Index s, std::uint64_t cap) {
  if (const auto eq = equal_correlation_structure(sigma)) {
    if (s < 1 || s >= sigma.rows()) throw InvalidArgument("phi_close: need 1 <= s < p");
    return 2.0 * (eq->first - eq->second);
  }
  return phi_close_enumerated(sigma, s, cap);
}

double phi_far(const Matrix& sigma, Index s, std::uint64_t cap) {
  if (const auto eq = equal_correlation_structure(sigma)) {
    if (s < 1 || 2 * s > sigma.rows()) throw InvalidArgument("phi_far: need 1 <= s and 2s <= p");
    const double two_s = 2.0 * static_cast<double>(s);
    return two_s * (eq->first - eq->second) + two_s * two_s * eq->second;
  }
  return phi_far_enumerated(sigma, s, cap);
}

double tau_min(double phi_close_value, double phi_far_value, Index s, double n, Index p) {
  if (!(phi_close_value > 0.0 && phi_far_value > 0.0)) throw InvalidArgument("tau_min: phi values must be positive");
  if (!(n > 0.0) || s < 1 || 2 * s > p) throw InvalidArgument("tau_min: need n > 0 and 1 <= s <= p/2");
  const double far = std::sqrt(log_binomial(p - s, s) / (n * phi_far_value));
  const double close = std::sqrt(std::log(static_cast<double>(p - s + 1)) / (n * phi_close_value));
  return 2.0 * std::max(far, close);
}

double tau_min(const Matrix& sigma, Index s, double n, std::uint64_t cap) {
  return tau_min(phi_close(sigma, s, cap), phi_far(sigma, s, cap), s, n, sigma.rows());
}

PopulationConditions population_conditions(const GaussianLdaModel& model, double lambda, double alpha) {
  if (!(lambda >= 0.0)) throw InvalidArgument("population_conditions: lambda must be non-negative");
  const SupportSummary sum = summarize(model);
  PopulationConditions out;
  out.alpha = alpha;
  out.irrepresentable = irrepresentable(model.sigma(), sum.dir.support, sum.dir.signs);
  out.irrepresentable_ok = out.irrepresentable.margin >= alpha;

  const double pp = model.pi1() * model.pi2();
  const double l1 = subvector(sum.dir.beta, sum.dir.support).lpNorm<1>();
  out.beta_min_lhs = pp * (1.0 + lambda * l1) / (1.0 + pp * sum.dir.beta_norm_sigma_sq) * sum.dir.beta_min;
  out.beta_min_rhs = lambda * sum.factor.solve(to_vector(sum.dir.signs)).cwiseAbs().maxCoeff();
  out.beta_min_slack = out.beta_min_lhs - out.beta_min_rhs;
  out.beta_min_ok = out.beta_min_lhs > out.beta_min_rhs;
  return out;
}

TheoryReport theory_report(const GaussianLdaModel& model, double n, const TheoryConstants& constants, double alpha,
                           std::uint64_t cap) {
  const SupportSummary sum = summarize(model);
  TheoryReport r;
  r.p = sum.p;
  r.s = sum.s;
  r.n = n;
  r.support = sum.dir.support;
  r.beta_min = sum.dir.beta_min;
  r.beta_norm_sigma_sq = sum.dir.beta_norm_sigma_sq;
  r.constants = constants;
  r.alpha = alpha;

  const auto sigma_max = max_sigma_conditional(model.sigma(), sum.dir.support);
  r.max_sigma_conditional = sigma_max.value_or(1.0);
  r.empty_complement = !sigma_max.has_value();
  r.lambda_min_sigma_tt =
      Eigen::SelfAdjointEigenSolver<Matrix>(sum.sigma_tt, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  r.max_inverse_diagonal = sum.factor.solve(Matrix(Matrix::Identity(sum.s, sum.s))).diagonal().maxCoeff();
  const Vector sign_vec = to_vector(sum.dir.signs);
  r.inverse_sign_norm = sum.factor.solve(sign_vec).cwiseAbs().maxCoeff();
  r.q_n = sign_vec.dot(sum.sigma_tt * sign_vec);

  r.lambda0 = lambda0(model, n, constants.k_lambda0).value;
  r.lambda = lambda_of(model, n, constants.k_lambda0);
  r.r_n = r.lambda * subvector(sum.dir.beta, sum.dir.support).lpNorm<1>();
  if (sum.p > sum.s + 1) r.lambda_sda = lambda_sda(sum.dir.beta_norm_sigma_sq, sum.p, sum.s, n);
  r.beta_min_threshold = beta_min_threshold(model, n, constants);
  r.sufficient_n = sufficient_n(model, constants.k_sample);

  const PopulationConditions cond = population_conditions(model, r.lambda, alpha);
  r.irrepresentable_value = cond.irrepresentable.value;
  r.irrepresentable_margin = cond.irrepresentable.margin;
  r.beta_min_population_ok = cond.beta_min_ok;

  try {
    r.phi_close = phi_close(model.sigma(), sum.s, cap);
    r.phi_far = phi_far(model.sigma(), sum.s, cap);
    r.tau_min = tau_min(*r.phi_close, *r.phi_far, sum.s, n, sum.p);
  } catch (const InvalidArgument& e) {
    r.phi_close.reset();
    r.phi_far.reset();
    r.tau_min.reset();
    r.phi_note = e.what();
  }
  return r;
}

}  // namespace sdasel
