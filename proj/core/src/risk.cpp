#include "sdasel/risk.hpp"

#include <cmath>

#include "sdasel/errors.hpp"
#include "sdasel/linalg.hpp"
#include "sdasel/rng.hpp"

namespace sdasel {

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

Classifier Classifier::midpoint(Vector direction, Vector mean1, Vector mean2) {
  Classifier c{std::move(direction), std::move(mean1), std::move(mean2), 0.0};
  c.validate();
  return c;
}

Classifier Classifier::with_priors(Vector direction, Vector mean1, Vector mean2, double pi1, double pi2) {
  if (!(pi1 > 0.0 && pi2 > 0.0)) throw InvalidArgument("classifier: priors must be positive");
  Classifier c{std::move(direction), std::move(mean1), std::move(mean2), std::log(pi2 / pi1)};
  c.validate();
  return c;
}

void Classifier::validate() const {
  if (direction.size() == 0 || mean1.size() != direction.size() || mean2.size() != direction.size()) {
    throw InvalidArgument("classifier: direction and means must have the same positive length");
  }
  if (direction.isZero(0.0)) throw InvalidArgument("classifier: direction must be nonzero");
  if (!std::isfinite(prior_offset)) throw InvalidArgument("classifier: prior offset must be finite");
}

double Classifier::score(const Vector& x) const {
  if (x.size() != direction.size()) throw InvalidArgument("classify: dimension mismatch");
  return direction.dot(x - 0.5 * (mean1 + mean2)) + prior_offset;
}

int classify(const Classifier& rule, const Vector& x) { return rule.score(x) > 0.0 ? 2 : 1; }

double empirical_error(const Classifier& rule, const Dataset& data) {
  Index wrong = 0;
  for (Index i = 0; i < data.n(); ++i) {
    if (classify(rule, data.x().row(i).transpose()) != data.y()[static_cast<std::size_t>(i)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(data.n());
}

double bayes_risk(const GaussianLdaModel& model) {
  if (model.pi1() != 0.5 || model.pi2() != 0.5) {
    throw InvalidArgument("bayes_risk: the closed form needs pi1 = pi2 = 1/2");
  }
  const DiscriminantDirection dir = discriminant_direction(model);
  return normal_cdf(-std::sqrt(dir.beta_norm_sigma_sq) / 2.0);
}

double conditional_error_rate(const GaussianLdaModel& model, const Vector& v, const Vector& mean1,
                              const Vector& mean2) {
  const Index p = model.dim();
  if (v.size() != p || mean1.size() != p || mean2.size() != p) {
    throw InvalidArgument("conditional_error_rate: dimension mismatch");
  }
  const double variance = v.dot(model.sigma() * v);
  if (!(variance > 0.0)) throw InvalidArgument("conditional_error_rate: v' Sigma v must be positive");
  const double sd = std::sqrt(variance);
  const double half_gap = 0.5 * v.dot(mean2 - mean1);
  const double class1 = normal_cdf((v.dot(model.mu1() - mean1) - half_gap) / sd);
  const double class2 = normal_cdf((-v.dot(model.mu2() - mean2) - half_gap) / sd);
  return 0.5 * (class1 + class2);
}

MonteCarloError monte_carlo_error(const GaussianLdaModel& model, const Classifier& rule, std::uint64_t draws,
                                  std::uint64_t seed) {
  rule.validate();
  if (draws == 0) throw InvalidArgument("monte_carlo_error: need at least one draw");
  if (rule.direction.size() != model.dim()) throw InvalidArgument("monte_carlo_error: dimension mismatch");
  Rng rng(seed);
  const Matrix& lower = model.sigma_factor().lower();
  Vector z(model.dim());
  std::uint64_t wrong = 0;
  for (std::uint64_t k = 0; k < draws; ++k) {
    const int label = rng.bernoulli(model.pi2()) ? 2 : 1;
    for (Index j = 0; j < z.size(); ++j) z(j) = rng.normal();
    const Vector x = (label == 1 ? model.mu1() : model.mu2()) + lower.triangularView<Eigen::Lower>() * z;
    if (classify(rule, x) != label) ++wrong;
  }
  MonteCarloError out;
  out.draws = draws;
  out.rate = static_cast<double>(wrong) / static_cast<double>(draws);
  out.standard_error = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(draws));
  return out;
}

}  // namespace sdasel
