#pragma once

#include <cstdint>

#include "sdasel/dataset.hpp"
#include "sdasel/model.hpp"

namespace sdasel {

/// Standard normal CDF.
double normal_cdf(double t);

/// Linear rule: label 2 iff v'(x - (m1 + m2)/2) + offset > 0.
struct Classifier {
  Vector direction;
  Vector mean1;
  Vector mean2;
  /// log(pi2 / pi1) in prior mode, 0 for the plain midpoint rule.
  double prior_offset = 0.0;

  /// Midpoint rule with fitted or population means.
  static Classifier midpoint(Vector direction, Vector mean1, Vector mean2);
  /// Midpoint rule shifted by log(pi2 / pi1).
  static Classifier with_priors(Vector direction, Vector mean1, Vector mean2, double pi1, double pi2);

  double score(const Vector& x) const;
  void validate() const;
};

int classify(const Classifier& rule, const Vector& x);

/// Fraction of rows of `data` that the rule labels incorrectly.
double empirical_error(const Classifier& rule, const Dataset& data);

/// Phi(-sqrt(mu_T' Sigma_TT^{-1} mu_T) / 2). Requires pi1 = pi2 = 1/2.
double bayes_risk(const GaussianLdaModel& model);

/// Error of the midpoint rule with direction v and fitted means under the true model:
///   1/2 Phi(( v'(mu1 - m1) - v'(m2 - m1)/2) / sqrt(v'Sigma v))
/// + 1/2 Phi((-v'(mu2 - m2) - v'(m2 - m1)/2) / sqrt(v'Sigma v)).
double conditional_error_rate(const GaussianLdaModel& model, const Vector& v, const Vector& mean1,
                              const Vector& mean2);

struct MonteCarloError {
  double rate = 0.0;
  double standard_error = 0.0;
  std::uint64_t draws = 0;
};

/// Error of `rule` on `draws` fresh points from the model (labels by the priors).
MonteCarloError monte_carlo_error(const GaussianLdaModel& model, const Classifier& rule, std::uint64_t draws,
                                  std::uint64_t seed);

}  // namespace sdasel
