#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdasel/decoder.hpp"
#include "sdasel/model.hpp"

namespace sdasel {

/// The abstract "sufficiently large" constants of the sufficiency results.
struct TheoryConstants {
  double k_lambda0 = 1.0;
  double k_beta = 1.0;
  double k_sample = 4.0;
};

struct IrrepresentableValue {
  double value = 0.0;   ///< ||Sigma_NT Sigma_TT^{-1} signs||_inf
  double margin = 1.0;  ///< 1 - value

  bool satisfies(double alpha) const noexcept { return margin >= alpha; }
};

IrrepresentableValue irrepresentable(const Matrix& sigma, const IndexSet& support, const SignVector& signs);

/// max over a in N of sigma_{a|T}; nullopt when N is empty.
std::optional<double> max_sigma_conditional(const Matrix& sigma, const IndexSet& support);

struct LambdaZero {
  double value = 0.0;
  /// p = s: the max over N is undefined and a factor of 1 was used.
  bool empty_complement = false;
};

/// K sqrt(pi1 pi2 max_N sigma_{a|T} (1 v ||beta_T||^2_Sigma) log((p-s) log n) / n).
LambdaZero lambda0(const GaussianLdaModel& model, double n, double k_lambda0 = 1.0);

/// lambda0 / (1 + pi1 pi2 ||beta_T||^2_Sigma).
double lambda_of(const GaussianLdaModel& model, double n, double k_lambda0 = 1.0);

/// 0.3 (1 + B/4)^{-1} sqrt((1 v B) log(p-s) / n) with B = ||beta_T||^2_Sigma.
double lambda_sda(double beta_norm_sigma_sq, Index p, Index s, double n);
double lambda_sda(const GaussianLdaModel& model, double n);

/// K_beta max( sqrt(max_T (Sigma_TT^{-1})_aa (1 v B) log(s log n) / n),
///             lambda0 ||Sigma_TT^{-1} sgn(beta_T)||_inf ).
double beta_min_threshold(const GaussianLdaModel& model, double n, const TheoryConstants& constants = {});

/// Smallest integer n with
///   n >= K pi1 pi2 max_N sigma_{a|T} Lambda_min(Sigma_TT)^{-1} s log((p-s) log n),
/// found by fixed-point iteration from max(8, s) and then walked down to the minimum.
Index sufficient_n(const GaussianLdaModel& model, double k_sample = 4.0);

/// Right-hand side of the sample-size condition at n.
double sample_size_rhs(const GaussianLdaModel& model, double n, double k_sample = 4.0);

/// Brute-force phi_close: minimum over T of size s and u in T.
double phi_close_enumerated(const Matrix& sigma, Index s, std::uint64_t cap = kDefaultEnumerationCap);

/// phi_far with the inner average over T' in closed form; minimum over T enumerated.
double phi_far_enumerated(const Matrix& sigma, Index s, std::uint64_t cap = kDefaultEnumerationCap);

/// Diagonal d and off-diagonal g when sigma = (d - g) I + g 11' exactly.
std::optional<std::pair<double, double>> equal_correlation_structure(const Matrix& sigma);

/// Closed form for identity / equal-correlation matrices, enumeration otherwise.
double phi_close(const Matrix& sigma, Index s, std::uint64_t cap = kDefaultEnumerationCap);
double phi_far(const Matrix& sigma, Index s, std::uint64_t cap = kDefaultEnumerationCap);

/// 2 max( sqrt(log C(p-s, s) / (n phi_far)), sqrt(log(p-s+1) / (n phi_close)) ).
double tau_min(double phi_close_value, double phi_far_value, Index s, double n, Index p);
double tau_min(const Matrix& sigma, Index s, double n, std::uint64_t cap = kDefaultEnumerationCap);

struct PopulationConditions {
  IrrepresentableValue irrepresentable;
  double alpha = 0.0;
  bool irrepresentable_ok = false;
  double beta_min_lhs = 0.0;
  double beta_min_rhs = 0.0;
  double beta_min_slack = 0.0;
  bool beta_min_ok = false;

  bool satisfied() const noexcept { return irrepresentable_ok && beta_min_ok; }
};

/// Irrepresentable condition at level alpha and the population beta_min condition
///   pi1 pi2 (1 + lambda ||beta_T||_1) / (1 + pi1 pi2 B) beta_min > lambda ||Sigma_TT^{-1} sgn||_inf.
PopulationConditions population_conditions(const GaussianLdaModel& model, double lambda, double alpha = 0.0);

struct TheoryReport {
  Index p = 0;
  Index s = 0;
  double n = 0.0;
  IndexSet support;
  double beta_min = 0.0;
  double beta_norm_sigma_sq = 0.0;
  double irrepresentable_value = 0.0;
  double irrepresentable_margin = 1.0;
  bool beta_min_population_ok = false;
  double max_sigma_conditional = 0.0;
  bool empty_complement = false;
  double lambda_min_sigma_tt = 0.0;
  double max_inverse_diagonal = 0.0;
  double inverse_sign_norm = 0.0;  ///< ||Sigma_TT^{-1} sgn(beta_T)||_inf
  double lambda0 = 0.0;
  double lambda = 0.0;
  double lambda_sda = 0.0;
  double beta_min_threshold = 0.0;
  Index sufficient_n = 0;
  std::optional<double> phi_close;
  std::optional<double> phi_far;
  std::optional<double> tau_min;
  std::string phi_note;
  double r_n = 0.0;  ///< lambda ||beta_T||_1
  double q_n = 0.0;  ///< sgn(beta_T)' Sigma_TT sgn(beta_T)
  TheoryConstants constants;
  double alpha = 0.0;
};

/// Every threshold and condition for `model` at sample size n. phi/tau fields
/// are left empty (with a note) when enumeration would exceed `cap`.
TheoryReport theory_report(const GaussianLdaModel& model, double n, const TheoryConstants& constants = {},
                           double alpha = 0.0, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace sdasel
