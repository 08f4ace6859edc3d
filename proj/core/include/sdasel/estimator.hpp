#pragma once

#include <optional>

#include "sdasel/dataset.hpp"
#include "sdasel/lasso.hpp"
#include "sdasel/model.hpp"

namespace sdasel {

// Orientation: every SDA direction in this library points from class 1 toward
// class 2, so at the population level it is a positive multiple of
// beta = Sigma^{-1}(mu2 - mu1) and the Gram-form linear term is +kappa * mu_hat.

/// z_i = n2/n for class 1 and -n1/n for class 2.
Vector encode_labels(const Dataset& data);

/// Alternative coding: z_i = class1_value for class 1 and
/// -n1 * class1_value / n2 for class 2.
Vector encode_labels(const Dataset& data, double class1_value);

/// Class-1 code of the canonical encoding, n2/n.
double canonical_class1_value(const Dataset& data);

/// Gram form of the least-squares problem:
///   Q = S + kappa mu_hat mu_hat',  c = (n1 z1 / (n-2)) mu_hat,
/// with kappa = n1 n2 / (n (n-2)). With the canonical code c = kappa mu_hat.
QuadraticProgram sda_program(const Dataset& data, double lambda);
QuadraticProgram sda_program(const Dataset& data, double lambda, double class1_value);

/// (2(n-2))^{-1} sum_i (z_i - w'(x_i - xbar))^2 + lambda ||w||_1 evaluated at
/// the class-1-oriented direction w = -v. Differs from sda_program's objective
/// at v by a constant that does not depend on v.
double residual_objective(const Dataset& data, const Vector& v, double lambda);

struct KktCertificate {
  /// max-abs residual of the stationarity equations on the active set.
  double equality_residual = 0.0;
  /// lambda - ||(S_NT + kappa mu_N mu_T') v_T - kappa mu_N||_inf over inactive N.
  double margin = 0.0;
  /// margin > 0: every inactive dual variable is strictly inside (-1, 1).
  bool strictly_dual_feasible = false;

  bool optimal(double tol) const noexcept { return equality_residual <= tol && margin >= -tol; }
};

KktCertificate kkt_certify(const Dataset& data, const Vector& v, double lambda);

struct SdaFit {
  Vector v_hat;
  double lambda = 0.0;
  IndexSet active_set;
  SignVector signs;
  double kkt_residual = 0.0;
  double margin = 0.0;
  bool strictly_dual_feasible = false;
  bool converged = false;
  long iterations = 0;
  /// gamma_hat relating v_T to S_TT^{-1} mu_T on the active set, when S_TT is invertible.
  std::optional<double> scale_factor;
  /// S_TT^{-1} mu_hat_T on the active set (empty when unavailable).
  Vector beta_hat_active;
};

struct FitOptions {
  SolveOptions solver;
  /// Coefficients with |v_j| <= threshold are dropped from the active set.
  /// Zero keeps the exact solver support.
  double support_threshold = 0.0;
  std::optional<Vector> warm_start;
};

/// Minimizes the SDA objective by coordinate descent on its Gram form.
/// Non-convergence is reported through `converged`, not thrown.
SdaFit fit_sda(const Dataset& data, double lambda, const FitOptions& options = {});

/// lambda_max = ||c||_inf: the smallest lambda at which zero is optimal.
double lambda_max(const Dataset& data);

struct PathOptions {
  int points = 50;
  double min_ratio = 1e-3;
  FitOptions fit;
};

/// Geometric grid from lambda_max downward with warm starts.
std::vector<SdaFit> fit_sda_path(const Dataset& data, const PathOptions& options = {});

/// sgn(S_TT^{-1} mu_hat_T), the sign source used when ground truth is unknown.
SignVector estimated_signs(const Dataset& data, const IndexSet& support);

/// Closed-form minimizer of the support-restricted problem with the l1 term
/// replaced by lambda v'signs:
///   v_T = gamma S_TT^{-1} mu_T - lambda S_TT^{-1} signs,
///   gamma = kappa (1 + lambda mu_T' S_TT^{-1} signs) / (1 + kappa mu_T' S_TT^{-1} mu_T).
/// Rejects |T| >= n-1 (S_TT singular).
Vector oracle_fit(const Dataset& data, const IndexSet& support, const SignVector& signs, double lambda);

struct PopulationSolution {
  Vector w_hat;       ///< length p, zero off the support
  IndexSet support;   ///< supp(beta)
  double gamma = 0.0; ///< pi1 pi2 (1 + lambda ||beta_T||_1) / (1 + pi1 pi2 ||beta_T||^2_Sigma)
  Vector correction;  ///< lambda Sigma_TT^{-1} sgn(beta_T)
};

/// Closed-form population solution w_T = gamma beta_T - lambda Sigma_TT^{-1} sgn(beta_T).
PopulationSolution population_solution(const GaussianLdaModel& model, double lambda);

/// Q = Sigma + pi1 pi2 mu mu', c = pi1 pi2 mu.
QuadraticProgram population_program(const GaussianLdaModel& model, double lambda);

struct RecodedFit {
  SdaFit fit;
  double scaled_lambda = 0.0;
  bool same_support = false;
  /// Mean of v_alt / v_canonical over the common support.
  double ratio = 0.0;
  /// Largest |ratio_j - ratio| / |ratio| over the support.
  double max_ratio_deviation = 0.0;
};

/// Refits with class-1 code z1 and lambda' = (z1 n / n2) lambda and compares the
/// result with `canonical` (fitted here when absent).
RecodedFit recode_equivalence(const Dataset& data, double class1_value, double lambda,
                              const std::optional<SdaFit>& canonical = std::nullopt,
                              const FitOptions& options = {});

}  // namespace sdasel
