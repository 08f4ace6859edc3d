#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "sdasel/linalg.hpp"
#include "sdasel/types.hpp"

namespace sdasel {

enum class CovarianceKind { identity, toeplitz, equal_correlation, block_embedded, explicit_matrix };

std::string to_string(CovarianceKind kind);
CovarianceKind covariance_kind_from_string(const std::string& name);

/// Description of a covariance family.
///
/// `block_embedded` places a `block_size` x `block_size` block drawn from
/// `block_kind` (with `rho`, or `matrix` when the block is explicit) next to an
/// identity complement with zero off-diagonal blocks. make_covariance puts the
/// block in the top-left corner; make_model puts it on the drawn support.
struct CovarianceSpec {
  CovarianceKind kind = CovarianceKind::identity;
  Index dimension = 0;
  double rho = 0.0;
  Matrix matrix;
  CovarianceKind block_kind = CovarianceKind::identity;
  Index block_size = 0;

  static CovarianceSpec identity(Index p);
  static CovarianceSpec toeplitz(Index p, double rho);
  static CovarianceSpec equal_correlation(Index p, double rho);
  static CovarianceSpec explicit_matrix(Matrix sigma);
  static CovarianceSpec block(Index p, Index s, CovarianceKind block_kind, double rho = 0.0);

  void validate() const;
};

/// Builds the covariance matrix; rejects rho outside [0, 1) and non-SPD explicit
/// matrices (SingularMatrix names the failing pivot).
Matrix make_covariance(const CovarianceSpec& spec);

/// Two-class Gaussian model X | Y=k ~ N(mu_k, Sigma), P(Y=k) = pi_k.
class GaussianLdaModel {
 public:
  GaussianLdaModel(Vector mu1, Vector mu2, Matrix sigma, double pi1 = 0.5, double pi2 = 0.5);

  Index dim() const noexcept { return sigma_.rows(); }
  const Vector& mu1() const noexcept { return mu1_; }
  const Vector& mu2() const noexcept { return mu2_; }
  /// mu = mu2 - mu1.
  const Vector& mean_difference() const noexcept { return mu_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  const Cholesky& sigma_factor() const noexcept { return factor_; }
  double pi1() const noexcept { return pi1_; }
  double pi2() const noexcept { return pi2_; }

 private:
  Vector mu1_;
  Vector mu2_;
  Vector mu_;
  Matrix sigma_;
  Cholesky factor_;
  double pi1_;
  double pi2_;
};

/// beta = Sigma^{-1} mu with its support and the summaries used by the theory.
struct DiscriminantDirection {
  Vector beta;
  IndexSet support;
  SignVector signs;  ///< sgn(beta_T), aligned with `support`
  double beta_min = 0.0;
  double beta_norm_sigma_sq = 0.0;  ///< beta_T' Sigma_TT beta_T
};

/// Entries with |beta_a| below this fraction of max|beta| are rounding noise
/// from the solve and are set to exactly zero.
inline constexpr double kSupportRelativeTolerance = 1e-10;

DiscriminantDirection discriminant_direction(const GaussianLdaModel& model);

/// sigma_{a|T} = Sigma_aa - Sigma_aT Sigma_TT^{-1} Sigma_Ta, for a not in T.
double sigma_conditional(const Matrix& sigma, const IndexSet& support, Index a);

struct RandomSignMeans {
  double magnitude = 1.0;
};
struct ExplicitMeans {
  Vector mu;
};
using MeanScheme = std::variant<RandomSignMeans, ExplicitMeans>;

struct Priors {
  double pi1 = 0.5;
  double pi2 = 0.5;
};

/// Ground-truth instance with mu1 = 0 and mu2 = mu.
///
/// RandomSignMeans picks the support by a Fisher-Yates prefix of [0, p) and
/// then one fair sign per support entry, both from the same seeded stream.
/// A block_embedded covariance is placed on the support (in index order).
GaussianLdaModel make_model(Index p, Index support_size, const CovarianceSpec& covariance,
                            const MeanScheme& means, Priors priors, std::uint64_t seed);

}  // namespace sdasel
