#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdasel/model.hpp"
#include "sdasel/types.hpp"

namespace sdasel {

enum class Regime { fractional_power, sublinear, linear };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// fractional_power: ceil(2 p^0.45); sublinear: ceil(0.4p / log(0.4p)); linear: ceil(0.4p).
Index sparsity_of(Regime regime, Index p);

/// |(a \ b) u (b \ a)| for sorted index sets.
Index hamming(const IndexSet& a, const IndexSet& b);

/// ceil(theta s log p), natural log.
Index sample_size(double theta, Index s, Index p);

enum class LambdaRuleKind { paper_sda, theorem3, fixed };

std::string to_string(LambdaRuleKind kind);
LambdaRuleKind lambda_rule_from_string(const std::string& name);

struct LambdaRule {
  LambdaRuleKind kind = LambdaRuleKind::paper_sda;
  double value = 0.0;      ///< used by `fixed`
  double k_lambda0 = 1.0;  ///< used by `theorem3`
};

double lambda_for(const LambdaRule& rule, const GaussianLdaModel& model, Index n);

/// One simulation cell: a fixed (p, s, n, covariance) with independent replications.
struct CellSpec {
  Index p = 0;
  Index s = 0;
  Index n = 0;
  /// Kind of the s x s block placed on the support (identity elsewhere).
  CovarianceKind block_kind = CovarianceKind::identity;
  double rho = 0.0;
  double mean_magnitude = 1.0;
  LambdaRule lambda_rule;
  int replications = 200;
  std::uint64_t seed = 0;
  int workers = 1;
  double support_threshold = 0.0;
};

struct CellStats {
  double mean_hamming = 0.0;
  double stderr_hamming = 0.0;
  double exact_recovery_rate = 0.0;
  int replications = 0;  ///< completed replications
  int failures = 0;      ///< solver non-convergence or numeric breakdown
  std::vector<Index> hamming;  ///< per replication, -1 for failures
};

/// Replication r uses model seed mix(mix(seed, r), 1) and data seed mix(mix(seed, r), 2).
/// Results are reduced in replication order, so output does not depend on `workers`.
CellStats run_cell(const CellSpec& cell);

struct ExperimentConfig {
  std::vector<Regime> regimes{Regime::fractional_power};
  std::vector<Index> p_list;
  std::vector<double> theta_grid;
  int replications = 200;
  CovarianceKind covariance = CovarianceKind::identity;
  double rho = 0.0;
  /// When non-empty, overrides `rho` and adds one cell per value.
  std::vector<double> rho_list;
  LambdaRule lambda_rule;
  double mean_magnitude = 1.0;
  std::uint64_t base_seed = 20240101;
  int workers = 1;  ///< 0 = hardware concurrency
  double support_threshold = 0.0;
  double max_failure_fraction = 0.01;

  void validate() const;
  std::vector<double> rho_values() const;
};

/// 50 replications and p = 100 only.
ExperimentConfig quick_profile(ExperimentConfig config);

struct ExperimentRow {
  Regime regime = Regime::fractional_power;
  Index p = 0;
  Index s = 0;
  CovarianceKind covariance = CovarianceKind::identity;
  double rho = 0.0;
  double theta = 0.0;
  Index n = 0;
  double mean_hamming = 0.0;
  double stderr_hamming = 0.0;
  double exact_recovery_rate = 0.0;
  int replications = 0;
  int failures = 0;
  std::uint64_t seed = 0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

/// Seed of the (regime, p, theta-index) cell. rho is deliberately left out so
/// cells that differ only in rho share their random streams.
std::uint64_t cell_seed(std::uint64_t base_seed, Regime regime, Index p, std::size_t theta_index);

using ProgressCallback = std::function<void(const ExperimentRow&)>;

/// Full sweep over regimes x p x rho x theta. Rows are sorted by (regime, p, rho, theta).
/// Throws NumericError when a cell loses more than max_failure_fraction of its replications.
ExperimentTable run_phase_transition(const ExperimentConfig& config, const ProgressCallback& progress = {});

/// Same protocol with an equal-correlation block for each rho.
ExperimentTable run_correlation_sweep(ExperimentConfig config, const std::vector<double>& rho_list,
                                      const ProgressCallback& progress = {});

struct Crossing {
  Regime regime = Regime::fractional_power;
  Index p = 0;
  double rho = 0.0;
  std::optional<double> theta;  ///< smallest grid theta with recovery rate >= level
};

std::vector<Crossing> crossing_thetas(const ExperimentTable& table, double level = 0.99);

/// RFC-4180 field escaping.
std::string csv_field(const std::string& text);

}  // namespace sdasel
