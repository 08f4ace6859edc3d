#include "sdasel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "sdasel/dataset.hpp"
#include "sdasel/dataset_io.hpp"
#include "sdasel/errors.hpp"
#include "sdasel/estimator.hpp"
#include "sdasel/rng.hpp"
#include "sdasel/subsets.hpp"
#include "sdasel/theory.hpp"

namespace sdasel {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::fractional_power: return "fractional_power";
    case Regime::sublinear: return "sublinear";
    case Regime::linear: return "linear";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "fractional_power" || name == "fractional") return Regime::fractional_power;
  if (name == "sublinear") return Regime::sublinear;
  if (name == "linear") return Regime::linear;
  throw InvalidArgument("unknown regime '" + name + "' (expected fractional_power, sublinear or linear)");
}

Index sparsity_of(Regime regime, Index p) {
  if (p < 3) throw InvalidArgument("sparsity_of: p must be at least 3");
  const double pd = static_cast<double>(p);
  double s = 0.0;
  switch (regime) {
    case Regime::fractional_power: s = std::ceil(2.0 * std::pow(pd, 0.45)); break;
    case Regime::sublinear: {
      const double m = 0.4 * pd;
      if (!(m > 1.0)) throw InvalidArgument("sparsity_of: the sublinear regime needs 0.4p > 1");
      s = std::ceil(m / std::log(m));
      break;
    }
    case Regime::linear: s = std::ceil(0.4 * pd); break;
  }
  return std::min(static_cast<Index>(s), p);
}

Index hamming(const IndexSet& a, const IndexSet& b) { return symmetric_difference_size(a, b); }

Index sample_size(double theta, Index s, Index p) {
  if (!(theta > 0.0)) throw InvalidArgument("sample_size: theta must be positive");
  return static_cast<Index>(std::ceil(theta * static_cast<double>(s) * std::log(static_cast<double>(p))));
}

std::string to_string(LambdaRuleKind kind) {
  switch (kind) {
    case LambdaRuleKind::paper_sda: return "paper_sda";
    case LambdaRuleKind::theorem3: return "theorem3";
    case LambdaRuleKind::fixed: return "fixed";
  }
  return "unknown";
}

LambdaRuleKind lambda_rule_from_string(const std::string& name) {
  if (name == "paper_sda" || name == "sda") return LambdaRuleKind::paper_sda;
  if (name == "theorem3") return LambdaRuleKind::theorem3;
  if (name == "fixed") return LambdaRuleKind::fixed;
  throw InvalidArgument("unknown lambda rule '" + name + "' (expected paper_sda, theorem3 or fixed)");
}

double lambda_for(const LambdaRule& rule, const GaussianLdaModel& model, Index n) {
  switch (rule.kind) {
    case LambdaRuleKind::paper_sda: return lambda_sda(model, static_cast<double>(n));
    case LambdaRuleKind::theorem3: return lambda_of(model, static_cast<double>(n), rule.k_lambda0);
    case LambdaRuleKind::fixed:
      if (!(rule.value >= 0.0)) throw InvalidArgument("fixed lambda must be non-negative");
      return rule.value;
  }
  throw InvalidArgument("unknown lambda rule");
}

namespace {

CovarianceSpec cell_covariance(const CellSpec& cell) {
  return CovarianceSpec::block(cell.p, cell.s, cell.block_kind, cell.rho);
}

// Hamming distance of one replication, or -1 when the fit failed numerically.
Index run_replication(const CellSpec& cell, const CovarianceSpec& covariance, int r) {
  const std::uint64_t rep_seed = mix_seed({cell.seed, static_cast<std::uint64_t>(r)});
  const GaussianLdaModel model = make_model(cell.p, cell.s, covariance, RandomSignMeans{cell.mean_magnitude},
                                            Priors{}, mix_seed({rep_seed, 1}));
  const IndexSet truth = discriminant_direction(model).support;
  try {
    const Dataset data = sample_dataset(model, cell.n, mix_seed({rep_seed, 2}));
    FitOptions options;
    options.support_threshold = cell.support_threshold;
    const SdaFit fit = fit_sda(data, lambda_for(cell.lambda_rule, model, cell.n), options);
    if (!fit.converged) return -1;
    return hamming(fit.active_set, truth);
  } catch (const NumericError&) {
    return -1;
  }
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

}  // namespace

CellStats run_cell(const CellSpec& cell) {
  if (cell.replications < 1) throw InvalidArgument("run_cell: replications must be at least 1");
  if (cell.n < 4) throw InvalidArgument("run_cell: n must be at least 4");
  const CovarianceSpec covariance = cell_covariance(cell);
  covariance.validate();

  CellStats stats;
  stats.hamming.assign(static_cast<std::size_t>(cell.replications), -1);
  const int workers = std::min(resolve_workers(cell.workers), cell.replications);
  if (workers == 1) {
    for (int r = 0; r < cell.replications; ++r) stats.hamming[static_cast<std::size_t>(r)] = run_replication(cell, covariance, r);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int r = next++; r < cell.replications; r = next++) {
          try {
            stats.hamming[static_cast<std::size_t>(r)] = run_replication(cell, covariance, r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  double sum = 0.0, sum_sq = 0.0;
  int exact = 0;
  for (Index h : stats.hamming) {
    if (h < 0) {
      ++stats.failures;
      continue;
    }
    ++stats.replications;
    sum += static_cast<double>(h);
    sum_sq += static_cast<double>(h) * static_cast<double>(h);
    if (h == 0) ++exact;
  }
  if (stats.replications > 0) {
    const double m = stats.replications;
    stats.mean_hamming = sum / m;
    stats.exact_recovery_rate = exact / m;
    if (stats.replications > 1) {
      const double variance = std::max(0.0, (sum_sq - m * stats.mean_hamming * stats.mean_hamming) / (m - 1.0));
      stats.stderr_hamming = std::sqrt(variance / m);
    }
  }
  return stats;
}

void ExperimentConfig::validate() const {
  if (regimes.empty()) throw InvalidArgument("config: at least one regime is required");
  if (p_list.empty()) throw InvalidArgument("config: p_list must not be empty");
  for (Index p : p_list) {
    if (p < 3) throw InvalidArgument("config: every p must be at least 3");
  }
  if (theta_grid.empty()) throw InvalidArgument("config: theta_grid must not be empty");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > 0.0)) throw InvalidArgument("config: theta values must be positive");
    if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
      throw InvalidArgument("config: theta_grid must be strictly increasing");
    }
  }
  if (replications < 1) throw InvalidArgument("config: replications must be at least 1");
  if (workers < 0) throw InvalidArgument("config: workers must be non-negative");
  if (covariance == CovarianceKind::block_embedded || covariance == CovarianceKind::explicit_matrix) {
    throw InvalidArgument("config: covariance must be identity, toeplitz or equal_correlation");
  }
  for (double r : rho_values()) {
    if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("config: rho values must lie in [0, 1)");
  }
  if (!(mean_magnitude > 0.0)) throw InvalidArgument("config: mean_magnitude must be positive");
  if (!(support_threshold >= 0.0)) throw InvalidArgument("config: support_threshold must be non-negative");
  if (lambda_rule.kind == LambdaRuleKind::fixed && !(lambda_rule.value >= 0.0)) {
    throw InvalidArgument("config: fixed lambda must be non-negative");
  }
  if (!(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0)) {
    throw InvalidArgument("config: max_failure_fraction must lie in [0, 1]");
  }
}

std::vector<double> ExperimentConfig::rho_values() const {
  if (rho_list.empty()) return {rho};
  std::vector<double> values = rho_list;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

ExperimentConfig quick_profile(ExperimentConfig config) {
  config.replications = 50;
  config.p_list = {100};
  return config;
}

std::uint64_t cell_seed(std::uint64_t base_seed, Regime regime, Index p, std::size_t theta_index) {
  return mix_seed({base_seed, static_cast<std::uint64_t>(regime), static_cast<std::uint64_t>(p),
                   static_cast<std::uint64_t>(theta_index)});
}

ExperimentTable run_phase_transition(const ExperimentConfig& config, const ProgressCallback& progress) {
  config.validate();
  std::vector<Regime> regimes = config.regimes;
  std::sort(regimes.begin(), regimes.end());
  regimes.erase(std::unique(regimes.begin(), regimes.end()), regimes.end());
  std::vector<Index> ps = config.p_list;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  ExperimentTable table;
  for (Regime regime : regimes) {
    for (Index p : ps) {
      const Index s = sparsity_of(regime, p);
      for (double rho : config.rho_values()) {
        for (std::size_t ti = 0; ti < config.theta_grid.size(); ++ti) {
          CellSpec cell;
          cell.p = p;
          cell.s = s;
          cell.n = sample_size(config.theta_grid[ti], s, p);
          cell.block_kind = config.covariance;
          cell.rho = rho;
          cell.mean_magnitude = config.mean_magnitude;
          cell.lambda_rule = config.lambda_rule;
          cell.replications = config.replications;
          cell.seed = cell_seed(config.base_seed, regime, p, ti);
          cell.workers = config.workers;
          cell.support_threshold = config.support_threshold;
          const CellStats stats = run_cell(cell);

          ExperimentRow row;
          row.regime = regime;
          row.p = p;
          row.s = s;
          row.covariance = config.covariance;
          row.rho = rho;
          row.theta = config.theta_grid[ti];
          row.n = cell.n;
          row.mean_hamming = stats.mean_hamming;
          row.stderr_hamming = stats.stderr_hamming;
          row.exact_recovery_rate = stats.exact_recovery_rate;
          row.replications = stats.replications;
          row.failures = stats.failures;
          row.seed = cell.seed;
          if (static_cast<double>(stats.failures) > config.max_failure_fraction * config.replications) {
            std::ostringstream msg;
            msg << "simulation aborted: " << stats.failures << " of " << config.replications
                << " replications failed in cell (regime=" << to_string(regime) << ", p=" << p << ", rho=" << rho
                << ", theta=" << row.theta << ")";
            throw NumericError(msg.str());
          }
          if (progress) progress(row);
          table.rows.push_back(row);
        }
      }
    }
  }
  return table;
}

ExperimentTable run_correlation_sweep(ExperimentConfig config, const std::vector<double>& rho_list,
                                      const ProgressCallback& progress) {
  if (rho_list.empty()) throw InvalidArgument("run_correlation_sweep: rho_list must not be empty");
  config.covariance = CovarianceKind::equal_correlation;
  config.rho_list = rho_list;
  return run_phase_transition(config, progress);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void ExperimentTable::write_csv(std::ostream& out) const {
  out << "regime,p,s,covariance,rho,theta,n,mean_hamming,stderr_hamming,exact_recovery_rate,replications,"
         "failures,seed\r\n";
  for (const ExperimentRow& row : rows) {
    out << csv_field(to_string(row.regime)) << ',' << row.p << ',' << row.s << ','
        << csv_field(to_string(row.covariance)) << ',' << format_17g(row.rho) << ',' << format_17g(row.theta)
        << ',' << row.n << ',' << format_17g(row.mean_hamming) << ',' << format_17g(row.stderr_hamming) << ','
        << format_17g(row.exact_recovery_rate) << ',' << row.replications << ',' << row.failures << ','
        << row.seed << "\r\n";
  }
}

std::string ExperimentTable::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

std::vector<Crossing> crossing_thetas(const ExperimentTable& table, double level) {
  std::map<std::tuple<Regime, Index, double>, std::optional<double>> curves;
  for (const ExperimentRow& row : table.rows) {
    auto& best = curves[{row.regime, row.p, row.rho}];
    if (row.exact_recovery_rate >= level && (!best || row.theta < *best)) best = row.theta;
  }
  std::vector<Crossing> out;
  for (const auto& [key, theta] : curves) {
    out.push_back(Crossing{std::get<0>(key), std::get<1>(key), std::get<2>(key), theta});
  }
  return out;
}

}  // namespace sdasel
