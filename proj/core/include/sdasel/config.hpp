#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sdasel/errors.hpp"
#include "sdasel/harness.hpp"

namespace sdasel {

/// Parse failure with a 1-based source position.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// A scalar is a number, string or boolean; arrays hold scalars.
using ConfigScalar = std::variant<double, std::string, bool>;
using ConfigValue = std::variant<double, std::string, bool, std::vector<ConfigScalar>>;

struct ConfigEntry {
  ConfigValue value;
  int line = 0;
  int column = 0;  ///< column of the value
};

/// Flat `key = value` document; `#` starts a comment.
using ConfigDocument = std::map<std::string, ConfigEntry>;

ConfigDocument parse_config_document(const std::string& text);

/// Maps a document onto ExperimentConfig. Keys mirror the field names:
/// regime | regimes, p_list, theta_grid, replications, covariance, rho,
/// rho_list, lambda_rule, lambda, k_lambda0, mean_magnitude, base_seed,
/// workers, support_threshold, max_failure_fraction.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace sdasel
