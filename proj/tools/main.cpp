// sdasel command line: simulate, fit, decode, theory, risk, generate.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdasel/config.hpp"
#include "sdasel/dataset_io.hpp"
#include "sdasel/decoder.hpp"
#include "sdasel/errors.hpp"
#include "sdasel/estimator.hpp"
#include "sdasel/harness.hpp"
#include "sdasel/json_export.hpp"
#include "sdasel/risk.hpp"
#include "sdasel/theory.hpp"

using namespace sdasel;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text << '\n';
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

struct SimulateArgs {
  std::string config;
  std::string out;
  bool quick = false;
  std::optional<int> workers;
  bool progress = false;
};

struct FitArgs {
  std::string data;
  std::optional<double> lambda;
  std::string rule;
  std::string model;
  double k_lambda0 = 1.0;
  double support_threshold = 0.0;
  std::string out;
};

struct DecodeArgs {
  std::string data;
  Index s = 0;
  unsigned workers = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::string out;
};

struct TheoryArgs {
  std::string model;
  double n = 0.0;
  TheoryConstants constants;
  double alpha = 0.0;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::string out;
};

struct RiskArgs {
  std::string model;
  std::string fit;
  std::string data;
  std::uint64_t draws = 0;
  std::uint64_t seed = 1;
  std::string out;
};

struct GenerateArgs {
  std::string model;
  Index n = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int simulate(const SimulateArgs& args) {
  ExperimentConfig config = load_experiment_config(args.config);
  if (args.quick) config = quick_profile(config);
  if (args.workers) config.workers = *args.workers;
  ProgressCallback progress;
  if (args.progress) {
    progress = [](const ExperimentRow& row) {
      std::cerr << to_string(row.regime) << " p=" << row.p << " rho=" << row.rho << " theta=" << row.theta
                << " n=" << row.n << " hamming=" << row.mean_hamming << '\n';
    };
  }
  const ExperimentTable table = run_phase_transition(config, progress);
  if (args.out.empty() || args.out == "-") {
    std::cout << table.to_csv();
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + args.out);
    table.write_csv(out);
  }
  return 0;
}

int fit(const FitArgs& args) {
  const Dataset data = load_dataset_csv(args.data);
  double lambda = 0.0;
  if (args.lambda) {
    lambda = *args.lambda;
  } else {
    if (args.model.empty()) throw InvalidArgument("fit: --lambda-rule needs --model");
    LambdaRule rule;
    rule.kind = lambda_rule_from_string(args.rule);
    rule.k_lambda0 = args.k_lambda0;
    if (rule.kind == LambdaRuleKind::fixed) throw InvalidArgument("fit: use --lambda for a fixed value");
    const GaussianLdaModel model = model_from_json(read_file(args.model));
    if (model.dim() != data.p()) throw InvalidArgument("fit: model and data dimensions differ");
    lambda = lambda_for(rule, model, data.n());
  }
  FitOptions options;
  options.support_threshold = args.support_threshold;
  const SdaFit result = fit_sda(data, lambda, options);
  emit(fit_to_json(result), args.out);
  return result.converged ? 0 : kExitNumeric;
}

int decode(const DecodeArgs& args) {
  const Dataset data = load_dataset_csv(args.data);
  DecoderOptions options;
  options.workers = args.workers;
  options.enumeration_cap = args.cap;
  emit(decoder_to_json(exhaustive_decode(data, args.s, options)), args.out);
  return 0;
}

int theory(const TheoryArgs& args) {
  const GaussianLdaModel model = model_from_json(read_file(args.model));
  emit(theory_to_json(theory_report(model, args.n, args.constants, args.alpha, args.cap)), args.out);
  return 0;
}

int risk(const RiskArgs& args) {
  const GaussianLdaModel model = model_from_json(read_file(args.model));
  const SdaFit fitted = fit_from_json(read_file(args.fit));
  const Dataset data = load_dataset_csv(args.data);
  if (fitted.v_hat.size() != model.dim() || data.p() != model.dim())
    throw InvalidArgument("risk: model, fit and data dimensions differ");
  const Classifier rule = Classifier::midpoint(fitted.v_hat, data.mean1(), data.mean2());

  nlohmann::json j;
  j["conditional_error"] = number(conditional_error_rate(model, fitted.v_hat, data.mean1(), data.mean2()));
  j["empirical_error"] = number(empirical_error(rule, data));
  j["bayes_risk"] = model.pi1() == 0.5 && model.pi2() == 0.5 ? number(bayes_risk(model)) : nlohmann::json(nullptr);
  if (args.draws > 0) {
    const MonteCarloError mc = monte_carlo_error(model, rule, args.draws, args.seed);
    j["monte_carlo"] = {{"rate", number(mc.rate)}, {"standard_error", number(mc.standard_error)}, {"draws", mc.draws}};
  }
  emit(j.dump(2), args.out);
  return 0;
}

int generate(const GenerateArgs& args) {
  const GaussianLdaModel model = model_from_json(read_file(args.model));
  const Dataset data = sample_dataset(model, args.n, args.seed);
  if (args.out.empty() || args.out == "-") {
    write_dataset_csv(std::cout, data);
  } else {
    save_dataset_csv(args.out, data);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse discriminant analysis: support recovery tools"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run a phase-transition experiment and write the results CSV");
  sim_cmd->add_option("--config", sim.config, "experiment config (key = value)")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", sim.out, "output CSV (default stdout)");
  sim_cmd->add_flag("--quick", sim.quick, "50 replications, p = 100");
  sim_cmd->add_option("--workers", sim.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  sim_cmd->add_flag("--progress", sim.progress, "print one line per finished cell to stderr");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit the SDA estimator to a CSV dataset");
  fit_cmd->add_option("--data", fit_args.data, "dataset CSV (y,x1,...,xp)")->required()->check(CLI::ExistingFile);
  auto* lambda_opt = fit_cmd->add_option("--lambda", fit_args.lambda, "penalty value")->check(CLI::PositiveNumber);
  auto* rule_opt =
      fit_cmd->add_option("--lambda-rule", fit_args.rule, "paper_sda or theorem3 (needs --model)")->excludes(lambda_opt);
  lambda_opt->excludes(rule_opt);
  fit_cmd->add_option("--model", fit_args.model, "model JSON used by --lambda-rule")->check(CLI::ExistingFile);
  fit_cmd->add_option("--k-lambda0", fit_args.k_lambda0, "constant in lambda0 for theorem3")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--support-threshold", fit_args.support_threshold, "drop |v_j| at or below this")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--out", fit_args.out, "output JSON (default stdout)");
  fit_cmd->callback([&] {
    if (!lambda_opt->count() && !rule_opt->count()) throw CLI::RequiredError("--lambda or --lambda-rule");
  });

  DecodeArgs dec;
  auto* dec_cmd = app.add_subcommand("decode", "exhaustive-search support decoder");
  dec_cmd->add_option("--data", dec.data, "dataset CSV")->required()->check(CLI::ExistingFile);
  dec_cmd->add_option("-s,--s", dec.s, "support size")->required()->check(CLI::PositiveNumber);
  dec_cmd->add_option("--workers", dec.workers, "scan threads");
  dec_cmd->add_option("--cap", dec.cap, "maximum number of subsets");
  dec_cmd->add_option("--out", dec.out, "output JSON (default stdout)");

  TheoryArgs th;
  auto* th_cmd = app.add_subcommand("theory", "thresholds and conditions for a model at sample size n");
  th_cmd->add_option("--model", th.model, "model JSON")->required()->check(CLI::ExistingFile);
  th_cmd->add_option("-n,--n", th.n, "sample size")->required()->check(CLI::PositiveNumber);
  th_cmd->add_option("--k-lambda0", th.constants.k_lambda0, "constant in lambda0");
  th_cmd->add_option("--k-beta", th.constants.k_beta, "constant in the beta_min threshold");
  th_cmd->add_option("--k-sample", th.constants.k_sample, "constant in the sample-size condition");
  th_cmd->add_option("--alpha", th.alpha, "irrepresentable slack");
  th_cmd->add_option("--cap", th.cap, "maximum subsets enumerated for phi");
  th_cmd->add_option("--out", th.out, "output JSON (default stdout)");

  RiskArgs rk;
  auto* rk_cmd = app.add_subcommand("risk", "error rates of the midpoint rule built from a fit");
  rk_cmd->add_option("--model", rk.model, "model JSON")->required()->check(CLI::ExistingFile);
  rk_cmd->add_option("--fit", rk.fit, "fit JSON")->required()->check(CLI::ExistingFile);
  rk_cmd->add_option("--data", rk.data, "training CSV supplying the class means")->required()->check(CLI::ExistingFile);
  rk_cmd->add_option("--draws", rk.draws, "Monte Carlo draws (0 = skip)");
  rk_cmd->add_option("--seed", rk.seed, "Monte Carlo seed");
  rk_cmd->add_option("--out", rk.out, "output JSON (default stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "sample a labelled dataset from a model");
  gen_cmd->add_option("--model", gen.model, "model JSON")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("-n,--n", gen.n, "sample size")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "sampling seed");
  gen_cmd->add_option("--out", gen.out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*sim_cmd) return simulate(sim);
    if (*fit_cmd) return fit(fit_args);
    if (*dec_cmd) return decode(dec);
    if (*th_cmd) return theory(th);
    if (*rk_cmd) return risk(rk);
    if (*gen_cmd) return generate(gen);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
