#include "sdasel/json_export.hpp"

#include <cmath>

#include "json.hpp"
#include "sdasel/errors.hpp"

namespace sdasel {

namespace {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

json index_json(const IndexSet& set) {
  json out = json::array();
  for (Index a : set) out.push_back(a);
  return out;
}

json optional_json(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("json: ") + e.what());
  }
}

Vector read_vector(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string("json: '") + what + "' must be an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument(std::string("json: '") + what + "' must be an array of numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix read_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(std::string("json: '") + what + "' must be a non-empty array of rows");
  const auto rows = static_cast<Index>(j.size());
  Matrix m(rows, rows);
  for (Index i = 0; i < rows; ++i) {
    const Vector row = read_vector(j[static_cast<std::size_t>(i)], what);
    if (row.size() != rows) throw InvalidArgument(std::string("json: '") + what + "' must be square");
    m.row(i) = row.transpose();
  }
  return m;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("json: field '") + key + "' has the wrong type");
  }
}

CovarianceSpec covariance_from_json(const json& j, Index p, Index s) {
  if (!j.is_object()) throw InvalidArgument("json: 'covariance' must be an object");
  const CovarianceKind kind = covariance_kind_from_string(get_or<std::string>(j, "kind", "identity"));
  const double rho = get_or<double>(j, "rho", 0.0);
  switch (kind) {
    case CovarianceKind::identity: return CovarianceSpec::identity(p);
    case CovarianceKind::toeplitz: return CovarianceSpec::toeplitz(p, rho);
    case CovarianceKind::equal_correlation: return CovarianceSpec::equal_correlation(p, rho);
    case CovarianceKind::block_embedded:
      return CovarianceSpec::block(p, s, covariance_kind_from_string(get_or<std::string>(j, "block_kind", "identity")),
                                   rho);
    case CovarianceKind::explicit_matrix:
      if (!j.contains("matrix")) throw InvalidArgument("json: explicit covariance needs 'matrix'");
      return CovarianceSpec::explicit_matrix(read_matrix(j.at("matrix"), "matrix"));
  }
  throw InvalidArgument("json: unknown covariance kind");
}

}  // namespace

std::string fit_to_json(const SdaFit& fit, int indent) {
  json j;
  j["lambda"] = number(fit.lambda);
  j["v_hat"] = vector_json(fit.v_hat);
  j["active_set"] = index_json(fit.active_set);
  j["signs"] = fit.signs;
  j["kkt_residual"] = number(fit.kkt_residual);
  j["margin"] = number(fit.margin);
  j["strictly_dual_feasible"] = fit.strictly_dual_feasible;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["scale_factor"] = optional_json(fit.scale_factor);
  j["beta_hat_active"] = vector_json(fit.beta_hat_active);
  return j.dump(indent);
}

std::string decoder_to_json(const DecoderResult& result, int indent) {
  json j;
  j["t_hat"] = index_json(result.t_hat);
  j["score"] = number(result.score);
  j["runner_up_gap"] = number(result.runner_up_gap);
  j["scanned"] = result.scanned;
  j["singular_subsets"] = result.singular_subsets;
  return j.dump(indent);
}

std::string theory_to_json(const TheoryReport& r, int indent) {
  json j;
  j["p"] = r.p;
  j["s"] = r.s;
  j["n"] = number(r.n);
  j["support"] = index_json(r.support);
  j["beta_min"] = number(r.beta_min);
  j["beta_norm_sigma_sq"] = number(r.beta_norm_sigma_sq);
  j["irrepresentable_value"] = number(r.irrepresentable_value);
  j["irrepresentable_margin"] = number(r.irrepresentable_margin);
  j["beta_min_population_ok"] = r.beta_min_population_ok;
  j["max_sigma_conditional"] = number(r.max_sigma_conditional);
  j["empty_complement"] = r.empty_complement;
  j["lambda_min_sigma_tt"] = number(r.lambda_min_sigma_tt);
  j["max_inverse_diagonal"] = number(r.max_inverse_diagonal);
  j["inverse_sign_norm"] = number(r.inverse_sign_norm);
  j["lambda0"] = number(r.lambda0);
  j["lambda"] = number(r.lambda);
  j["lambda_sda"] = number(r.lambda_sda);
  j["beta_min_threshold"] = number(r.beta_min_threshold);
  j["sufficient_n"] = r.sufficient_n;
  j["phi_close"] = optional_json(r.phi_close);
  j["phi_far"] = optional_json(r.phi_far);
  j["tau_min"] = optional_json(r.tau_min);
  if (!r.phi_note.empty()) j["phi_note"] = r.phi_note;
  j["r_n"] = number(r.r_n);
  j["q_n"] = number(r.q_n);
  j["alpha"] = number(r.alpha);
  j["constants"] = {{"k_lambda0", r.constants.k_lambda0},
                    {"k_beta", r.constants.k_beta},
                    {"k_sample", r.constants.k_sample}};
  return j.dump(indent);
}

std::string model_to_json(const GaussianLdaModel& model, int indent) {
  json j;
  j["mu1"] = vector_json(model.mu1());
  j["mu2"] = vector_json(model.mu2());
  j["sigma"] = matrix_json(model.sigma());
  j["pi1"] = model.pi1();
  j["pi2"] = model.pi2();
  return j.dump(indent);
}

SdaFit fit_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("v_hat")) throw InvalidArgument("json: a fit needs 'v_hat'");
  SdaFit fit;
  fit.v_hat = read_vector(j.at("v_hat"), "v_hat");
  fit.lambda = get_or<double>(j, "lambda", 0.0);
  fit.active_set = support_of(fit.v_hat);
  fit.signs = signs_of(subvector(fit.v_hat, fit.active_set));
  fit.kkt_residual = get_or<double>(j, "kkt_residual", 0.0);
  fit.converged = get_or<bool>(j, "converged", true);
  return fit;
}

GaussianLdaModel model_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw InvalidArgument("json: a model spec must be an object");
  if (j.contains("sigma")) {
    const Matrix sigma = read_matrix(j.at("sigma"), "sigma");
    const Index p = sigma.rows();
    const Vector mu1 = j.contains("mu1") ? read_vector(j.at("mu1"), "mu1") : Vector::Zero(p);
    if (!j.contains("mu2")) throw InvalidArgument("json: an explicit model needs 'mu2'");
    const Vector mu2 = read_vector(j.at("mu2"), "mu2");
    return GaussianLdaModel(mu1, mu2, sigma, get_or<double>(j, "pi1", 0.5), get_or<double>(j, "pi2", 0.5));
  }
  if (!j.contains("p")) throw InvalidArgument("json: a model spec needs 'sigma' or 'p'");
  const auto p = static_cast<Index>(get_or<long long>(j, "p", 0));
  const json means = j.value("means", json::object());
  MeanScheme scheme = RandomSignMeans{};
  Index s = static_cast<Index>(get_or<long long>(j, "s", 0));
  if (means.contains("mu")) {
    const Vector mu = read_vector(means.at("mu"), "mu");
    scheme = ExplicitMeans{mu};
    if (s == 0) s = static_cast<Index>(support_of(mu).size());
  } else {
    const std::string name = get_or<std::string>(means, "scheme", "random_sign");
    if (name != "random_sign") throw InvalidArgument("json: unknown means scheme '" + name + "'");
    scheme = RandomSignMeans{get_or<double>(means, "magnitude", 1.0)};
  }
  const json cov = j.value("covariance", json{{"kind", "identity"}});
  const json priors = j.value("priors", json::object());
  return make_model(p, s, covariance_from_json(cov, p, s), scheme,
                    Priors{get_or<double>(priors, "pi1", 0.5), get_or<double>(priors, "pi2", 0.5)},
                    get_or<std::uint64_t>(j, "seed", 0));
}

}  // namespace sdasel
