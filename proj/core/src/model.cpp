#include "sdasel/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sdasel/errors.hpp"
#include "sdasel/rng.hpp"

namespace sdasel {

std::string to_string(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::identity: return "identity";
    case CovarianceKind::toeplitz: return "toeplitz";
    case CovarianceKind::equal_correlation: return "equal_correlation";
    case CovarianceKind::block_embedded: return "block_embedded";
    case CovarianceKind::explicit_matrix: return "explicit";
  }
  return "unknown";
}

CovarianceKind covariance_kind_from_string(const std::string& name) {
  if (name == "identity") return CovarianceKind::identity;
  if (name == "toeplitz") return CovarianceKind::toeplitz;
  if (name == "equal_correlation") return CovarianceKind::equal_correlation;
  if (name == "block_embedded") return CovarianceKind::block_embedded;
  if (name == "explicit") return CovarianceKind::explicit_matrix;
  throw InvalidArgument("unknown covariance kind '" + name + "'");
}

CovarianceSpec CovarianceSpec::identity(Index p) {
  CovarianceSpec spec;
  spec.dimension = p;
  return spec;
}

CovarianceSpec CovarianceSpec::toeplitz(Index p, double rho) {
  CovarianceSpec spec;
  spec.kind = CovarianceKind::toeplitz;
  spec.dimension = p;
  spec.rho = rho;
  return spec;
}

CovarianceSpec CovarianceSpec::equal_correlation(Index p, double rho) {
  CovarianceSpec spec;
  spec.kind = CovarianceKind::equal_correlation;
  spec.dimension = p;
  spec.rho = rho;
  return spec;
}

CovarianceSpec CovarianceSpec::explicit_matrix(Matrix sigma) {
  CovarianceSpec spec;
  spec.kind = CovarianceKind::explicit_matrix;
  spec.dimension = sigma.rows();
  spec.matrix = std::move(sigma);
  return spec;
}

CovarianceSpec CovarianceSpec::block(Index p, Index s, CovarianceKind block_kind, double rho) {
  CovarianceSpec spec;
  spec.kind = CovarianceKind::block_embedded;
  spec.dimension = p;
  spec.block_kind = block_kind;
  spec.block_size = s;
  spec.rho = rho;
  return spec;
}

namespace {

bool uses_rho(CovarianceKind kind) {
  return kind == CovarianceKind::toeplitz || kind == CovarianceKind::equal_correlation;
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    std::ostringstream msg;
    msg << "covariance: rho must lie in [0, 1), got " << rho;
    throw InvalidArgument(msg.str());
  }
}

Matrix structured(CovarianceKind kind, Index d, double rho, const Matrix& explicit_block) {
  switch (kind) {
    case CovarianceKind::identity:
      return Matrix::Identity(d, d);
    case CovarianceKind::toeplitz: {
      Matrix out(d, d);
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) out(a, b) = std::pow(rho, static_cast<double>(std::abs(a - b)));
      }
      return out;
    }
    case CovarianceKind::equal_correlation: {
      Matrix out = Matrix::Constant(d, d, rho);
      out.diagonal().setOnes();
      return out;
    }
    case CovarianceKind::explicit_matrix: {
      if (explicit_block.rows() != d || explicit_block.cols() != d) {
        throw InvalidArgument("covariance: explicit matrix has the wrong shape");
      }
      if (!is_symmetric(explicit_block)) throw InvalidArgument("covariance: explicit matrix is not symmetric");
      Cholesky check(explicit_block);  // throws SingularMatrix with the pivot index
      return explicit_block;
    }
    case CovarianceKind::block_embedded:
      break;
  }
  throw InvalidArgument("covariance: block_embedded cannot be nested");
}

}  // namespace

void CovarianceSpec::validate() const {
  if (dimension < 1) throw InvalidArgument("covariance: dimension must be positive");
  if (uses_rho(kind)) check_rho(rho);
  if (kind == CovarianceKind::block_embedded) {
    if (block_kind == CovarianceKind::block_embedded) {
      throw InvalidArgument("covariance: block_embedded cannot be nested");
    }
    if (block_size < 0 || block_size > dimension) {
      throw InvalidArgument("covariance: block size must lie in [0, dimension]");
    }
    if (uses_rho(block_kind)) check_rho(rho);
  }
}

Matrix make_covariance(const CovarianceSpec& spec) {
  spec.validate();
  if (spec.kind != CovarianceKind::block_embedded) {
    return structured(spec.kind, spec.dimension, spec.rho, spec.matrix);
  }
  Matrix out = Matrix::Identity(spec.dimension, spec.dimension);
  out.topLeftCorner(spec.block_size, spec.block_size) =
      structured(spec.block_kind, spec.block_size, spec.rho, spec.matrix);
  return out;
}

GaussianLdaModel::GaussianLdaModel(Vector mu1, Vector mu2, Matrix sigma, double pi1, double pi2)
    : mu1_(std::move(mu1)), mu2_(std::move(mu2)), sigma_(std::move(sigma)), pi1_(pi1), pi2_(pi2) {
  const Index p = sigma_.rows();
  if (p < 1 || sigma_.cols() != p || mu1_.size() != p || mu2_.size() != p) {
    throw InvalidArgument("model: mu1, mu2 and sigma dimensions disagree");
  }
  if (!(pi1_ > 0.0 && pi1_ < 1.0 && pi2_ > 0.0 && pi2_ < 1.0) || std::abs(pi1_ + pi2_ - 1.0) > 1e-12) {
    throw InvalidArgument("model: priors must lie in (0, 1) and sum to one");
  }
  if (!is_symmetric(sigma_)) throw InvalidArgument("model: sigma is not symmetric");
  factor_ = Cholesky(sigma_);
  mu_ = mu2_ - mu1_;
}

DiscriminantDirection discriminant_direction(const GaussianLdaModel& model) {
  DiscriminantDirection out;
  out.beta = model.sigma_factor().solve(model.mean_difference());
  const double scale = out.beta.size() ? out.beta.cwiseAbs().maxCoeff() : 0.0;
  for (Index a = 0; a < out.beta.size(); ++a) {
    if (std::abs(out.beta(a)) <= kSupportRelativeTolerance * scale) out.beta(a) = 0.0;
  }
  out.support = support_of(out.beta);
  const Vector beta_t = subvector(out.beta, out.support);
  out.signs = signs_of(beta_t);
  out.beta_min = out.support.empty() ? 0.0 : beta_t.cwiseAbs().minCoeff();
  const Matrix sigma_tt = submatrix(model.sigma(), out.support, out.support);
  out.beta_norm_sigma_sq = std::max(0.0, beta_t.dot(sigma_tt * beta_t));
  return out;
}

double sigma_conditional(const Matrix& sigma, const IndexSet& support, Index a) {
  if (a < 0 || a >= sigma.rows()) throw InvalidArgument("sigma_conditional: index out of range");
  if (std::binary_search(support.begin(), support.end(), a)) {
    throw InvalidArgument("sigma_conditional: index lies inside the conditioning set");
  }
  if (support.empty()) return sigma(a, a);
  const Matrix sigma_tt = submatrix(sigma, support, support);
  const Vector sigma_ta = submatrix(sigma, support, IndexSet{a}).col(0);
  const double value = sigma(a, a) - sigma_ta.dot(solve_spd(sigma_tt, sigma_ta));
  return std::max(0.0, value);
}

GaussianLdaModel make_model(Index p, Index support_size, const CovarianceSpec& covariance,
                            const MeanScheme& means, Priors priors, std::uint64_t seed) {
  if (p < 1) throw InvalidArgument("make_model: p must be positive");
  if (support_size < 1 || support_size > p) {
    std::ostringstream msg;
    msg << "make_model: support size " << support_size << " must lie in [1, p=" << p << "]";
    throw InvalidArgument(msg.str());
  }
  if (covariance.dimension != p) throw InvalidArgument("make_model: covariance dimension differs from p");

  Vector mu = Vector::Zero(p);
  IndexSet support;
  if (const auto* random = std::get_if<RandomSignMeans>(&means)) {
    Rng rng(seed);
    std::vector<Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Index{0});
    for (Index i = 0; i < support_size; ++i) {
      const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(p - i)));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    support.assign(order.begin(), order.begin() + support_size);
    std::sort(support.begin(), support.end());
    for (Index a : support) mu(a) = rng.bernoulli(0.5) ? random->magnitude : -random->magnitude;
  } else {
    const auto& given = std::get<ExplicitMeans>(means).mu;
    if (given.size() != p) throw InvalidArgument("make_model: explicit mu has the wrong length");
    mu = given;
    support = support_of(mu);
  }

  Matrix sigma;
  if (covariance.kind == CovarianceKind::block_embedded) {
    if (covariance.block_size != support_size) {
      throw InvalidArgument("make_model: block size must equal the support size");
    }
    if (static_cast<Index>(support.size()) != support_size) {
      throw InvalidArgument("make_model: block_embedded needs exactly s nonzero means");
    }
    const Matrix corner = make_covariance(covariance).topLeftCorner(support_size, support_size);
    sigma = Matrix::Identity(p, p);
    for (Index i = 0; i < support_size; ++i) {
      for (Index j = 0; j < support_size; ++j) {
        sigma(support[static_cast<std::size_t>(i)], support[static_cast<std::size_t>(j)]) = corner(i, j);
      }
    }
  } else {
    sigma = make_covariance(covariance);
  }
  return GaussianLdaModel(Vector::Zero(p), std::move(mu), std::move(sigma), priors.pi1, priors.pi2);
}

}  // namespace sdasel
