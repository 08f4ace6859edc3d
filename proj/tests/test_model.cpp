#include <cmath>

#include "doctest.h"
#include "sdasel/errors.hpp"
#include "sdasel/linalg.hpp"
#include "sdasel/model.hpp"
#include "support.hpp"

using namespace sdasel;

TEST_CASE("make_covariance: named families") {
  CHECK(make_covariance(CovarianceSpec::identity(4)) == Matrix::Identity(4, 4));

  Matrix toeplitz(3, 3);
  toeplitz << 1, 0.1, 0.01, 0.1, 1, 0.1, 0.01, 0.1, 1;
  CHECK(testing::max_abs(Matrix(make_covariance(CovarianceSpec::toeplitz(3, 0.1)) - toeplitz)) < 1e-16);

  Matrix eq(2, 2);
  eq << 1, 0.5, 0.5, 1;
  CHECK(make_covariance(CovarianceSpec::equal_correlation(2, 0.5)) == eq);
}

TEST_CASE("make_covariance: block_embedded puts the block top-left") {
  const Matrix sigma = make_covariance(CovarianceSpec::block(5, 2, CovarianceKind::equal_correlation, 0.3));
  CHECK(sigma(0, 1) == 0.3);
  CHECK(sigma(1, 0) == 0.3);
  CHECK(testing::max_abs(Matrix(sigma.bottomRightCorner(3, 3) - Matrix::Identity(3, 3))) == 0.0);
  CHECK(testing::max_abs(Matrix(sigma.topRightCorner(2, 3))) == 0.0);
}

TEST_CASE("make_covariance: invalid specs") {
  CHECK_THROWS_AS(make_covariance(CovarianceSpec::toeplitz(3, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(make_covariance(CovarianceSpec::equal_correlation(3, -0.1)), InvalidArgument);
  Matrix bad(3, 3);
  bad << 1, 0, 0, 0, 1, 2, 0, 2, 1;
  try {
    make_covariance(CovarianceSpec::explicit_matrix(bad));
    FAIL("expected SingularMatrix");
  } catch (const SingularMatrix& e) {
    CHECK(e.pivot() == 2);
    CHECK(std::string(e.what()).find("pivot") != std::string::npos);
  }
}

TEST_CASE("make_covariance: symmetric and factorable for rho in [0, 0.95]") {
  for (double rho = 0.0; rho <= 0.95 + 1e-12; rho += 0.05) {
    for (const CovarianceSpec& spec :
         {CovarianceSpec::toeplitz(30, rho), CovarianceSpec::equal_correlation(30, rho),
          CovarianceSpec::block(30, 6, CovarianceKind::toeplitz, rho),
          CovarianceSpec::block(30, 6, CovarianceKind::equal_correlation, rho)}) {
      const Matrix sigma = make_covariance(spec);
      CHECK(sigma == sigma.transpose());
      CHECK_NOTHROW(Cholesky{sigma});
    }
  }
}

TEST_CASE("make_model: explicit means") {
  const Vector mu = Eigen::Vector4d(1, -1, 0, 0);
  const auto model = make_model(4, 2, CovarianceSpec::identity(4), ExplicitMeans{mu}, Priors{}, 0);
  CHECK(model.mean_difference() == mu);
  CHECK(model.mu1() == Vector::Zero(4));
  CHECK(model.mu2() == mu);
}

TEST_CASE("make_model: determinism and random signs") {
  const auto a = make_model(6, 2, CovarianceSpec::identity(6), RandomSignMeans{}, Priors{}, 7);
  const auto b = make_model(6, 2, CovarianceSpec::identity(6), RandomSignMeans{}, Priors{}, 7);
  CHECK(a.mean_difference() == b.mean_difference());
  CHECK(a.sigma() == b.sigma());

  const auto big = make_model(100, 16, CovarianceSpec::identity(100), RandomSignMeans{}, Priors{}, 11);
  int nonzero = 0, plus = 0;
  for (Index i = 0; i < 100; ++i) {
    const double m = big.mean_difference()(i);
    if (m != 0.0) {
      ++nonzero;
      CHECK(std::abs(m) == 1.0);
      if (m > 0) ++plus;
    }
  }
  CHECK(nonzero == 16);
  CHECK(plus > 0);
  CHECK(plus < 16);

  CHECK_THROWS_AS(make_model(4, 5, CovarianceSpec::identity(4), RandomSignMeans{}, Priors{}, 0), InvalidArgument);
  CHECK_THROWS_AS(make_model(4, 0, CovarianceSpec::identity(4), RandomSignMeans{}, Priors{}, 0), InvalidArgument);
}

TEST_CASE("make_model: block_embedded covariance sits on the support") {
  const auto model =
      make_model(40, 5, CovarianceSpec::block(40, 5, CovarianceKind::equal_correlation, 0.5), RandomSignMeans{}, Priors{}, 3);
  const auto dir = discriminant_direction(model);
  CHECK(dir.support.size() == 5);
  const IndexSet rest = complement(dir.support, 40);
  CHECK(testing::max_abs(submatrix(model.sigma(), rest, dir.support)) == 0.0);
  for (Index a : rest) CHECK(dir.beta(a) == 0.0);
  CHECK(testing::max_abs(Matrix(submatrix(model.sigma(), dir.support, dir.support) -
                                make_covariance(CovarianceSpec::equal_correlation(5, 0.5)))) == 0.0);
}

TEST_CASE("GaussianLdaModel validation") {
  const Vector z = Vector::Zero(2);
  CHECK_THROWS_AS(GaussianLdaModel(z, z, Matrix::Identity(2, 2), 0.3, 0.3), InvalidArgument);
  CHECK_THROWS_AS(GaussianLdaModel(z, z, Matrix::Identity(2, 2), 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GaussianLdaModel(z, Vector::Zero(3), Matrix::Identity(2, 2)), InvalidArgument);
  CHECK_THROWS_AS(GaussianLdaModel(z, z, Matrix::Zero(2, 2)), SingularMatrix);
}

TEST_CASE("discriminant_direction: identity covariance") {
  const auto dir = discriminant_direction(testing::simple_model(Eigen::Vector3d(1, -1, 0)));
  CHECK(dir.beta == Vector(Eigen::Vector3d(1, -1, 0)));
  CHECK(dir.support == IndexSet{0, 1});
  CHECK(dir.signs == SignVector{1, -1});
  CHECK(dir.beta_min == 1.0);
  CHECK(dir.beta_norm_sigma_sq == doctest::Approx(2.0));
}

TEST_CASE("discriminant_direction: equal correlation forward multiplication") {
  const Index p = 9, s = 3;
  const double gamma = 0.3, b = 0.8;
  const Matrix sigma = make_covariance(CovarianceSpec::equal_correlation(p, gamma));
  Vector beta = Vector::Zero(p);
  beta.head(s).setConstant(b);
  const Vector mu = sigma * beta;
  for (Index a = 0; a < s; ++a) CHECK(mu(a) == doctest::Approx(b * (1 + gamma * (s - 1))).epsilon(1e-14));
  for (Index a = s; a < p; ++a) CHECK(mu(a) == doctest::Approx(gamma * b * s).epsilon(1e-14));
  const auto dir = discriminant_direction(GaussianLdaModel(Vector::Zero(p), mu, sigma));
  CHECK(dir.support == IndexSet{0, 1, 2});
  CHECK(testing::max_abs(dir.beta - beta) < 1e-12);
}

TEST_CASE("discriminant_direction: residual on random models") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index p = 3 + static_cast<Index>(seed % 10);
    const Matrix sigma = testing::random_spd(p, seed);
    const Vector mu = testing::random_vector(p, seed + 1000);
    const auto dir = discriminant_direction(GaussianLdaModel(Vector::Zero(p), mu, sigma));
    CHECK(testing::max_abs(Vector(sigma * dir.beta - mu)) < 1e-10);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto model = make_model(50, 6, CovarianceSpec::toeplitz(50, 0.6), RandomSignMeans{}, Priors{}, seed);
    const auto dir = discriminant_direction(model);
    CHECK(testing::max_abs(Vector(model.sigma() * dir.beta - model.mean_difference())) < 1e-8);
  }
}

TEST_CASE("sigma_conditional") {
  CHECK(sigma_conditional(Matrix::Identity(5, 5), {0, 2}, 4) == 1.0);

  const Matrix eq = make_covariance(CovarianceSpec::equal_correlation(4, 0.5));
  CHECK(sigma_conditional(eq, {0, 1}, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // Block-inverse oracle: 1 / ((Sigma_BB)^{-1})_aa with B = T + {a}.
  const Matrix sigma = testing::random_spd(5, 17);
  const IndexSet block{0, 1, 3};
  const Matrix inv = submatrix(sigma, block, block).inverse();
  CHECK(sigma_conditional(sigma, {0, 1}, 3) == doctest::Approx(1.0 / inv(2, 2)).epsilon(1e-12));

  CHECK(sigma_conditional(sigma, {}, 2) == sigma(2, 2));
  CHECK_THROWS_AS(sigma_conditional(sigma, {0, 1}, 1), InvalidArgument);
}

TEST_CASE("covariance kind names round-trip") {
  for (auto kind : {CovarianceKind::identity, CovarianceKind::toeplitz, CovarianceKind::equal_correlation,
                    CovarianceKind::block_embedded, CovarianceKind::explicit_matrix}) {
    CHECK(covariance_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(covariance_kind_from_string("banded"), InvalidArgument);
}
