#include <cmath>
#include <numeric>

#include "doctest.h"
#include "sdasel/errors.hpp"
#include "sdasel/estimator.hpp"
#include "sdasel/linalg.hpp"
#include "sdasel/subsets.hpp"
#include "sdasel/theory.hpp"
#include "support.hpp"

using namespace sdasel;

namespace {

GaussianLdaModel identity_with(Index p, const std::vector<double>& head) {
  Vector mu = Vector::Zero(p);
  for (std::size_t k = 0; k < head.size(); ++k) mu(static_cast<Index>(k)) = head[k];
  return testing::simple_model(mu);
}

IndexSet first_subset(Index s) {
  IndexSet t(static_cast<std::size_t>(s));
  std::iota(t.begin(), t.end(), Index{0});
  return t;
}

// Literal definitions, enumerating T' explicitly.
double naive_phi_close(const Matrix& sigma, Index s) {
  const Index p = sigma.rows();
  double best = INFINITY;
  IndexSet t = first_subset(s);
  do {
    for (Index u : t) {
      double sum = 0.0;
      for (Index v : complement(t, p)) sum += sigma(u, u) + sigma(v, v) - 2.0 * sigma(u, v);
      best = std::min(best, sum / static_cast<double>(p - s));
    }
  } while (next_combination(t, p));
  return best;
}

double naive_phi_far(const Matrix& sigma, Index s) {
  const Index p = sigma.rows();
  double best = INFINITY;
  IndexSet t = first_subset(s);
  do {
    const IndexSet rest = complement(t, p);
    const auto m = static_cast<Index>(rest.size());
    IndexSet pick = first_subset(s);
    double total = 0.0;
    long count = 0;
    do {
      IndexSet u = t;
      for (Index j : pick) u.push_back(rest[static_cast<std::size_t>(j)]);
      total += submatrix(sigma, u, u).sum();
      ++count;
    } while (next_combination(pick, m));
    best = std::min(best, total / static_cast<double>(count));
  } while (next_combination(t, p));
  return best;
}

}  // namespace

TEST_CASE("irrepresentable: zero cross-covariance") {
  const auto v = irrepresentable(Matrix::Identity(6, 6), {0, 1}, {1, -1});
  CHECK(v.value == 0.0);
  CHECK(v.margin == 1.0);
  const Matrix block = make_covariance(CovarianceSpec::block(10, 3, CovarianceKind::toeplitz, 0.7));
  CHECK(irrepresentable(block, {0, 1, 2}, {1, 1, -1}).margin == 1.0);
}

TEST_CASE("irrepresentable: equal correlation") {
  const Matrix sigma = make_covariance(CovarianceSpec::equal_correlation(12, 0.1));
  const auto v = irrepresentable(sigma, {0, 1, 2, 3, 4}, SignVector(5, 1));
  CHECK(v.value == doctest::Approx(0.5 / 1.4).epsilon(1e-14));
  CHECK(v.margin == doctest::Approx(1.0 - 0.5 / 1.4).epsilon(1e-14));
  CHECK(v.satisfies(0.6));
  CHECK_FALSE(v.satisfies(0.7));
}

TEST_CASE("irrepresentable: explicit-inverse oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix sigma = testing::random_spd(7, seed, 0.3);
    const IndexSet t{1, 3, 4};
    const SignVector sg{1, -1, (seed % 2) ? 1 : -1};
    const Matrix inv = submatrix(sigma, t, t).inverse();
    const IndexSet rest = complement(t, 7);
    const Vector w = submatrix(sigma, rest, t) * inv * to_vector(sg);
    CHECK(irrepresentable(sigma, t, sg).value == doctest::Approx(w.cwiseAbs().maxCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("irrepresentable: invariant under permutation and sign flips") {
  const Matrix sigma = testing::random_spd(6, 3, 0.4);
  const IndexSet t{0, 2, 5};
  const SignVector sg{1, 1, -1};
  const double base = irrepresentable(sigma, t, sg).value;
  // Flip the sign of variable 2 (row and column) and of its sign entry.
  Matrix flipped = sigma;
  flipped.row(2) *= -1.0;
  flipped.col(2) *= -1.0;
  CHECK(irrepresentable(flipped, t, {1, -1, -1}).value == doctest::Approx(base).epsilon(1e-12));
  // Relabel the variables by reversing the order.
  const std::vector<Index> perm{5, 4, 3, 2, 1, 0};
  Matrix reordered(6, 6);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) reordered(i, j) = sigma(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  CHECK(irrepresentable(reordered, {0, 3, 5}, {-1, 1, 1}).value == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("lambda0 and lambda") {
  const auto model = identity_with(101, {1.0, -1.0});
  const double expected = std::sqrt(0.25 * 2.0 * std::log(99.0 * std::log(1000.0)) / 1000.0);
  const auto l0 = lambda0(model, 1000.0, 1.0);
  CHECK(l0.value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(l0.value == doctest::Approx(0.0571304).epsilon(1e-6));
  CHECK_FALSE(l0.empty_complement);
  CHECK(lambda0(model, 1000.0, 2.0).value == doctest::Approx(2.0 * l0.value).epsilon(1e-15));
  CHECK(lambda_of(model, 1000.0) == doctest::Approx(l0.value / 1.5).epsilon(1e-14));

  const auto weak = identity_with(50, {0.5, 0.5});  // B = 0.5, so the (1 v B) factor is 1
  const double weak_expected = std::sqrt(0.25 * std::log(48.0 * std::log(400.0)) / 400.0);
  CHECK(lambda0(weak, 400.0).value == doctest::Approx(weak_expected).epsilon(1e-14));

  const auto full = identity_with(3, {1.0, 1.0, 1.0});
  CHECK(lambda0(full, 100.0).empty_complement);
  CHECK_THROWS_AS(lambda0(model, 2.0), InvalidArgument);
}

TEST_CASE("lambda_sda") {
  CHECK(lambda_sda(0.0, 50, 5, 200.0) == doctest::Approx(0.3 * std::sqrt(std::log(45.0) / 200.0)).epsilon(1e-15));
  const double n = 2.0 * 16.0 * std::log(100.0);
  const double expected = 0.3 / 5.0 * std::sqrt(16.0 * std::log(84.0) / n);
  CHECK(lambda_sda(16.0, 100, 16, n) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(lambda_sda(16.0, 100, 16, n) == doctest::Approx(0.0416155).epsilon(1e-6));
  CHECK(lambda_sda(16.0, 100, 16, 4.0 * n) == doctest::Approx(expected / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(lambda_sda(1.0, 6, 5, 100.0), InvalidArgument);

  std::vector<double> head(16, 1.0);
  CHECK(lambda_sda(identity_with(100, head), n) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("beta_min_threshold") {
  const auto model = identity_with(60, {1.0, -1.0, 1.0});
  const double n = 500.0;
  const double first = std::sqrt(3.0 * std::log(3.0 * std::log(n)) / n);
  const double second = lambda0(model, n).value;  // ||Sigma_TT^{-1} sgn||_inf = 1
  CHECK(beta_min_threshold(model, n) == doctest::Approx(std::max(first, second)).epsilon(1e-14));
  TheoryConstants doubled;
  doubled.k_beta = 2.0;
  CHECK(beta_min_threshold(model, n, doubled) == doctest::Approx(2.0 * beta_min_threshold(model, n)).epsilon(1e-15));
}

TEST_CASE("sufficient_n") {
  const auto model = identity_with(105, {1.0, 1.0, 1.0, 1.0, 1.0});
  const Index n = sufficient_n(model, 4.0);
  // Independent scan of n >= 5 log(100 log n).
  Index scan = 2;
  while (static_cast<double>(scan) < 5.0 * std::log(100.0 * std::log(static_cast<double>(scan))) || scan < 8) ++scan;
  CHECK(n == scan);
  CHECK(n == 30);
  CHECK(static_cast<double>(n) >= sample_size_rhs(model, static_cast<double>(n)));
  CHECK(static_cast<double>(n - 1) < sample_size_rhs(model, static_cast<double>(n - 1)));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = make_model(40, 4, CovarianceSpec::toeplitz(40, 0.5), RandomSignMeans{}, Priors{}, seed);
    const Index nn = sufficient_n(m);
    CHECK(static_cast<double>(nn) >= sample_size_rhs(m, static_cast<double>(nn)));
    CHECK(static_cast<double>(nn - 1) < sample_size_rhs(m, static_cast<double>(nn - 1)));
  }
}

TEST_CASE("phi: identity closed forms") {
  for (Index s : {1, 2, 3}) {
    CHECK(phi_close(Matrix::Identity(10, 10), s) == 2.0);
    CHECK(phi_far(Matrix::Identity(10, 10), s) == 2.0 * static_cast<double>(s));
  }
}

TEST_CASE("phi: closed forms agree with enumeration on structured matrices") {
  for (double gamma : {0.0, 0.1, 0.5}) {
    for (Index p = 4; p <= 10; ++p) {
      const Matrix sigma = make_covariance(CovarianceSpec::equal_correlation(p, gamma));
      for (Index s = 1; s <= 3 && 2 * s <= p; ++s) {
        const double close = 2.0 * (1.0 - gamma);
        const double far = 2.0 * s * (1.0 - gamma) + 4.0 * s * s * gamma;
        CHECK(phi_close(sigma, s) == doctest::Approx(close).epsilon(1e-12));
        CHECK(phi_far(sigma, s) == doctest::Approx(far).epsilon(1e-12));
        CHECK(std::abs(phi_close_enumerated(sigma, s) - close) <= 1e-12);
        CHECK(std::abs(phi_far_enumerated(sigma, s) - far) <= 1e-12);
      }
    }
  }
}

TEST_CASE("phi: enumeration against the literal definition") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix sigma = testing::random_spd(8, seed, 0.2);
    CHECK(phi_close(sigma, 2) == doctest::Approx(naive_phi_close(sigma, 2)).epsilon(1e-12));
    CHECK(phi_far(sigma, 2) == doctest::Approx(naive_phi_far(sigma, 2)).epsilon(1e-12));
    CHECK(phi_far(sigma, 3) == doctest::Approx(naive_phi_far(sigma, 3)).epsilon(1e-12));
  }
}

TEST_CASE("phi: cap and domain") {
  const Matrix sigma = testing::random_spd(30, 1);
  CHECK_THROWS_AS(phi_close(sigma, 10, 1000), EnumerationCapExceeded);
  CHECK_THROWS_AS(phi_far(Matrix::Identity(5, 5), 3), InvalidArgument);
  CHECK_THROWS_AS(phi_close(Matrix::Identity(5, 5), 5), InvalidArgument);
}

TEST_CASE("tau_min") {
  const double value = tau_min(2.0, 6.0, 3, 500.0, 40);
  const double far = std::sqrt(log_binomial(37, 3) / (500.0 * 6.0));
  const double close = std::sqrt(std::log(38.0) / (500.0 * 2.0));
  CHECK(value == doctest::Approx(2.0 * std::max(far, close)).epsilon(1e-14));
  CHECK(tau_min(Matrix::Identity(40, 40), 3, 500.0) == doctest::Approx(value).epsilon(1e-14));

  double previous = INFINITY;
  for (double n = 50.0; n <= 5000.0; n *= 1.5) {
    const double t = tau_min(1.5, 5.0, 3, n, 40);
    CHECK(t <= previous);
    previous = t;
  }
  for (double phi = 0.5; phi <= 8.0; phi += 0.5) {
    CHECK(tau_min(phi + 0.5, 5.0, 3, 300.0, 40) <= tau_min(phi, 5.0, 3, 300.0, 40));
    CHECK(tau_min(1.0, phi + 0.5, 3, 300.0, 40) <= tau_min(1.0, phi, 3, 300.0, 40));
  }
}

TEST_CASE("population_conditions") {
  const auto model = identity_with(5, {1.0, 1.0});
  const auto none = population_conditions(model, 0.0);
  CHECK(none.beta_min_ok);
  CHECK(none.beta_min_rhs == 0.0);

  const auto holds = population_conditions(model, 0.1);
  CHECK(holds.beta_min_lhs == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(holds.beta_min_rhs == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(holds.beta_min_slack == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(holds.satisfied());

  const auto fails = population_conditions(model, 0.5);
  CHECK(fails.beta_min_lhs == doctest::Approx(0.25 * 2.0 / 1.5).epsilon(1e-14));
  CHECK(fails.beta_min_rhs == doctest::Approx(0.5));
  CHECK_FALSE(fails.beta_min_ok);
  CHECK_FALSE(fails.satisfied());
}

TEST_CASE("sign recovery at the population level implies irrepresentable <= 1") {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto model = make_model(12, 3, CovarianceSpec::equal_correlation(12, 0.1 * static_cast<double>(seed % 9)),
                                  RandomSignMeans{}, Priors{}, seed);
    const auto dir = discriminant_direction(model);
    const auto numeric = lasso_quadratic(population_program(model, 0.05));
    if (support_of(numeric.solution) != dir.support) continue;
    if (signs_of(subvector(numeric.solution, dir.support)) != dir.signs) continue;
    ++recovered;
    CHECK(irrepresentable(model.sigma(), dir.support, dir.signs).value <= 1.0 + 1e-9);
  }
  CHECK(recovered > 0);
}

TEST_CASE("theory_report: identity family and block-embedded margin") {
  const auto model = make_model(40, 4, CovarianceSpec::identity(40), RandomSignMeans{}, Priors{}, 2);
  const TheoryReport r = theory_report(model, 400.0);
  CHECK(r.irrepresentable_margin == 1.0);
  REQUIRE(r.phi_close.has_value());
  CHECK(*r.phi_close == 2.0);
  CHECK(*r.phi_far == 8.0);
  CHECK(*r.tau_min == doctest::Approx(tau_min(2.0, 8.0, 4, 400.0, 40)));
  CHECK(r.q_n == doctest::Approx(4.0));
  CHECK(r.r_n == doctest::Approx(r.lambda * 4.0));
  CHECK(r.sufficient_n == sufficient_n(model));
  CHECK(r.lambda0 >= 0.0);
  CHECK(r.beta_min_threshold >= 0.0);

  const auto blocked =
      make_model(60, 5, CovarianceSpec::block(60, 5, CovarianceKind::equal_correlation, 0.6), RandomSignMeans{}, Priors{}, 3);
  const TheoryReport b = theory_report(blocked, 400.0, {}, 0.0, 1000);
  CHECK(b.irrepresentable_margin == 1.0);
  CHECK_FALSE(b.phi_close.has_value());
  CHECK_FALSE(b.phi_note.empty());
}
