#include <sstream>

#include "doctest.h"
#include "sdasel/dataset.hpp"
#include "sdasel/dataset_io.hpp"
#include "sdasel/errors.hpp"
#include "support.hpp"

using namespace sdasel;

TEST_CASE("sample_dataset: determinism") {
  const auto model = testing::simple_model(Eigen::Vector2d(1, 0));
  const Dataset a = sample_dataset(model, 10, 99);
  const Dataset b = sample_dataset(model, 10, 99);
  CHECK(a.x() == b.x());
  CHECK(a.y() == b.y());
  const Dataset c = sample_dataset(model, 10, 100);
  CHECK(a.x() != c.x());
}

TEST_CASE("sample_dataset: law of large numbers") {
  const Vector mu = Eigen::Vector3d(1, -0.5, 0);
  const Dataset data = sample_dataset(testing::simple_model(mu), 50000, 5);
  CHECK(testing::max_abs(Matrix(data.pooled() - Matrix::Identity(3, 3))) < 0.05);
  CHECK(testing::max_abs(Vector(data.mean_difference() - mu)) < 0.05);
  CHECK(data.n1() + data.n2() == 50000);
}

TEST_CASE("Dataset: pooled covariance identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = sample_dataset(testing::simple_model(testing::random_vector(6, seed)), 30 + static_cast<Index>(seed), seed);
    const Matrix lhs = static_cast<double>(d.n1() - 1) * d.scatter1() + static_cast<double>(d.n2() - 1) * d.scatter2();
    const Matrix rhs = static_cast<double>(d.n() - 2) * d.pooled();
    CHECK(testing::max_abs(Matrix(lhs - rhs)) <= 1e-10 * testing::max_abs(rhs));
    CHECK(d.pooled() == d.pooled().transpose());
  }
}

TEST_CASE("Dataset: statistics against direct formulas") {
  Matrix x(5, 2);
  x << 1, 2, 3, 4, 5, 0, 2, 2, 0, 1;
  const Dataset d(x, {1, 1, 2, 2, 2});
  CHECK(d.n1() == 2);
  CHECK(d.n2() == 3);
  CHECK(d.mean1() == Vector(Eigen::Vector2d(2, 3)));
  CHECK(testing::max_abs(Vector(d.mean2() - Eigen::Vector2d(7.0 / 3.0, 1.0))) < 1e-15);
  CHECK(testing::max_abs(Vector(d.grand_mean() - Eigen::Vector2d(2.2, 1.8))) < 1e-15);
  // S1 from (1,2),(3,4): deviations (-1,-1),(1,1) over 1 degree of freedom.
  CHECK(testing::max_abs(Matrix(d.scatter1() - 2.0 * Matrix::Ones(2, 2))) < 1e-15);
  CHECK(d.rank_one_weight() == doctest::Approx(6.0 / 15.0));
}

TEST_CASE("Dataset: relabeling negates the mean difference exactly") {
  const Dataset d = sample_dataset(testing::simple_model(Eigen::Vector3d(1, 2, 0)), 40, 8);
  const Dataset r = d.relabeled();
  CHECK(r.mean_difference() == -d.mean_difference());
  CHECK(r.n1() == d.n2());
  CHECK(testing::max_abs(Matrix(r.pooled() - d.pooled())) < 1e-14);
}

TEST_CASE("Dataset: invalid input") {
  CHECK_THROWS_AS(Dataset(Matrix::Zero(4, 2), {1, 2, 2, 2}), InvalidArgument);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(4, 2), {1, 1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(4, 2), {1, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(sample_dataset(testing::simple_model(Eigen::Vector2d(1, 0)), 3, 1), InvalidArgument);
}

TEST_CASE("sample_dataset: unequal priors shift the label balance") {
  const GaussianLdaModel model(Vector::Zero(2), Eigen::Vector2d(1, 0), Matrix::Identity(2, 2), 0.8, 0.2);
  const Dataset d = sample_dataset(model, 5000, 3);
  CHECK(static_cast<double>(d.n2()) / 5000.0 == doctest::Approx(0.2).epsilon(0.1));
}

TEST_CASE("csv: bit-exact round trip") {
  const Dataset d = sample_dataset(testing::simple_model(Eigen::Vector3d(0.3, -1.7, 2.0)), 25, 4);
  const std::string text = dataset_to_csv(d);
  CHECK(text.rfind("y,x1,x2,x3", 0) == 0);
  const Dataset back = parse_dataset_csv(text);
  CHECK(back.x() == d.x());
  CHECK(back.y() == d.y());
}

TEST_CASE("csv: diagnostics name line and column") {
  auto message = [](const std::string& text) {
    try {
      parse_dataset_csv(text);
    } catch (const InvalidArgument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("y,x1\n1,0.5\n1,abc\n2,1\n2,3\n").find("line 3, column 3") != std::string::npos);
  CHECK(message("y,x1\n1,0.5\n3,1\n2,1\n2,3\n").find("line 3, column 1") != std::string::npos);
  CHECK(message("y,x1\n1,0.5,7\n1,1\n2,1\n2,3\n").find("line 2") != std::string::npos);
  CHECK(message("x,x1\n").find("line 1") != std::string::npos);
  CHECK_FALSE(message("").empty());
}

TEST_CASE("number formatting") {
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_17g(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_shortest(1.0 / 3.0)) == 1.0 / 3.0);
}
