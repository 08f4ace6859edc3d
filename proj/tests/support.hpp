#pragma once

#include <cstdint>

#include "sdasel/dataset.hpp"
#include "sdasel/model.hpp"
#include "sdasel/rng.hpp"

namespace testing {

using sdasel::Index;
using sdasel::Matrix;
using sdasel::Vector;

inline Matrix random_spd(Index d, std::uint64_t seed, double ridge = 0.5) {
  sdasel::Rng rng(seed);
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = rng.normal();
  Matrix out = a * a.transpose() / static_cast<double>(d) + ridge * Matrix::Identity(d, d);
  return 0.5 * (out + out.transpose());
}

inline Vector random_vector(Index d, std::uint64_t seed) {
  sdasel::Rng rng(seed);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

/// Identity-covariance model with mu2 = mu on the first entries.
inline sdasel::GaussianLdaModel simple_model(const Vector& mu) {
  return sdasel::GaussianLdaModel(Vector::Zero(mu.size()), mu, Matrix::Identity(mu.size(), mu.size()));
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace testing
