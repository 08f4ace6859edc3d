#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sdasel {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Folds a list of words into one seed; order-sensitive and stable across
/// platforms. Replication streams are addressed as mix_seed({base, p, ...}).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept;

/// Deterministic stream used by every sampler in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sdasel
