#pragma once

#include <cstdint>
#include <vector>

#include "sdasel/model.hpp"
#include "sdasel/types.hpp"

namespace sdasel {

/// n labeled observations with the two-class summary statistics precomputed.
///
/// Labels are 1 or 2 and each class needs at least two members.
/// pooled = ((n1-1) S1 + (n2-1) S2) / (n-2).
class Dataset {
 public:
  Dataset(Matrix x, std::vector<int> y);

  Index n() const noexcept { return x_.rows(); }
  Index p() const noexcept { return x_.cols(); }
  Index n1() const noexcept { return n1_; }
  Index n2() const noexcept { return n2_; }

  const Matrix& x() const noexcept { return x_; }
  const std::vector<int>& y() const noexcept { return y_; }

  const Vector& mean1() const noexcept { return mean1_; }
  const Vector& mean2() const noexcept { return mean2_; }
  /// mean2 - mean1.
  const Vector& mean_difference() const noexcept { return mean_diff_; }
  const Vector& grand_mean() const noexcept { return grand_mean_; }
  const Matrix& scatter1() const noexcept { return s1_; }
  const Matrix& scatter2() const noexcept { return s2_; }
  const Matrix& pooled() const noexcept { return pooled_; }

  /// n1 n2 / (n (n-2)), the weight of the rank-one term in the SDA Gram matrix.
  double rank_one_weight() const noexcept;

  /// Same observations with labels 1 and 2 exchanged.
  Dataset relabeled() const;

  /// Same observations with columns permuted: new column j is old column perm[j].
  Dataset permuted_columns(const std::vector<Index>& perm) const;

 private:
  Matrix x_;
  std::vector<int> y_;
  Index n1_ = 0;
  Index n2_ = 0;
  Vector mean1_, mean2_, mean_diff_, grand_mean_;
  Matrix s1_, s2_, pooled_;
};

/// Retry cap for redrawing labels when a class ends up with fewer than two members.
inline constexpr int kLabelRedrawLimit = 100;

/// Draws n labeled observations: labels i.i.d. with P[Y=2] = pi2 (redrawn as a
/// whole while a class has < 2 members), features mu_y + L z with L the model's
/// Cholesky factor. Fully determined by (model, n, seed).
Dataset sample_dataset(const GaussianLdaModel& model, Index n, std::uint64_t seed);

}  // namespace sdasel
