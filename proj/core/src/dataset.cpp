#include "sdasel/dataset.hpp"

#include <sstream>

#include "sdasel/errors.hpp"
#include "sdasel/rng.hpp"

namespace sdasel {

Dataset::Dataset(Matrix x, std::vector<int> y) : x_(std::move(x)), y_(std::move(y)) {
  const Index n = x_.rows();
  const Index p = x_.cols();
  if (static_cast<Index>(y_.size()) != n) throw InvalidArgument("dataset: label count differs from rows");
  if (p < 1) throw InvalidArgument("dataset: need at least one feature");

  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (y_[i] == 1) {
      ++n1_;
    } else if (y_[i] == 2) {
      ++n2_;
    } else {
      std::ostringstream msg;
      msg << "dataset: label " << y_[i] << " at row " << i << " is not 1 or 2";
      throw InvalidArgument(msg.str());
    }
  }
  if (n1_ < 2 || n2_ < 2) {
    std::ostringstream msg;
    msg << "dataset: each class needs at least 2 observations (n1=" << n1_ << ", n2=" << n2_ << ")";
    throw InvalidArgument(msg.str());
  }

  mean1_ = Vector::Zero(p);
  mean2_ = Vector::Zero(p);
  for (Index i = 0; i < n; ++i) {
    if (y_[static_cast<std::size_t>(i)] == 1) {
      mean1_ += x_.row(i).transpose();
    } else {
      mean2_ += x_.row(i).transpose();
    }
  }
  mean1_ /= static_cast<double>(n1_);
  mean2_ /= static_cast<double>(n2_);
  mean_diff_ = mean2_ - mean1_;
  grand_mean_ = x_.colwise().mean().transpose();

  Matrix c1(n1_, p), c2(n2_, p);
  Index i1 = 0, i2 = 0;
  for (Index i = 0; i < n; ++i) {
    if (y_[static_cast<std::size_t>(i)] == 1) {
      c1.row(i1++) = x_.row(i) - mean1_.transpose();
    } else {
      c2.row(i2++) = x_.row(i) - mean2_.transpose();
    }
  }
  s1_ = Matrix(p, p);
  s2_ = Matrix(p, p);
  s1_.setZero().selfadjointView<Eigen::Lower>().rankUpdate(c1.transpose());
  s2_.setZero().selfadjointView<Eigen::Lower>().rankUpdate(c2.transpose());
  s1_ = s1_.selfadjointView<Eigen::Lower>();
  s2_ = s2_.selfadjointView<Eigen::Lower>();
  pooled_ = (s1_ + s2_) / static_cast<double>(n - 2);
  s1_ /= static_cast<double>(n1_ - 1);
  s2_ /= static_cast<double>(n2_ - 1);
}

double Dataset::rank_one_weight() const noexcept {
  const auto n = static_cast<double>(this->n());
  return static_cast<double>(n1_) * static_cast<double>(n2_) / (n * (n - 2.0));
}

Dataset Dataset::relabeled() const {
  std::vector<int> swapped(y_.size());
  for (std::size_t i = 0; i < y_.size(); ++i) swapped[i] = 3 - y_[i];
  return Dataset(x_, std::move(swapped));
}

Dataset Dataset::permuted_columns(const std::vector<Index>& perm) const {
  if (static_cast<Index>(perm.size()) != p()) throw InvalidArgument("dataset: permutation has wrong length");
  Matrix out(n(), p());
  for (Index j = 0; j < p(); ++j) out.col(j) = x_.col(perm[static_cast<std::size_t>(j)]);
  return Dataset(std::move(out), y_);
}

Dataset sample_dataset(const GaussianLdaModel& model, Index n, std::uint64_t seed) {
  if (n < 4) throw InvalidArgument("sample_dataset: n must be at least 4");
  Rng rng(seed);
  const Index p = model.dim();

  std::vector<int> y(static_cast<std::size_t>(n));
  int attempt = 0;
  for (;; ++attempt) {
    if (attempt == kLabelRedrawLimit) {
      throw NumericError("sample_dataset: could not draw two members per class within the retry cap");
    }
    Index n2 = 0;
    for (auto& label : y) {
      label = rng.bernoulli(model.pi2()) ? 2 : 1;
      n2 += label == 2;
    }
    if (n2 >= 2 && n - n2 >= 2) break;
  }

  Matrix z(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) z(i, j) = rng.normal();
  }
  Matrix x = z * model.sigma_factor().lower().transpose();
  for (Index i = 0; i < n; ++i) {
    x.row(i) += (y[static_cast<std::size_t>(i)] == 1 ? model.mu1() : model.mu2()).transpose();
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace sdasel
