#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sdasel {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sorted, duplicate-free list of coordinate indices.
using IndexSet = std::vector<Index>;

/// Sign pattern with entries in {-1, +1}.
using SignVector = std::vector<int>;

}  // namespace sdasel
