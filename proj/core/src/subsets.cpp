#include "sdasel/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "sdasel/errors.hpp"

namespace sdasel {

namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

double log_binomial(Index n, Index k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

std::uint64_t binomial_saturating(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  uint128 out = 1;
  for (Index i = 1; i <= k; ++i) {
    out = out * static_cast<uint128>(n - k + i) / static_cast<uint128>(i);
    if (out > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(out);
}

bool next_combination(IndexSet& subset, Index n) {
  const auto k = static_cast<Index>(subset.size());
  Index i = k - 1;
  while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++subset[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) {
    subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

IndexSet unrank_combination(std::uint64_t rank, Index n, Index k) {
  if (k < 0 || k > n) throw InvalidArgument("unrank_combination: need 0 <= k <= n");
  if (rank >= binomial_saturating(n, k)) {
    throw InvalidArgument("unrank_combination: rank out of range");
  }
  IndexSet out;
  out.reserve(static_cast<std::size_t>(k));
  Index next = 0;
  for (Index slot = 0; slot < k; ++slot) {
    for (Index candidate = next;; ++candidate) {
      // Subsets whose slot-th element is `candidate`.
      const std::uint64_t block = binomial_saturating(n - candidate - 1, k - slot - 1);
      if (rank < block) {
        out.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

Index symmetric_difference_size(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return static_cast<Index>(out.size());
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_valid_index_set(const IndexSet& set, Index p) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] < 0 || set[i] >= p) return false;
    if (i > 0 && set[i] <= set[i - 1]) return false;
  }
  return true;
}

}  // namespace sdasel
