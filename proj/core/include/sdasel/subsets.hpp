#pragma once

#include <cstdint>

#include "sdasel/types.hpp"

namespace sdasel {

/// C(n, k) as a double (exact below 2^53).
double binomial(Index n, Index k);

/// log C(n, k) via lgamma; finite for 0 <= k <= n.
double log_binomial(Index n, Index k);

/// C(n, k) clamped to UINT64_MAX on overflow.
std::uint64_t binomial_saturating(Index n, Index k);

/// Advances a sorted size-k subset of [0, n) to its lexicographic successor.
/// Returns false (leaving `subset` unspecified) after the last subset.
bool next_combination(IndexSet& subset, Index n);

/// The `rank`-th size-k subset of [0, n) in lexicographic order.
IndexSet unrank_combination(std::uint64_t rank, Index n, Index k);

/// |a symmetric-difference b| for sorted index sets.
Index symmetric_difference_size(const IndexSet& a, const IndexSet& b);

IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);

/// True when `set` is sorted, duplicate-free and inside [0, p).
bool is_valid_index_set(const IndexSet& set, Index p);

}  // namespace sdasel
