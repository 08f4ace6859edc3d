#pragma once

#include <cstdint>
#include <limits>

#include "sdasel/dataset.hpp"
#include "sdasel/model.hpp"

namespace sdasel {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

struct DecoderOptions {
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  /// Threads scanning disjoint rank ranges; the result does not depend on it.
  unsigned workers = 1;
};

struct DecoderResult {
  IndexSet t_hat;
  /// g(t_hat) = mu_hat' S^{-1} mu_hat restricted to t_hat.
  double score = -std::numeric_limits<double>::infinity();
  std::uint64_t scanned = 0;
  /// score minus the second-best score; +infinity when only one subset exists.
  double runner_up_gap = std::numeric_limits<double>::infinity();
  /// Subsets whose S block failed Cholesky; scored as -infinity.
  std::uint64_t singular_subsets = 0;
};

/// g(T) = m_T' A_TT^{-1} m_T; -infinity when A_TT is singular.
double mahalanobis_score(const Vector& m, const Matrix& a, const IndexSet& subset);

/// Scans every size-s subset in lexicographic order and keeps the maximizer of
/// g (ties go to the lexicographically smallest subset).
DecoderResult exhaustive_decode(const Dataset& data, Index s, const DecoderOptions& options = {});

/// Same scan on explicit statistics (mean difference and covariance estimate).
DecoderResult exhaustive_decode(const Vector& mean_difference, const Matrix& covariance, Index s,
                                const DecoderOptions& options = {});

/// Scan of the lexicographic rank range [first, first + count).
DecoderResult decode_rank_range(const Vector& mean_difference, const Matrix& covariance, Index s,
                                std::uint64_t first, std::uint64_t count);

/// Associative, order-independent combination of two partial scans.
DecoderResult merge_results(const DecoderResult& a, const DecoderResult& b);

struct GapTerms {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double gamma = 0.0;
  Index k = 0;
};

/// log(C(p-s, s-k) C(s, k) s log n) / n.
double gamma_npsk(Index n, Index p, Index s, Index k);

/// Population gap terms for T against T' with A1 = T and T', A2 = T \ T',
/// A3 = T' \ T. An empty A1 gives a1 = 0 and unconditional a2, a3.
GapTerms gap_terms(const GaussianLdaModel& model, const IndexSet& support, const IndexSet& competitor, Index n);

struct SeparationConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

struct SeparationResult {
  double margin = std::numeric_limits<double>::infinity();
  IndexSet worst;
  GapTerms worst_terms;
  std::uint64_t scanned = 0;
  bool satisfied = false;
};

/// a2 - (1 + C1 sqrt(G)) a3 - C2 sqrt((1 v a1) a2 G) - C3 (1 v a1) G.
double separation_margin(const GapTerms& terms, const SeparationConstants& constants);

/// Minimum separation margin over every size-s competitor T' != T.
SeparationResult separation_check(const GaussianLdaModel& model, const IndexSet& support, Index n,
                                  const SeparationConstants& constants = {},
                                  std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace sdasel
