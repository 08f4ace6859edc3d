#include "sdasel/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "sdasel/errors.hpp"
#include "sdasel/linalg.hpp"
#include "sdasel/subsets.hpp"

namespace sdasel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_cap(Index p, Index s, std::uint64_t cap) {
  const double count = binomial(p, s);
  if (count > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "enumeration of C(" << p << ", " << s << ") = " << count << " subsets exceeds the cap " << cap;
    throw EnumerationCapExceeded(count, cap, msg.str());
  }
}

// a beats b: higher score, then lexicographically smaller subset.
bool beats(double score_a, const IndexSet& a, double score_b, const IndexSet& b) {
  if (score_a != score_b) return score_a > score_b;
  return a < b;
}

// Top-two tracking; runner_up carries the second-best score.
struct Partial {
  DecoderResult best;
  double second = kNegInf;
};

}  // namespace

double mahalanobis_score(const Vector& m, const Matrix& a, const IndexSet& subset) {
  if (subset.empty()) return 0.0;
  try {
    const Vector m_t = subvector(m, subset);
    return m_t.dot(Cholesky(submatrix(a, subset, subset)).solve(m_t));
  } catch (const SingularMatrix&) {
    return kNegInf;
  }
}

DecoderResult merge_results(const DecoderResult& a, const DecoderResult& b) {
  if (a.scanned == 0) return b;
  if (b.scanned == 0) return a;
  const bool a_wins = beats(a.score, a.t_hat, b.score, b.t_hat);
  const DecoderResult& win = a_wins ? a : b;
  const DecoderResult& lose = a_wins ? b : a;
  // Second best overall is the better of the loser's best and the winner's second.
  const double win_second = win.score - win.runner_up_gap;
  const double second = std::max(lose.score, win_second);
  DecoderResult out = win;
  out.scanned = a.scanned + b.scanned;
  out.singular_subsets = a.singular_subsets + b.singular_subsets;
  out.runner_up_gap = win.score - second;
  if (std::isnan(out.runner_up_gap)) out.runner_up_gap = 0.0;
  return out;
}

DecoderResult decode_rank_range(const Vector& mean_difference, const Matrix& covariance, Index s,
                                std::uint64_t first, std::uint64_t count) {
  const Index p = mean_difference.size();
  DecoderResult out;
  if (count == 0) return out;
  IndexSet subset = unrank_combination(first, p, s);
  double second = kNegInf;
  for (std::uint64_t k = 0; k < count; ++k) {
    const double score = mahalanobis_score(mean_difference, covariance, subset);
    if (score == kNegInf) ++out.singular_subsets;
    if (out.scanned == 0 || beats(score, subset, out.score, out.t_hat)) {
      if (out.scanned > 0) second = std::max(second, out.score);
      out.score = score;
      out.t_hat = subset;
    } else {
      second = std::max(second, score);
    }
    ++out.scanned;
    if (k + 1 < count && !next_combination(subset, p)) {
      throw InvalidArgument("decode_rank_range: range runs past the last subset");
    }
  }
  out.runner_up_gap = out.scanned > 1 ? out.score - second : std::numeric_limits<double>::infinity();
  if (std::isnan(out.runner_up_gap)) out.runner_up_gap = 0.0;
  return out;
}

DecoderResult exhaustive_decode(const Vector& mean_difference, const Matrix& covariance, Index s,
                                const DecoderOptions& options) {
  const Index p = mean_difference.size();
  if (covariance.rows() != p || covariance.cols() != p) throw InvalidArgument("decode: dimension mismatch");
  if (s < 1 || s > p) throw InvalidArgument("decode: need 1 <= s <= p");
  check_cap(p, s, options.enumeration_cap);

  const std::uint64_t total = binomial_saturating(p, s);
  const std::uint64_t workers = std::clamp<std::uint64_t>(options.workers, 1, total);
  if (workers == 1) return decode_rank_range(mean_difference, covariance, s, 0, total);

  std::vector<DecoderResult> parts(workers);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = total / workers;
  const std::uint64_t extra = total % workers;
  std::uint64_t first = 0;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t count = chunk + (w < extra ? 1 : 0);
    threads.emplace_back([&, w, first, count] {
      parts[w] = decode_rank_range(mean_difference, covariance, s, first, count);
    });
    first += count;
  }
  for (auto& t : threads) t.join();
  DecoderResult out;
  for (const auto& part : parts) out = merge_results(out, part);
  return out;
}

DecoderResult exhaustive_decode(const Dataset& data, Index s, const DecoderOptions& options) {
  if (s > data.n() - 2) {
    std::ostringstream msg;
    msg << "decode: s = " << s << " exceeds n - 2 = " << data.n() - 2;
    throw InvalidArgument(msg.str());
  }
  return exhaustive_decode(data.mean_difference(), data.pooled(), s, options);
}

double gamma_npsk(Index n, Index p, Index s, Index k) {
  if (n < 2 || s < 1 || k < 0 || k > s || p < s) throw InvalidArgument("gamma_npsk: invalid arguments");
  const double log_count = log_binomial(p - s, s - k) + log_binomial(s, k);
  return (log_count + std::log(static_cast<double>(s) * std::log(static_cast<double>(n)))) /
         static_cast<double>(n);
}

namespace {

// m_{B|A}' Sigma_{BB|A}^{-1} m_{B|A}.
double conditional_quadratic(const Vector& mu, const Matrix& sigma, const IndexSet& cond, const IndexSet& block) {
  if (block.empty()) return 0.0;
  Vector m_b = subvector(mu, block);
  Matrix s_bb = submatrix(sigma, block, block);
  if (!cond.empty()) {
    const Cholesky factor(submatrix(sigma, cond, cond));
    const Matrix s_ab = submatrix(sigma, cond, block);
    m_b -= s_ab.transpose() * factor.solve(subvector(mu, cond));
    s_bb -= s_ab.transpose() * factor.solve(s_ab);
  }
  return std::max(0.0, m_b.dot(solve_spd(s_bb, m_b)));
}

}  // namespace

GapTerms gap_terms(const GaussianLdaModel& model, const IndexSet& support, const IndexSet& competitor, Index n) {
  const Index p = model.dim();
  if (!is_valid_index_set(support, p) || !is_valid_index_set(competitor, p)) {
    throw InvalidArgument("gap_terms: supports must be sorted index sets inside [0, p)");
  }
  if (support.size() != competitor.size() || support.empty()) {
    throw InvalidArgument("gap_terms: |T'| must equal |T| >= 1");
  }
  const IndexSet a1 = set_intersection(support, competitor);
  const IndexSet a2 = set_difference(support, competitor);
  const IndexSet a3 = set_difference(competitor, support);
  const Vector& mu = model.mean_difference();
  const Matrix& sigma = model.sigma();

  GapTerms out;
  out.k = static_cast<Index>(a1.size());
  out.a1 = a1.empty() ? 0.0 : std::max(0.0, subvector(mu, a1).dot(solve_spd(submatrix(sigma, a1, a1), subvector(mu, a1))));
  out.a2 = conditional_quadratic(mu, sigma, a1, a2);
  out.a3 = conditional_quadratic(mu, sigma, a1, a3);
  out.gamma = gamma_npsk(n, p, static_cast<Index>(support.size()), out.k);
  return out;
}

double separation_margin(const GapTerms& t, const SeparationConstants& c) {
  const double lead = std::max(1.0, t.a1);
  return t.a2 - (1.0 + c.c1 * std::sqrt(t.gamma)) * t.a3 - c.c2 * std::sqrt(lead * t.a2 * t.gamma) -
         c.c3 * lead * t.gamma;
}

SeparationResult separation_check(const GaussianLdaModel& model, const IndexSet& support, Index n,
                                  const SeparationConstants& constants, std::uint64_t enumeration_cap) {
  const Index p = model.dim();
  const auto s = static_cast<Index>(support.size());
  if (s < 1) throw InvalidArgument("separation_check: support must be nonempty");
  if (!is_valid_index_set(support, p)) throw InvalidArgument("separation_check: invalid support");
  check_cap(p, s, enumeration_cap);

  SeparationResult out;
  IndexSet competitor(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) competitor[static_cast<std::size_t>(i)] = i;
  do {
    if (competitor == support) continue;
    const GapTerms terms = gap_terms(model, support, competitor, n);
    const double margin = separation_margin(terms, constants);
    ++out.scanned;
    if (margin < out.margin) {
      out.margin = margin;
      out.worst = competitor;
      out.worst_terms = terms;
    }
  } while (next_combination(competitor, p));
  out.satisfied = out.margin > 0.0;
  return out;
}

}  // namespace sdasel
