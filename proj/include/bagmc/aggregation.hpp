#ifndef BAGMC_AGGREGATION_HPP
#define BAGMC_AGGREGATION_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bagmc/dataset.hpp"

namespace bagmc {

/// Voting rules for combining the original rejection list with the
/// pseudo-sample lists. Rule (i) keeps every row with at least one vote
/// (the plain union), rule (ii) requires a seconded vote, and rule (ii*)
/// requires two votes after the original list's vote is doubled, so the
/// original list is always retained.
struct AggregationRule {
  enum class Kind { union_rule_i, second_vote_rule_ii, weighted_rule_ii_star };

  Kind kind = Kind::union_rule_i;
  int threshold_h = 1;

  static AggregationRule rule_i() { return {Kind::union_rule_i, 1}; }
  static AggregationRule rule_ii() { return {Kind::second_vote_rule_ii, 2}; }
  static AggregationRule rule_ii_star() { return {Kind::weighted_rule_ii_star, 2}; }
};

inline const char* rule_name(const AggregationRule& rule) {
  switch (rule.kind) {
    case AggregationRule::Kind::union_rule_i: return "i";
    case AggregationRule::Kind::second_vote_rule_ii: return "ii";
    default: return "ii-star";
  }
}

namespace detail {

inline void require_same_universe(const RejectionList& original,
                                  const std::vector<RejectionList>& pseudo, const char* where) {
  for (const RejectionList& list : pseudo)
    if (list.n_rows != original.n_rows)
      throw std::invalid_argument(std::string(where) + ": lists index different universes");
}

}  // namespace detail

/// Union aggregation: LIST.AGG = LIST u LIST_1 u ... u LIST_B.
inline RejectionList union_aggregate(const RejectionList& original,
                                     const std::vector<RejectionList>& pseudo) {
  detail::require_same_universe(original, pseudo, "union_aggregate");
  std::vector<int> rows = original.rows;
  for (const RejectionList& list : pseudo) rows.insert(rows.end(), list.rows.begin(), list.rows.end());
  return RejectionList(std::move(rows), original.n_rows, original.level_q, "aggregate");
}

/// Vote counts: V(i) is the number of lists containing row i among the
/// original and the pseudo lists; V*(i) adds one more when the original
/// contains i (its double vote).
inline VoteTally tally_votes(const RejectionList& original,
                             const std::vector<RejectionList>& pseudo) {
  detail::require_same_universe(original, pseudo, "tally_votes");
  VoteTally tally;
  tally.votes = Eigen::VectorXi::Zero(original.n_rows);
  tally.n_voters = static_cast<int>(pseudo.size()) + 1;
  tally.level_q = original.level_q;
  for (int r : original.rows) tally.votes(r) += 1;
  for (const RejectionList& list : pseudo)
    for (int r : list.rows) tally.votes(r) += 1;
  tally.weighted_votes = tally.votes;
  for (int r : original.rows) tally.weighted_votes(r) += 1;
  return tally;
}

/// Applies a voting rule: rows with V(i) >= h (or V*(i) >= h for rule
/// (ii*)). The named presets use h = 1, 2, 2; other thresholds are
/// accepted for diagnostics.
inline RejectionList apply_rule(const VoteTally& tally, const AggregationRule& rule) {
  if (rule.threshold_h < 1) throw std::invalid_argument("apply_rule: threshold must be at least 1");
  const bool starred = rule.kind == AggregationRule::Kind::weighted_rule_ii_star;
  const Eigen::VectorXi& counts = starred ? tally.weighted_votes : tally.votes;
  std::vector<int> rows;
  for (int i = 0; i < tally.n_rows(); ++i)
    if (counts(i) >= rule.threshold_h) rows.push_back(i);
  std::string label = std::string("rule-") + rule_name(rule);
  return RejectionList(std::move(rows), tally.n_rows(), tally.level_q, std::move(label));
}

/// N(h) (or N*(h) when starred): the number of rows with at least h
/// votes, for h = 1..n_voters (+1 when starred, since V* can reach
/// n_voters + 1). Nonincreasing in h by construction.
inline std::vector<std::pair<int, int>> vote_curve(const VoteTally& tally, bool starred) {
  const Eigen::VectorXi& counts = starred ? tally.weighted_votes : tally.votes;
  const int h_max = tally.n_voters + (starred ? 1 : 0);
  std::vector<std::pair<int, int>> curve;
  curve.reserve(h_max);
  for (int h = 1; h <= h_max; ++h) {
    int n = 0;
    for (int i = 0; i < tally.n_rows(); ++i)
      if (counts(i) >= h) ++n;
    curve.emplace_back(h, n);
  }
  return curve;
}

/// FDR of the union of two lists under the assumption that rows found by
/// both lists are truly non-null:
///   (fdr1*size1 + fdr2*size2) / (size1 + size2 - overlap).
inline double fdr_combine_two(double fdr1, int size1, double fdr2, int size2, int overlap) {
  if (!(fdr1 >= 0.0 && fdr1 <= 1.0) || !(fdr2 >= 0.0 && fdr2 <= 1.0))
    throw std::invalid_argument("fdr_combine_two: FDR values must lie in [0, 1]");
  if (size1 < 0 || size2 < 0 || overlap < 0)
    throw std::invalid_argument("fdr_combine_two: sizes must be nonnegative");
  if (overlap > std::min(size1, size2))
    throw std::invalid_argument("fdr_combine_two: overlap exceeds a list size");
  const int union_size = size1 + size2 - overlap;
  if (union_size <= 0) throw std::invalid_argument("fdr_combine_two: combined list is empty");
  return (fdr1 * double(size1) + fdr2 * double(size2)) / double(union_size);
}

/// Combined-FDR report for M lists: fdr_big = sum(fdr_i * size_i) /
/// big_size. Valid under the same multiply-discovered-rows assumption;
/// the inputs may be nominal control levels or directly counted AFDRs.
struct FdrCombinationReport {
  std::vector<double> per_list_fdr;
  std::vector<int> per_list_size;
  int big_list_size = 0;
  double fdr_big = 0.0;
};

inline FdrCombinationReport fdr_combine_m(const std::vector<double>& fdrs,
                                          const std::vector<int>& sizes, int big_size) {
  if (fdrs.empty() || fdrs.size() != sizes.size())
    throw std::invalid_argument("fdr_combine_m: need equal, nonzero numbers of FDRs and sizes");
  if (big_size <= 0) throw std::invalid_argument("fdr_combine_m: combined list is empty");
  long long total = 0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < fdrs.size(); ++i) {
    if (!(fdrs[i] >= 0.0 && fdrs[i] <= 1.0))
      throw std::invalid_argument("fdr_combine_m: FDR values must lie in [0, 1]");
    if (sizes[i] < 0) throw std::invalid_argument("fdr_combine_m: sizes must be nonnegative");
    total += sizes[i];
    weighted += fdrs[i] * double(sizes[i]);
  }
  if (big_size > total)
    throw std::invalid_argument("fdr_combine_m: union larger than the sum of list sizes");
  FdrCombinationReport report;
  report.per_list_fdr = fdrs;
  report.per_list_size = sizes;
  report.big_list_size = big_size;
  report.fdr_big = weighted / double(big_size);
  return report;
}

/// Union cardinality by inclusion-exclusion over all nonempty
/// subfamilies (alternating sign by subfamily size). Cost is 2^M
/// intersections, so M is capped at 20; the direct union is the cheap
/// route, this one exists to cross-check the combination arithmetic.
inline int union_size_ie(const std::vector<RejectionList>& lists) {
  if (lists.empty()) throw std::invalid_argument("union_size_ie: need at least one list");
  const int m = static_cast<int>(lists.size());
  if (m > 20) throw std::invalid_argument("union_size_ie: more than 20 lists (2^M intersections)");
  for (const RejectionList& list : lists)
    if (list.n_rows != lists.front().n_rows)
      throw std::invalid_argument("union_size_ie: lists index different universes");

  long long total = 0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> inter;
    bool first = true;
    for (int i = 0; i < m && (first || !inter.empty()); ++i) {
      if (!(mask & (1u << i))) continue;
      if (first) {
        inter = lists[i].rows;
        first = false;
      } else {
        std::vector<int> next;
        std::set_intersection(inter.begin(), inter.end(), lists[i].rows.begin(),
                              lists[i].rows.end(), std::back_inserter(next));
        inter = std::move(next);
      }
    }
    const int bits = std::popcount(mask);
    total += (bits % 2 == 1) ? static_cast<long long>(inter.size())
                             : -static_cast<long long>(inter.size());
  }
  return static_cast<int>(total);
}

}  // namespace bagmc

#endif  // BAGMC_AGGREGATION_HPP
