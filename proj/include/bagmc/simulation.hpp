#ifndef BAGMC_SIMULATION_HPP
#define BAGMC_SIMULATION_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bagmc/aggregation.hpp"
#include "bagmc/dataset.hpp"
#include "bagmc/parallel.hpp"
#include "bagmc/resampling.hpp"
#include "bagmc/rng.hpp"
#include "bagmc/testing.hpp"

namespace bagmc {

/// Monte Carlo design: N rows of which n_null conform to H0, normal data
/// with common variance sigma^2, non-null rows shifted by
/// effect_delta*sigma in the patient group (or per-row shifts via
/// `effects`, length n_rows - n_null).
struct SimulationDesign {
  int n_rows = 0;
  int n_null = 0;
  int n_x = 0;
  int n_y = 0;
  double effect_delta = 1.0;
  std::vector<double> effects;
  double sigma = 1.0;
  ResamplingScheme scheme = BaggingScheme{};
  int n_pseudo = 0;  // B; ignored by max contrast, which derives it
  double level_q = 0.05;
  VarianceMode variance_mode = VarianceMode::pooled;
  AggregationRule rule = AggregationRule::rule_i();
  int replicates = 1;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (n_rows < 1) throw std::invalid_argument("simulation design: need at least one row");
    if (n_null < 0 || n_null > n_rows)
      throw std::invalid_argument("simulation design: n_null must lie in [0, n_rows]");
    if (n_x < 2 || n_y < 2)
      throw std::invalid_argument("simulation design: each group needs at least 2 subjects");
    if (!(sigma > 0.0)) throw std::invalid_argument("simulation design: sigma must be positive");
    if (!(level_q > 0.0 && level_q < 1.0))
      throw std::invalid_argument("simulation design: q must lie in (0, 1)");
    if (replicates < 1) throw std::invalid_argument("simulation design: need at least one replicate");
    if (n_pseudo < 0) throw std::invalid_argument("simulation design: B must be nonnegative");
    if (!effects.empty() && static_cast<int>(effects.size()) != n_rows - n_null)
      throw std::invalid_argument("simulation design: effects must have one entry per non-null row");
  }
};

/// Draws one dataset under the design's normal model and returns it with
/// the list of truly non-null rows. Rows 0..(n_rows - n_null - 1) are
/// non-null (control mean 0, patient mean effect*sigma); the rest are
/// null. The control matrix is filled row-major, then the patient matrix.
inline std::pair<TwoGroupDatasetXd, RejectionList> generate_dataset(const SimulationDesign& design,
                                                                    Rng& rng) {
  design.validate();
  const int n = design.n_rows;
  const int n_signal = n - design.n_null;

  std::vector<std::string> ids(n);
  for (int k = 0; k < n; ++k) ids[k] = "g" + std::to_string(k + 1);

  Matrix<double> control(n, design.n_x);
  Matrix<double> patient(n, design.n_y);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < design.n_x; ++j) control(k, j) = design.sigma * rng.normal();
  for (int k = 0; k < n; ++k) {
    const double shift_units = (k >= n_signal) ? 0.0
                               : (design.effects.empty() ? design.effect_delta : design.effects[k]);
    const double nu = shift_units * design.sigma;
    for (int j = 0; j < design.n_y; ++j) patient(k, j) = nu + design.sigma * rng.normal();
  }

  std::vector<int> truth_rows(n_signal);
  for (int k = 0; k < n_signal; ++k) truth_rows[k] = k;
  RejectionList truth(std::move(truth_rows), n, 1.0, "truth");
  return {TwoGroupDatasetXd(std::move(ids), std::move(control), std::move(patient)), std::move(truth)};
}

/// Achieved discovery power #{list ∩ truth}/#{truth}; 0 by convention
/// when the truth is empty (all-null designs).
inline double adp(const RejectionList& list, const RejectionList& truth) {
  if (truth.empty()) return 0.0;
  return double(truelist_overlap(list, truth).hits) / double(truth.size());
}

/// Achieved false discovery rate #{list \ truth}/#{list}; 0 for an empty
/// list.
inline double afdr(const RejectionList& list, const RejectionList& truth) {
  if (list.empty()) return 0.0;
  return double(truelist_overlap(list, truth).misses) / double(list.size());
}

struct ReplicateOutcome {
  double adp_plain = 0.0;
  double adp_agg = 0.0;
  double afdr_plain = 0.0;
  double afdr_agg = 0.0;
  int size_plain = 0;
  int size_agg = 0;
};

struct ListSizeStats {
  double mean_plain = 0.0;
  double mean_agg = 0.0;
  int min_plain = 0;
  int max_plain = 0;
  int min_agg = 0;
  int max_agg = 0;
};

struct PowerReport {
  double mean_adp_plain = 0.0;
  double mean_adp_agg = 0.0;
  double mean_afdr_plain = 0.0;
  double mean_afdr_agg = 0.0;
  std::vector<ReplicateOutcome> per_replicate;
  ListSizeStats list_size_stats;
  bool truth_empty = false;  // adp fields are 0 by convention
  int n_pseudo_effective = 0;
};

/// One full replicate: draw data and truth, test plainly, resample B
/// pseudo-samples, test each, tally, and apply the aggregation rule.
///
/// Seeding: rep_seed = derive_seed(master_seed, r); the dataset uses
/// derive_seed(rep_seed, 0) and resampling uses derive_seed(rep_seed, 1),
/// so replicates are independent streams and may run in any order.
inline ReplicateOutcome run_replicate(const SimulationDesign& design, int replicate_index) {
  const std::uint64_t rep_seed = derive_seed(design.master_seed,
                                             static_cast<std::uint64_t>(replicate_index));
  Rng data_rng(derive_seed(rep_seed, 0));
  auto [data, truth] = generate_dataset(design, data_rng);

  const TestConfig cfg{design.level_q, design.variance_mode};
  const RejectionList plain = test_dataset(data, cfg, "original");

  const std::vector<TwoGroupDatasetXd> pseudo =
      generate_pseudo_samples(data, design.scheme, design.n_pseudo, derive_seed(rep_seed, 1));
  std::vector<RejectionList> lists;
  lists.reserve(pseudo.size());
  for (std::size_t k = 0; k < pseudo.size(); ++k)
    lists.push_back(test_dataset(pseudo[k], cfg, "pseudo-" + std::to_string(k + 1)));

  const VoteTally tally = tally_votes(plain, lists);
  const RejectionList agg = apply_rule(tally, design.rule);

  ReplicateOutcome out;
  out.adp_plain = adp(plain, truth);
  out.adp_agg = adp(agg, truth);
  out.afdr_plain = afdr(plain, truth);
  out.afdr_agg = afdr(agg, truth);
  out.size_plain = plain.size();
  out.size_agg = agg.size();
  return out;
}

/// Monte Carlo power study. Replicates are independent and may run on
/// n_threads workers; outcomes land in per-replicate slots and are
/// averaged in index order, so the report is identical for every thread
/// count.
inline PowerReport run_power_study(const SimulationDesign& design, int n_threads = 1) {
  design.validate();
  const int reps = design.replicates;

  PowerReport report;
  report.per_replicate.resize(reps);
  parallel_for(reps, n_threads,
               [&](int r) { report.per_replicate[r] = run_replicate(design, r); });

  ListSizeStats sizes;
  sizes.min_plain = sizes.min_agg = std::numeric_limits<int>::max();
  sizes.max_plain = sizes.max_agg = 0;
  for (const ReplicateOutcome& o : report.per_replicate) {
    report.mean_adp_plain += o.adp_plain;
    report.mean_adp_agg += o.adp_agg;
    report.mean_afdr_plain += o.afdr_plain;
    report.mean_afdr_agg += o.afdr_agg;
    sizes.mean_plain += o.size_plain;
    sizes.mean_agg += o.size_agg;
    sizes.min_plain = std::min(sizes.min_plain, o.size_plain);
    sizes.max_plain = std::max(sizes.max_plain, o.size_plain);
    sizes.min_agg = std::min(sizes.min_agg, o.size_agg);
    sizes.max_agg = std::max(sizes.max_agg, o.size_agg);
  }
  report.mean_adp_plain /= reps;
  report.mean_adp_agg /= reps;
  report.mean_afdr_plain /= reps;
  report.mean_afdr_agg /= reps;
  sizes.mean_plain /= reps;
  sizes.mean_agg /= reps;
  report.list_size_stats = sizes;
  report.truth_empty = design.n_null == design.n_rows;

  report.n_pseudo_effective =
      effective_pseudo_count(design.n_x, design.n_y, design.scheme, design.n_pseudo);
  return report;
}

}  // namespace bagmc

#endif  // BAGMC_SIMULATION_HPP
