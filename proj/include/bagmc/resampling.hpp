#ifndef BAGMC_RESAMPLING_HPP
#define BAGMC_RESAMPLING_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bagmc/dataset.hpp"
#include "bagmc/rng.hpp"

namespace bagmc {

/// Subsample sizes for subbagging, one per group.
struct SubbagSizes {
  int b_x = 0;
  int b_y = 0;
  double ratio_a = 1.0;

  /// Rule-of-thumb sizes b ~= a*n with a close to (but at most) one:
  /// round half up, then clamp to [2, n] so downstream t-tests keep
  /// df >= 1.
  static SubbagSizes from_ratio(double a, Eigen::Index n_x, Eigen::Index n_y) {
    if (!(a > 0.0 && a <= 1.0))
      throw std::invalid_argument("subbag sizes: ratio must lie in (0, 1]");
    if (n_x < 2 || n_y < 2)
      throw std::invalid_argument("subbag sizes: each group needs at least 2 columns");
    auto round_clamp = [a](Eigen::Index n) {
      const int b = static_cast<int>(std::floor(a * double(n) + 0.5));
      return std::min(static_cast<int>(n), std::max(2, b));
    };
    return {round_clamp(n_x), round_clamp(n_y), a};
  }
};

/// Delete-d block plan for maximum-contrast subbagging. Each group's
/// index set is divided into consecutive segments of size d (the last may
/// be smaller); one pseudo-sample deletes one block from each group.
struct ContrastPlan {
  std::vector<std::vector<int>> blocks_x;
  std::vector<std::vector<int>> blocks_y;
  int d_x = 0;
  int d_y = 0;

  int m_x() const { return static_cast<int>(blocks_x.size()); }
  int m_y() const { return static_cast<int>(blocks_y.size()); }
  int n_samples() const { return m_x() * m_y(); }
};

namespace detail {

inline std::vector<std::vector<int>> consecutive_blocks(Eigen::Index n, int d) {
  std::vector<std::vector<int>> blocks;
  for (int start = 0; start < n; start += d) {
    const int stop = std::min<int>(start + d, static_cast<int>(n));
    std::vector<int> block(stop - start);
    std::iota(block.begin(), block.end(), start);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

/// Uniformly random b-subset of {0..n-1} via partial Fisher-Yates,
/// returned in increasing order.
inline std::vector<int> sample_without_replacement(int n, int b, Rng& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < b; ++i) std::swap(pool[i], pool[i + rng.uniform_index(n - i)]);
  pool.resize(b);
  std::sort(pool.begin(), pool.end());
  return pool;
}

template <typename Scalar>
Matrix<Scalar> select_columns(const Matrix<Scalar>& m, const std::vector<int>& idx) {
  Matrix<Scalar> out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
  return out;
}

// balance invariant: every pseudo-sample carries exactly the prescribed
// column count per group
template <typename Scalar>
void check_balance(const TwoGroupDataset<Scalar>& sample, Eigen::Index want_x, Eigen::Index want_y) {
  if (sample.n_control() != want_x || sample.n_patient() != want_y)
    throw std::logic_error("resampling: pseudo-sample is not balanced");
}

}  // namespace detail

/// Balanced bagging: each group's columns are redrawn i.i.d. uniformly
/// with replacement from that group only, keeping the original column
/// counts. Control indices are drawn before patient indices.
template <typename Scalar>
TwoGroupDataset<Scalar> balanced_bagging_sample(const TwoGroupDataset<Scalar>& data, Rng& rng) {
  const int nx = static_cast<int>(data.n_control());
  const int ny = static_cast<int>(data.n_patient());
  std::vector<int> ix(nx), iy(ny);
  for (int j = 0; j < nx; ++j) ix[j] = rng.uniform_index(nx);
  for (int j = 0; j < ny; ++j) iy[j] = rng.uniform_index(ny);
  TwoGroupDataset<Scalar> out(data.row_ids, detail::select_columns(data.control, ix),
                              detail::select_columns(data.patient, iy));
  detail::check_balance(out, nx, ny);
  return out;
}

/// Balanced subbagging, random version: a uniformly random b_x-subset of
/// control columns and an independent b_y-subset of patient columns,
/// retained in original column order.
template <typename Scalar>
TwoGroupDataset<Scalar> random_subbagging_sample(const TwoGroupDataset<Scalar>& data,
                                                 const SubbagSizes& sizes, Rng& rng) {
  const int nx = static_cast<int>(data.n_control());
  const int ny = static_cast<int>(data.n_patient());
  if (sizes.b_x < 1 || sizes.b_x > nx || sizes.b_y < 1 || sizes.b_y > ny)
    throw std::invalid_argument("random subbagging: subsample size out of range");
  const std::vector<int> ix = detail::sample_without_replacement(nx, sizes.b_x, rng);
  const std::vector<int> iy = detail::sample_without_replacement(ny, sizes.b_y, rng);
  TwoGroupDataset<Scalar> out(data.row_ids, detail::select_columns(data.control, ix),
                              detail::select_columns(data.patient, iy));
  detail::check_balance(out, sizes.b_x, sizes.b_y);
  return out;
}

/// Block plan for maximum-contrast subbagging: consecutive index segments
/// {0..d-1}, {d..2d-1}, ... with m = ceil(n/d) blocks per group.
inline ContrastPlan max_contrast_plan(Eigen::Index n_x, Eigen::Index n_y, int d_x, int d_y) {
  if (d_x < 1 || d_y < 1) throw std::invalid_argument("max contrast: block size must be at least 1");
  if (d_x >= n_x || d_y >= n_y)
    throw std::invalid_argument("max contrast: block size must be smaller than the group size");
  ContrastPlan plan;
  plan.d_x = d_x;
  plan.d_y = d_y;
  plan.blocks_x = detail::consecutive_blocks(n_x, d_x);
  plan.blocks_y = detail::consecutive_blocks(n_y, d_y);
  return plan;
}

/// Maximum-contrast pseudo-sample (k1, k2): control columns outside block
/// k1, patient columns outside block k2, original order preserved.
template <typename Scalar>
TwoGroupDataset<Scalar> max_contrast_sample(const TwoGroupDataset<Scalar>& data,
                                            const ContrastPlan& plan, int k1, int k2) {
  if (k1 < 0 || k1 >= plan.m_x() || k2 < 0 || k2 >= plan.m_y())
    throw std::invalid_argument("max contrast: block index out of range");
  auto retained = [](Eigen::Index n, const std::vector<int>& deleted) {
    std::vector<int> keep;
    keep.reserve(n - deleted.size());
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i) {
      if (pos < deleted.size() && deleted[pos] == i)
        ++pos;
      else
        keep.push_back(i);
    }
    return keep;
  };
  const std::vector<int> ix = retained(data.n_control(), plan.blocks_x[k1]);
  const std::vector<int> iy = retained(data.n_patient(), plan.blocks_y[k2]);
  if (ix.empty() || iy.empty())
    throw std::invalid_argument("max contrast: plan does not match the dataset dimensions");
  TwoGroupDataset<Scalar> out(data.row_ids, detail::select_columns(data.control, ix),
                              detail::select_columns(data.patient, iy));
  detail::check_balance(out, static_cast<Eigen::Index>(ix.size()), static_cast<Eigen::Index>(iy.size()));
  return out;
}

struct BaggingScheme {};

struct RandomSubbagScheme {
  SubbagSizes sizes;
};

struct MaxContrastScheme {
  int d_x = 1;
  int d_y = 1;
};

using ResamplingScheme = std::variant<BaggingScheme, RandomSubbagScheme, MaxContrastScheme>;

inline const char* scheme_name(const ResamplingScheme& scheme) {
  if (std::holds_alternative<BaggingScheme>(scheme)) return "bagging";
  if (std::holds_alternative<RandomSubbagScheme>(scheme)) return "subbag-random";
  return "max-contrast";
}

/// Number of pseudo-samples a scheme produces: `n_requested` for the
/// random schemes, m_x*m_y for maximum contrast (which ignores it).
inline int effective_pseudo_count(Eigen::Index n_x, Eigen::Index n_y,
                                  const ResamplingScheme& scheme, int n_requested) {
  if (const auto* mc = std::get_if<MaxContrastScheme>(&scheme))
    return max_contrast_plan(n_x, n_y, mc->d_x, mc->d_y).n_samples();
  if (n_requested < 0) throw std::invalid_argument("pseudo-sample count must be nonnegative");
  return n_requested;
}

/// Generates the pseudo-sample sequence for a scheme. The k-th sample of
/// a random scheme is drawn from an Rng seeded with derive_seed(
/// master_seed, k), so the output is a pure function of the arguments and
/// can be regenerated per-index in parallel. Maximum contrast enumerates
/// block pairs row-major in (k1, k2) and ignores both B and the seed.
template <typename Scalar>
std::vector<TwoGroupDataset<Scalar>> generate_pseudo_samples(const TwoGroupDataset<Scalar>& data,
                                                             const ResamplingScheme& scheme,
                                                             int n_samples,
                                                             std::uint64_t master_seed) {
  std::vector<TwoGroupDataset<Scalar>> out;
  if (const auto* mc = std::get_if<MaxContrastScheme>(&scheme)) {
    const ContrastPlan plan = max_contrast_plan(data.n_control(), data.n_patient(), mc->d_x, mc->d_y);
    out.reserve(plan.n_samples());
    for (int k1 = 0; k1 < plan.m_x(); ++k1)
      for (int k2 = 0; k2 < plan.m_y(); ++k2) out.push_back(max_contrast_sample(data, plan, k1, k2));
    return out;
  }
  if (n_samples < 0) throw std::invalid_argument("pseudo-sample count must be nonnegative");
  out.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(k)));
    if (const auto* sb = std::get_if<RandomSubbagScheme>(&scheme))
      out.push_back(random_subbagging_sample(data, sb->sizes, rng));
    else
      out.push_back(balanced_bagging_sample(data, rng));
  }
  return out;
}

}  // namespace bagmc

#endif  // BAGMC_RESAMPLING_HPP
