#ifndef BAGMC_TESTING_HPP
#define BAGMC_TESTING_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bagmc/dataset.hpp"
#include "bagmc/student_t.hpp"

namespace bagmc {

enum class VarianceMode { pooled, welch };

inline const char* variance_mode_name(VarianceMode mode) {
  return mode == VarianceMode::pooled ? "pooled" : "welch";
}

struct TestConfig {
  double level_q = 0.05;
  VarianceMode variance_mode = VarianceMode::pooled;
};

inline void validate(const TestConfig& cfg) {
  if (!(cfg.level_q > 0.0 && cfg.level_q < 1.0))
    throw std::invalid_argument("test config: level_q must lie in (0, 1)");
}

template <typename Real>
struct RowTestResult {
  Real t_stat;
  Real df;
  Real p_value;
};

/// Two-sample t-statistic for one row, patient minus control in the
/// numerator. Pooled mode uses the common-variance estimate with
/// df = n_x + n_y - 2; Welch mode uses per-group variances with the
/// Welch-Satterthwaite df.
///
/// Degenerate variance (all values constant within each group, possible
/// when a bootstrap draw repeats a column): a zero mean difference gives
/// t = 0, p = 1; a nonzero one gives p = 0 with t = +-infinity.
template <typename DerivedX, typename DerivedY>
RowTestResult<typename DerivedX::Scalar> t_statistic(const Eigen::DenseBase<DerivedX>& row_x,
                                                     const Eigen::DenseBase<DerivedY>& row_y,
                                                     VarianceMode mode = VarianceMode::pooled) {
  using Real = typename DerivedX::Scalar;
  const Eigen::Index nx = row_x.size();
  const Eigen::Index ny = row_y.size();
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("t_statistic: each group needs at least 2 observations");

  const Real mean_x = row_x.mean();
  const Real mean_y = row_y.mean();
  const Real ss_x = (row_x.derived().array() - mean_x).square().sum();
  const Real ss_y = (row_y.derived().array() - mean_y).square().sum();
  const Real diff = mean_y - mean_x;

  Real t, df;
  if (mode == VarianceMode::pooled) {
    df = Real(nx + ny - 2);
    const Real pooled_var = (ss_x + ss_y) / df;
    const Real denom = std::sqrt(pooled_var * (Real(1) / Real(nx) + Real(1) / Real(ny)));
    if (denom == 0) {
      if (diff == 0) return {Real(0), df, Real(1)};
      const Real inf = std::numeric_limits<Real>::infinity();
      return {diff > 0 ? inf : -inf, df, Real(0)};
    }
    t = diff / denom;
  } else {
    const Real gx = ss_x / Real(nx - 1) / Real(nx);
    const Real gy = ss_y / Real(ny - 1) / Real(ny);
    const Real denom = std::sqrt(gx + gy);
    if (denom == 0) {
      df = Real(nx + ny - 2);
      if (diff == 0) return {Real(0), df, Real(1)};
      const Real inf = std::numeric_limits<Real>::infinity();
      return {diff > 0 ? inf : -inf, df, Real(0)};
    }
    t = diff / denom;
    df = (gx + gy) * (gx + gy) / (gx * gx / Real(nx - 1) + gy * gy / Real(ny - 1));
  }
  return {t, df, p_value_two_sided(t, df)};
}

/// Benjamini-Hochberg step-up at level q: with p_(1) <= ... <= p_(N),
/// k* = max{ k : p_(k) <= k*q/N } and the k* smallest p-values are
/// rejected. Ties at the boundary are broken stably by original row
/// index, so exact duplicates (common under bootstrap) resolve
/// deterministically.
template <typename Derived>
RejectionList bh_reject(const Eigen::DenseBase<Derived>& p_values, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("bh_reject: q must lie in (0, 1)");
  using Real = typename Derived::Scalar;
  const Eigen::VectorX<Real> p = p_values.derived();
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i)
    if (!(p(i) >= 0 && p(i) <= 1))
      throw std::invalid_argument("bh_reject: p-value outside [0, 1] at index " + std::to_string(i));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p(a) < p(b); });

  int k_star = 0;
  for (int k = n; k >= 1; --k) {
    if (double(p(order[k - 1])) <= double(k) * q / double(n)) {
      k_star = k;
      break;
    }
  }
  std::vector<int> rows(order.begin(), order.begin() + k_star);
  return RejectionList(std::move(rows), n, q);
}

/// Row-wise t-tests followed by BH step-up across rows.
template <typename Scalar>
RejectionList test_dataset(const TwoGroupDataset<Scalar>& data, const TestConfig& cfg,
                           std::string label = "original") {
  validate(cfg);
  const Eigen::Index n = data.n_rows();
  Eigen::VectorX<Scalar> p(n);
  for (Eigen::Index k = 0; k < n; ++k)
    p(k) = t_statistic(data.control.row(k), data.patient.row(k), cfg.variance_mode).p_value;
  RejectionList list = bh_reject(p, cfg.level_q);
  list.source_label = std::move(label);
  return list;
}

}  // namespace bagmc

#endif  // BAGMC_TESTING_HPP
