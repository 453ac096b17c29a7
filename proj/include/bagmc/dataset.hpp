#ifndef BAGMC_DATASET_HPP
#define BAGMC_DATASET_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bagmc {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Two-group expression data: one row per gene, one column per subject.
/// `control` is N x n_control, `patient` is N x n_patient, and `row_ids`
/// identifies the shared rows. Instances are treated as immutable once
/// built and are safe to share across threads.
///
/// Storage admits single-column groups (resampling degenerates need them);
/// the testing routines require at least two columns per group.
template <typename Scalar>
struct TwoGroupDataset {
  std::vector<std::string> row_ids;
  Matrix<Scalar> control;
  Matrix<Scalar> patient;

  TwoGroupDataset() = default;

  TwoGroupDataset(std::vector<std::string> ids, Matrix<Scalar> control_mat, Matrix<Scalar> patient_mat)
      : row_ids(std::move(ids)), control(std::move(control_mat)), patient(std::move(patient_mat)) {
    if (control.rows() < 1) throw std::invalid_argument("dataset: need at least one row");
    if (control.rows() != patient.rows())
      throw std::invalid_argument("dataset: control and patient must have the same number of rows");
    if (static_cast<Eigen::Index>(row_ids.size()) != control.rows())
      throw std::invalid_argument("dataset: row_ids length must match the row count");
    if (control.cols() < 1 || patient.cols() < 1)
      throw std::invalid_argument("dataset: each group needs at least one column");
    std::vector<std::string> sorted = row_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("dataset: duplicate row id");
  }

  Eigen::Index n_rows() const { return control.rows(); }
  Eigen::Index n_control() const { return control.cols(); }
  Eigen::Index n_patient() const { return patient.cols(); }
};

using TwoGroupDatasetXd = TwoGroupDataset<double>;

/// Set of row indices declared non-null at test level `level_q`.
/// `rows` is sorted ascending with no duplicates; `n_rows` is the size of
/// the index universe the rows live in.
struct RejectionList {
  std::vector<int> rows;
  int n_rows = 0;
  double level_q = 1.0;
  std::string source_label;

  RejectionList() = default;

  RejectionList(std::vector<int> row_set, int n, double q, std::string label = std::string())
      : rows(std::move(row_set)), n_rows(n), level_q(q), source_label(std::move(label)) {
    if (n_rows < 0) throw std::invalid_argument("rejection list: negative row count");
    if (!(level_q > 0.0 && level_q <= 1.0))
      throw std::invalid_argument("rejection list: level_q must lie in (0, 1]");
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (!rows.empty() && (rows.front() < 0 || rows.back() >= n_rows))
      throw std::invalid_argument("rejection list: row index out of range");
  }

  bool contains(int i) const { return std::binary_search(rows.begin(), rows.end(), i); }
  int size() const { return static_cast<int>(rows.size()); }
  bool empty() const { return rows.empty(); }
};

/// Per-row vote counts over the original list plus B pseudo-sample lists.
/// votes(i) counts the lists containing row i; weighted_votes(i) adds one
/// more when the original list contains i (the original's double vote).
/// `level_q` carries the base-test level into rule outputs.
struct VoteTally {
  Eigen::VectorXi votes;
  Eigen::VectorXi weighted_votes;
  int n_voters = 0;
  double level_q = 1.0;

  int n_rows() const { return static_cast<int>(votes.size()); }
};

struct OverlapCount {
  int hits = 0;
  int misses = 0;
};

/// hits = #{list ∩ truth}, misses = #{list} - hits.
inline OverlapCount truelist_overlap(const RejectionList& list, const RejectionList& truth) {
  if (list.n_rows != truth.n_rows)
    throw std::invalid_argument("truelist_overlap: lists index different universes");
  int hits = 0;
  auto it = truth.rows.begin();
  for (int r : list.rows) {
    it = std::lower_bound(it, truth.rows.end(), r);
    if (it != truth.rows.end() && *it == r) ++hits;
  }
  return {hits, list.size() - hits};
}

}  // namespace bagmc

#endif  // BAGMC_DATASET_HPP
