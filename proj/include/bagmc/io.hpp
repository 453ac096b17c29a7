#ifndef BAGMC_IO_HPP
#define BAGMC_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bagmc/dataset.hpp"
#include "bagmc/simulation.hpp"

namespace bagmc {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed notation with 6 significant digits, the format used for every
/// real written to an output table. Integers wider than 6 digits print in
/// full.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0.000000";
  const int exp10 = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::clamp(5 - exp10, 0, 40);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Shortest decimal that round-trips to the same double (used when
/// writing matrices, so saved datasets reload bit-exactly).
inline std::string format_full(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw io_error("failed to format a real value");
  return std::string(buf, ptr);
}

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

struct TsvMatrix {
  std::vector<std::string> row_ids;
  Matrix<double> values;
};

/// Reads one matrix file: a header line ("id" then column labels), then
/// one row per line with a row id and tab-separated finite decimal reals.
inline TsvMatrix read_matrix_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) throw io_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_tabs(line);
  if (header.empty() || header[0] != "id")
    throw io_error(path + ": header must start with 'id'");
  const std::size_t n_cols = header.size() - 1;
  if (n_cols == 0) throw io_error(path + ": no data columns");

  std::vector<std::string> ids;
  std::vector<double> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != n_cols + 1)
      throw io_error(path + ": ragged row at line " + std::to_string(line_no) + " (expected " +
                     std::to_string(n_cols + 1) + " fields, got " + std::to_string(fields.size()) +
                     ")");
    ids.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string& cell = fields[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw io_error(path + ": non-numeric cell at (row " + fields[0] + ", col " +
                       std::to_string(c) + ")");
      cells.push_back(v);
    }
  }
  if (ids.empty()) throw io_error(path + ": no data rows");

  {
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw io_error(path + ": duplicate row id '" + *dup + "'");
  }

  TsvMatrix out;
  out.values.resize(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(n_cols));
  for (std::size_t r = 0; r < ids.size(); ++r)
    for (std::size_t c = 0; c < n_cols; ++c)
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cells[r * n_cols + c];
  out.row_ids = std::move(ids);
  return out;
}

inline void write_matrix_tsv(const std::string& path, const std::vector<std::string>& row_ids,
                             const Matrix<double>& values, const std::string& col_prefix) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << "id";
  for (Eigen::Index c = 0; c < values.cols(); ++c) out << '\t' << col_prefix << (c + 1);
  out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    out << row_ids[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < values.cols(); ++c) out << '\t' << format_full(values(r, c));
    out << '\n';
  }
  if (!out) throw io_error(path + ": write failed");
}

}  // namespace detail

/// Loads a two-group dataset from a control and a patient TSV. The two
/// files must list identical row ids in identical order; any difference
/// is an error rather than an implicit join, since silent reordering
/// would corrupt the row-wise tests invisibly.
inline TwoGroupDatasetXd load_dataset(const std::string& control_path,
                                      const std::string& patient_path) {
  detail::TsvMatrix control = detail::read_matrix_tsv(control_path);
  detail::TsvMatrix patient = detail::read_matrix_tsv(patient_path);
  if (control.row_ids.size() != patient.row_ids.size())
    throw io_error("row id mismatch: " + control_path + " has " +
                   std::to_string(control.row_ids.size()) + " rows, " + patient_path + " has " +
                   std::to_string(patient.row_ids.size()));
  for (std::size_t r = 0; r < control.row_ids.size(); ++r)
    if (control.row_ids[r] != patient.row_ids[r])
      throw io_error("row id mismatch at data row " + std::to_string(r + 1) + ": '" +
                     control.row_ids[r] + "' vs '" + patient.row_ids[r] + "'");
  return TwoGroupDatasetXd(std::move(control.row_ids), std::move(control.values),
                           std::move(patient.values));
}

inline void save_dataset(const TwoGroupDatasetXd& data, const std::string& control_path,
                         const std::string& patient_path) {
  detail::write_matrix_tsv(control_path, data.row_ids, data.control, "x");
  detail::write_matrix_tsv(patient_path, data.row_ids, data.patient, "y");
}

/// Scheme parameters as key\tvalue lines (empty for plain bagging).
inline std::string scheme_params_tsv(const ResamplingScheme& scheme) {
  std::string out;
  if (const auto* sb = std::get_if<RandomSubbagScheme>(&scheme)) {
    out += "ratio_a\t" + format_real(sb->sizes.ratio_a) + "\n";
    out += "b_x\t" + std::to_string(sb->sizes.b_x) + "\n";
    out += "b_y\t" + std::to_string(sb->sizes.b_y) + "\n";
  } else if (const auto* mc = std::get_if<MaxContrastScheme>(&scheme)) {
    out += "d_x\t" + std::to_string(mc->d_x) + "\n";
    out += "d_y\t" + std::to_string(mc->d_y) + "\n";
  }
  return out;
}

/// Key-value summary of a power study. adp fields are 0 by convention
/// when truth_empty is true.
inline void write_power_report_tsv(const PowerReport& report, const SimulationDesign& design,
                                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << "# power report; reals in fixed notation with 6 significant digits\n";
  out << "key\tvalue\n";
  out << "n_rows\t" << design.n_rows << "\n";
  out << "n_null\t" << design.n_null << "\n";
  out << "n_x\t" << design.n_x << "\n";
  out << "n_y\t" << design.n_y << "\n";
  out << "effect_delta\t" << format_real(design.effect_delta) << "\n";
  out << "sigma\t" << format_real(design.sigma) << "\n";
  out << "scheme\t" << scheme_name(design.scheme) << "\n";
  out << scheme_params_tsv(design.scheme);
  out << "B\t" << report.n_pseudo_effective << "\n";
  out << "q\t" << format_real(design.level_q) << "\n";
  out << "variance\t" << variance_mode_name(design.variance_mode) << "\n";
  out << "rule\t" << rule_name(design.rule) << "\n";
  out << "threshold_h\t" << design.rule.threshold_h << "\n";
  out << "replicates\t" << design.replicates << "\n";
  out << "seed\t" << design.master_seed << "\n";
  out << "truth_empty\t" << (report.truth_empty ? "true" : "false") << "\n";
  out << "mean_adp_plain\t" << format_real(report.mean_adp_plain) << "\n";
  out << "mean_adp_agg\t" << format_real(report.mean_adp_agg) << "\n";
  out << "mean_afdr_plain\t" << format_real(report.mean_afdr_plain) << "\n";
  out << "mean_afdr_agg\t" << format_real(report.mean_afdr_agg) << "\n";
  out << "mean_size_plain\t" << format_real(report.list_size_stats.mean_plain) << "\n";
  out << "mean_size_agg\t" << format_real(report.list_size_stats.mean_agg) << "\n";
  out << "min_size_plain\t" << report.list_size_stats.min_plain << "\n";
  out << "max_size_plain\t" << report.list_size_stats.max_plain << "\n";
  out << "min_size_agg\t" << report.list_size_stats.min_agg << "\n";
  out << "max_size_agg\t" << report.list_size_stats.max_agg << "\n";
  if (!out) throw io_error(path + ": write failed");
}

inline void write_replicates_tsv(const PowerReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << "# per-replicate outcomes; reals in fixed notation with 6 significant digits\n";
  out << "replicate\tadp_plain\tadp_agg\tafdr_plain\tafdr_agg\tsize_plain\tsize_agg\n";
  for (std::size_t r = 0; r < report.per_replicate.size(); ++r) {
    const ReplicateOutcome& o = report.per_replicate[r];
    out << (r + 1) << '\t' << format_real(o.adp_plain) << '\t' << format_real(o.adp_agg) << '\t'
        << format_real(o.afdr_plain) << '\t' << format_real(o.afdr_agg) << '\t' << o.size_plain
        << '\t' << o.size_agg << '\n';
  }
  if (!out) throw io_error(path + ": write failed");
}

}  // namespace bagmc

#endif  // BAGMC_IO_HPP
