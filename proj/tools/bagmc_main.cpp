// bagmc: bagged and subbagged multiple-comparisons testing on two-group
// expression matrices, plus a Monte Carlo power/FDR study mode.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bagmc/aggregation.hpp"
#include "bagmc/dataset.hpp"
#include "bagmc/io.hpp"
#include "bagmc/parallel.hpp"
#include "bagmc/resampling.hpp"
#include "bagmc/simulation.hpp"
#include "bagmc/testing.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string mode;
  std::string control_path;
  std::string patient_path;
  std::string scheme = "bagging";
  int n_pseudo = 50;
  double ratio_a = 0.9;
  int d_x = 0;
  int d_y = 0;
  double q = 0.0;
  std::string rule = "i";
  std::uint64_t seed = 0;
  bool welch = false;
  std::string out_dir;
  int n_rows = 1000;
  int n_null = 900;
  int n_x = 10;
  int n_y = 10;
  double delta = 1.0;
  double sigma = 1.0;
  int replicates = 200;
  int threads = 1;
  bool emit_replicates = false;
};

bagmc::AggregationRule parse_rule(const std::string& name) {
  if (name == "i") return bagmc::AggregationRule::rule_i();
  if (name == "ii") return bagmc::AggregationRule::rule_ii();
  if (name == "ii-star") return bagmc::AggregationRule::rule_ii_star();
  throw std::invalid_argument("unknown rule '" + name + "' (use i, ii or ii-star)");
}

bagmc::ResamplingScheme parse_scheme(const RunConfig& cfg, Eigen::Index n_x, Eigen::Index n_y) {
  if (cfg.scheme == "bagging") return bagmc::BaggingScheme{};
  if (cfg.scheme == "subbag-random")
    return bagmc::RandomSubbagScheme{bagmc::SubbagSizes::from_ratio(cfg.ratio_a, n_x, n_y)};
  if (cfg.scheme == "max-contrast") {
    if (cfg.d_x < 1 || cfg.d_y < 1)
      throw std::invalid_argument("max-contrast needs --dx and --dy (no defaults exist)");
    if (cfg.d_x > n_x - 2 || cfg.d_y > n_y - 2)
      throw std::invalid_argument("max-contrast: deleting a block must leave at least 2 columns");
    return bagmc::MaxContrastScheme{cfg.d_x, cfg.d_y};
  }
  throw std::invalid_argument("unknown scheme '" + cfg.scheme +
                              "' (use bagging, subbag-random or max-contrast)");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bagmc::io_error(path.string() + ": cannot open for writing");
  return out;
}

void write_config_echo(const CLI::App& app, const std::filesystem::path& out_dir) {
  std::ofstream out = open_output(out_dir / "config_echo.cfg");
  out << "# resolved configuration; rerun with --config " << (out_dir / "config_echo.cfg").string()
      << " to reproduce byte-identical outputs\n";
  out << app.config_to_str(true, false);
}

int cmd_analyze(const RunConfig& cfg, const CLI::App& app) {
  const bagmc::TwoGroupDatasetXd data = bagmc::load_dataset(cfg.control_path, cfg.patient_path);
  if (data.n_control() < 2 || data.n_patient() < 2)
    throw std::invalid_argument("testing needs at least 2 columns per group");

  const bagmc::ResamplingScheme scheme = parse_scheme(cfg, data.n_control(), data.n_patient());
  const bagmc::TestConfig test_cfg{cfg.q,
                                   cfg.welch ? bagmc::VarianceMode::welch : bagmc::VarianceMode::pooled};
  const bagmc::AggregationRule rule = parse_rule(cfg.rule);

  const bagmc::RejectionList original = bagmc::test_dataset(data, test_cfg, "original");
  const std::vector<bagmc::TwoGroupDatasetXd> pseudo =
      bagmc::generate_pseudo_samples(data, scheme, cfg.n_pseudo, cfg.seed);

  std::vector<bagmc::RejectionList> lists(pseudo.size());
  bagmc::parallel_for(static_cast<int>(pseudo.size()), cfg.threads, [&](int k) {
    lists[k] = bagmc::test_dataset(pseudo[k], test_cfg, "pseudo-" + std::to_string(k + 1));
  });

  const bagmc::VoteTally tally = bagmc::tally_votes(original, lists);
  const bagmc::RejectionList final_list = bagmc::apply_rule(tally, rule);
  const bagmc::RejectionList union_list = bagmc::union_aggregate(original, lists);

  const std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);

  {
    std::ofstream out = open_output(out_dir / "rejections.tsv");
    out << "# per-row votes and final membership under rule " << cfg.rule
        << "; one line per input row\n";
    out << "id\tvotes\tweighted_votes\tin_final_list\n";
    for (int i = 0; i < tally.n_rows(); ++i)
      out << data.row_ids[static_cast<std::size_t>(i)] << '\t' << tally.votes(i) << '\t'
          << tally.weighted_votes(i) << '\t' << (final_list.contains(i) ? 1 : 0) << '\n';
  }

  {
    const auto curve = bagmc::vote_curve(tally, false);
    const auto curve_star = bagmc::vote_curve(tally, true);
    std::ofstream out = open_output(out_dir / "votes_curve.tsv");
    out << "# rows with at least h votes, plain and with the original list double-counted\n";
    out << "h\tN_h\tN_star_h\n";
    for (std::size_t i = 0; i < curve_star.size(); ++i) {
      const int n_h = i < curve.size() ? curve[i].second : 0;
      out << curve_star[i].first << '\t' << n_h << '\t' << curve_star[i].second << '\n';
    }
  }

  {
    // combined-FDR estimate feeds the nominal level q for every list,
    // since true per-list AFDRs are unobservable on real data
    double fdr_big = 0.0;
    if (!union_list.empty()) {
      std::vector<double> fdrs(lists.size() + 1, cfg.q);
      std::vector<int> sizes;
      sizes.push_back(original.size());
      for (const bagmc::RejectionList& list : lists) sizes.push_back(list.size());
      fdr_big = bagmc::fdr_combine_m(fdrs, sizes, union_list.size()).fdr_big;
    }
    std::ofstream out = open_output(out_dir / "summary.tsv");
    out << "# analyze summary; reals in fixed notation with 6 significant digits; fdr_big is the\n";
    out << "# combined-FDR estimate under the nominal level q per list (0 when the union is empty)\n";
    out << "key\tvalue\n";
    out << "n_rows\t" << data.n_rows() << "\n";
    out << "n_control\t" << data.n_control() << "\n";
    out << "n_patient\t" << data.n_patient() << "\n";
    out << "scheme\t" << bagmc::scheme_name(scheme) << "\n";
    out << bagmc::scheme_params_tsv(scheme);
    out << "B\t" << pseudo.size() << "\n";
    out << "q\t" << bagmc::format_real(cfg.q) << "\n";
    out << "variance\t" << bagmc::variance_mode_name(test_cfg.variance_mode) << "\n";
    out << "rule\t" << cfg.rule << "\n";
    out << "seed\t" << cfg.seed << "\n";
    out << "size_original\t" << original.size() << "\n";
    out << "size_union\t" << union_list.size() << "\n";
    out << "size_final\t" << final_list.size() << "\n";
    out << "fdr_big_nominal\t" << bagmc::format_real(fdr_big) << "\n";
  }

  write_config_echo(app, out_dir);
  std::cout << "analyze: " << original.size() << " rows rejected on the original data, "
            << final_list.size() << " under rule " << cfg.rule << " with B=" << pseudo.size()
            << " (" << bagmc::scheme_name(scheme) << ")\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const CLI::App& app) {
  bagmc::SimulationDesign design;
  design.n_rows = cfg.n_rows;
  design.n_null = cfg.n_null;
  design.n_x = cfg.n_x;
  design.n_y = cfg.n_y;
  design.effect_delta = cfg.delta;
  design.sigma = cfg.sigma;
  design.scheme = parse_scheme(cfg, cfg.n_x, cfg.n_y);
  design.n_pseudo = cfg.n_pseudo;
  design.level_q = cfg.q;
  design.variance_mode = cfg.welch ? bagmc::VarianceMode::welch : bagmc::VarianceMode::pooled;
  design.rule = parse_rule(cfg.rule);
  design.replicates = cfg.replicates;
  design.master_seed = cfg.seed;
  design.validate();

  const bagmc::PowerReport report = bagmc::run_power_study(design, cfg.threads);

  const std::filesystem::path out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_dir);
  bagmc::write_power_report_tsv(report, design, (out_dir / "power_report.tsv").string());
  if (cfg.emit_replicates)
    bagmc::write_replicates_tsv(report, (out_dir / "replicates.tsv").string());
  write_config_echo(app, out_dir);

  std::cout << "simulate: " << design.replicates << " replicates, scheme "
            << bagmc::scheme_name(design.scheme) << ", B=" << report.n_pseudo_effective << "\n";
  std::cout << "  mean ADP  plain " << bagmc::format_real(report.mean_adp_plain) << "  aggregated "
            << bagmc::format_real(report.mean_adp_agg)
            << (report.truth_empty ? "  (all-null design: ADP is 0 by convention)" : "") << "\n";
  std::cout << "  mean AFDR plain " << bagmc::format_real(report.mean_afdr_plain)
            << "  aggregated " << bagmc::format_real(report.mean_afdr_agg) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bagged and subbagged multiple-comparisons testing"};
  app.get_formatter()->column_width(30);

  RunConfig cfg;
  app.set_config("--config", "", "key=value config file; command-line flags take precedence");
  app.add_option("--mode", cfg.mode, "analyze | simulate")->required();
  app.add_option("--control", cfg.control_path, "control-group TSV (analyze mode)")
      ->capture_default_str();
  app.add_option("--patient", cfg.patient_path, "patient-group TSV (analyze mode)")
      ->capture_default_str();
  app.add_option("--scheme", cfg.scheme, "bagging | subbag-random | max-contrast")
      ->capture_default_str();
  app.add_option("--B", cfg.n_pseudo, "number of pseudo-samples (derived for max-contrast)")
      ->capture_default_str();
  app.add_option("--ratio-a", cfg.ratio_a, "subsample ratio for subbag-random (b ~ a*n)")
      ->capture_default_str();
  app.add_option("--dx", cfg.d_x, "deleted control-block size for max-contrast")
      ->capture_default_str();
  app.add_option("--dy", cfg.d_y, "deleted patient-block size for max-contrast")
      ->capture_default_str();
  app.add_option("--q", cfg.q, "FDR level of the base test, in (0,1)")->required();
  app.add_option("--rule", cfg.rule, "aggregation rule: i | ii | ii-star")->capture_default_str();
  app.add_option("--seed", cfg.seed, "master seed; every output is a pure function of the config")
      ->capture_default_str();
  app.add_flag("--welch", cfg.welch, "unequal-variance t-statistic (Welch-Satterthwaite df)");
  app.add_option("--out", cfg.out_dir, "output directory")->required();
  app.add_option("--N", cfg.n_rows, "simulate: number of rows")->capture_default_str();
  app.add_option("--n-null", cfg.n_null, "simulate: number of null rows")->capture_default_str();
  app.add_option("--nx", cfg.n_x, "simulate: control group size")->capture_default_str();
  app.add_option("--ny", cfg.n_y, "simulate: patient group size")->capture_default_str();
  app.add_option("--delta", cfg.delta, "simulate: non-null mean shift in units of sigma")
      ->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "simulate: common standard deviation")
      ->capture_default_str();
  app.add_option("--replicates", cfg.replicates, "simulate: Monte Carlo replicates")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads; outputs do not depend on this")
      ->capture_default_str();
  app.add_flag("--emit-replicates", cfg.emit_replicates, "simulate: also write replicates.tsv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cfg.mode == "analyze") {
      if (cfg.control_path.empty() || cfg.patient_path.empty())
        throw std::invalid_argument("analyze mode needs --control and --patient");
      return cmd_analyze(cfg, app);
    }
    if (cfg.mode == "simulate") return cmd_simulate(cfg, app);
    throw std::invalid_argument("unknown mode '" + cfg.mode + "' (use analyze or simulate)");
  } catch (const bagmc::io_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
