#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "onebit/complexity.hpp"
#include "onebit/recovery.hpp"
#include "onebit/tessellation.hpp"

namespace onebit {

enum class ExperimentKind {
  TessellationAudit,
  RecoverySweep,
  QuantizerMeanCheck,
  BernoulliFailureDemo,
  WidthTable
};

enum class SolverKind { HammingLocal, HammingNet, Convex };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);
std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& name);

/// Declarative sweep description, parsed from a key = value config file.
/// Unknown keys are rejected (with the offending key named) so sweep typos
/// cannot pass silently.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::RecoverySweep;
  std::optional<SignalSet> descriptor;

  std::vector<RowLaw> laws{RowLaw::Gaussian};
  double ensemble_df = 3;
  double ensemble_alpha = 1;
  std::vector<int> m_values{100};
  double lambda = 0;  // 0 selects 2*(R + sigma) + rho

  NoiseModel::Law noise_law = NoiseModel::Law::None;
  std::vector<double> sigma_values{0};
  double noise_df = 3;
  double noise_mu = 0;

  std::vector<double> beta_values{0};
  CorruptionStrategy corruption = CorruptionStrategy::AdversarialLargestMargin;

  SolverKind solver = SolverKind::HammingLocal;
  int restarts = 8;
  int iters = 50;
  double net_radius = 0.1;
  int probe_count = 10000;

  double rho = 0.2;
  std::vector<double> theta_list{0.05, 0.1, 0.2};
  int trials = 1;
  int pairs = 100;
  double pair_min_distance = 0;

  std::uint64_t master_seed = 0;
  std::string output = "results.csv";
  bool dump_patterns = false;

  std::vector<std::pair<int, int>> width_grid;  // (s, n) pairs
  int mc_samples = 100000;
  std::vector<double> z_values{-2, -1, -0.5, 0, 0.5, 1, 2};

  std::map<std::string, std::string> raw;  // parsed keys, echoed in the manifest

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_string(const std::string& text);
  void validate() const;

  double effective_lambda(double sigma) const;
};

/// One Monte Carlo row. Timing is recorded per trial but written to the
/// manifest, not the CSV, so re-runs produce byte-identical CSV files.
struct TrialResult {
  std::string law;
  int m = 0;
  double beta = 0;
  double sigma = 0;
  std::string solver;
  int trial = 0;
  double error = 0;
  double hamming_objective = 0;
  double seconds = 0;
  std::uint64_t seed = 0;
};

struct RunOutput {
  std::string csv_path;
  std::string manifest_path;
  std::vector<TrialResult> rows;  // RecoverySweep only; other kinds leave it empty
};

/// Runs the experiment, writing one CSV (plus a JSON manifest carrying the
/// config echo, library version, master seed, timestamps, and per-trial
/// timings). Trials run on a worker pool; the output order is deterministic.
RunOutput run_experiment(const ExperimentConfig& config);

struct SummaryRow {
  std::vector<std::string> key;
  int count = 0;
  double median = 0;
  double q25 = 0;
  double q75 = 0;
  double success_rate = 0;
};

struct SummaryTable {
  std::vector<std::string> group_keys;
  double rho = 0;
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

/// Per-cell aggregates of a trials CSV. Rejects files whose schema line is
/// missing or unknown. Success rate is the fraction of trials with
/// error <= rho.
SummaryTable summarize(const std::string& csv_path, std::vector<std::string> group_by,
                       double rho);

void write_summary_csv(const SummaryTable& table, std::ostream& out);
SummaryTable read_summary_csv(const std::string& path);

struct PlotOutput {
  std::string script_path;
  std::vector<std::string> data_paths;
};

/// Writes gnuplot-compatible script + data files for the summary; kinds are
/// "error-vs-m" and "success-vs-m". No rendering happens here.
PlotOutput emit_plots(const SummaryTable& table, const std::string& kind,
                      const std::string& out_prefix);

/// Applies the ONEBIT_OUT_DIR override to relative output paths.
std::string resolve_output_path(const std::string& path);

}  // namespace onebit
