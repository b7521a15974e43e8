// Experiment CLI: run config-driven Monte Carlo experiments, summarize trial
// CSVs, emit plot scripts, and evaluate width / sample-size calculators.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onebit/harness.hpp"
#include "onebit/version.hpp"

namespace {

using namespace onebit;

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

int fail(const std::string& message) {
  std::cerr << "{\"error\":\"" << json_escape(message) << "\"}\n";
  return 2;
}

int cmd_run(const std::string& config_path) {
  const auto config = ExperimentConfig::parse_file(config_path);
  const auto out = run_experiment(config);
  std::cout << "wrote " << out.csv_path << "\n";
  std::cout << "wrote " << out.manifest_path << "\n";
  return 0;
}

int cmd_summarize(const std::string& csv, const std::vector<std::string>& group_by, double rho,
                  const std::string& output) {
  const auto table = summarize(csv, group_by, rho);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  if (output.empty()) {
    write_summary_csv(table, std::cout);
  } else {
    const std::string path = resolve_output_path(output);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary: " + path);
    write_summary_csv(table, out);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& summary_path, const std::string& kind,
             const std::string& prefix) {
  const auto table = read_summary_csv(summary_path);
  const auto out = emit_plots(table, kind, prefix);
  std::cout << "wrote " << out.script_path << "\n";
  for (const auto& d : out.data_paths) std::cout << "wrote " << d << "\n";
  return 0;
}

int cmd_width_table(const std::string& kind, const std::string& grid, double radius, int samples,
                    std::uint64_t seed, const std::string& output) {
  if (kind != "sparse-ball" && kind != "l1l2-ball")
    throw std::invalid_argument("unknown descriptor kind: " + kind);
  std::ostringstream cfg;
  cfg << "experiment = width-table\n";
  cfg << "width.grid = " << grid << "\n";
  cfg << "mc.samples = " << samples << "\n";
  cfg << "seed = " << seed << "\n";
  cfg << "descriptor.kind = " << kind << "\n";
  cfg << "descriptor.s = 1\ndescriptor.n = 2\n";  // grid entries supply s, n
  cfg << "descriptor.radius = " << radius << "\n";
  auto config = ExperimentConfig::parse_string(cfg.str());
  config.output = output;
  const auto out = run_experiment(config);
  std::ifstream in(out.csv_path);
  std::cout << in.rdbuf();
  return 0;
}

int cmd_sufficient_m(const std::string& theorem, double R, double rho, double lambda,
                     double sigma, double beta, const std::string& descriptor_kind, double s,
                     int n, double radius, std::optional<double> width_sq,
                     std::optional<double> width, std::optional<double> empirical_width,
                     std::optional<double> log_covering, int samples) {
  SufficientMParams params;
  params.R = R;
  params.rho = rho;
  params.lambda = lambda;
  params.sigma = sigma;
  params.beta = beta;
  params.width_mc = samples;
  if (!descriptor_kind.empty()) {
    if (descriptor_kind == "sparse-ball") {
      params.descriptor = SignalSet::sparse_ball(static_cast<int>(s), n, radius);
    } else if (descriptor_kind == "l1l2-ball") {
      params.descriptor = SignalSet::l1l2_ball(s, n, radius);
    } else {
      throw std::invalid_argument("unknown descriptor kind: " + descriptor_kind);
    }
  }
  if (width_sq) params.width_sq_T = *width_sq;
  if (width) {
    params.width_T_r = *width;
    params.width_U_rho = *width;
  }
  if (empirical_width) params.empirical_width_value = *empirical_width;
  if (log_covering) params.log_covering = *log_covering;
  const auto out = sufficient_m(theorem_from_string(theorem), params);
  std::printf("theorem=%s m=%lld r_internal=%.12g lambda=%.12g\n", theorem.c_str(), out.m,
              out.r_internal, out.lambda_used);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dithered one-bit measurement and recovery experiments"};
  app.set_version_flag("--version", ONEBIT_VERSION_STRING);
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "key = value config file")->required();

  std::string csv_path, summary_output;
  std::vector<std::string> group_by;
  double rho = 0.2;
  auto* sum = app.add_subcommand("summarize", "aggregate a trials CSV per cell");
  sum->add_option("csv", csv_path, "trials CSV from `run`")->required();
  sum->add_option("--group-by", group_by, "subset of law,m,beta,sigma,solver")->delimiter(',');
  sum->add_option("--rho", rho, "success threshold on the recovery error");
  sum->add_option("--output", summary_output, "write the summary CSV here instead of stdout");

  std::string summary_path, plot_kind = "error-vs-m", plot_prefix = "plot";
  auto* plot = app.add_subcommand("plot", "emit gnuplot script + data for a summary");
  plot->add_option("summary", summary_path, "summary CSV from `summarize --output`")->required();
  plot->add_option("--kind", plot_kind, "error-vs-m | success-vs-m");
  plot->add_option("--out", plot_prefix, "output path prefix");

  std::string width_kind = "sparse-ball", width_grid;
  std::string width_output = "width_table.csv";
  double width_radius = 1.0;
  int width_samples = 20000;
  std::uint64_t width_seed = 0;
  auto* wt = app.add_subcommand("width-table", "Monte Carlo mean-width table");
  wt->add_option("--kind", width_kind, "sparse-ball | l1l2-ball");
  wt->add_option("--grid", width_grid, "sxn list, e.g. 1x16,2x64,4x256")->required();
  wt->add_option("--radius", width_radius, "set radius R");
  wt->add_option("--samples", width_samples, "Monte Carlo draws per entry");
  wt->add_option("--seed", width_seed, "master seed");
  wt->add_option("--output", width_output, "CSV output path");

  std::string theorem, sm_kind;
  double sm_R = 1, sm_rho = 0.2, sm_lambda = 0, sm_sigma = 0, sm_beta = 0, sm_s = 1,
         sm_radius = 1;
  int sm_n = 16, sm_samples = 2000;
  std::optional<double> sm_width_sq, sm_width, sm_empirical, sm_logN;
  auto* sm = app.add_subcommand("sufficient-m", "evaluate a sufficient-sample-size bound");
  sm->add_option("theorem", theorem,
                 "tess-subgaussian | tess-heavy | recover-subgaussian | recover-heavy | convex")
      ->required();
  sm->add_option("--R", sm_R, "signal set radius");
  sm->add_option("--rho", sm_rho, "target accuracy");
  sm->add_option("--lambda", sm_lambda, "dither amplitude (0 = per-theorem default)");
  sm->add_option("--sigma", sm_sigma, "noise scale");
  sm->add_option("--beta", sm_beta, "corrupted fraction");
  sm->add_option("--descriptor", sm_kind, "sparse-ball | l1l2-ball (for estimated terms)");
  sm->add_option("--s", sm_s, "descriptor sparsity");
  sm->add_option("--n", sm_n, "descriptor dimension");
  sm->add_option("--radius", sm_radius, "descriptor radius");
  sm->add_option("--width-sq", sm_width_sq, "override: squared gaussian width of T");
  sm->add_option("--width", sm_width, "override: width of the intersected set");
  sm->add_option("--empirical-width", sm_empirical, "override: empirical width term");
  sm->add_option("--log-covering", sm_logN, "override: log covering number");
  sm->add_option("--samples", sm_samples, "Monte Carlo draws for estimated terms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*sum) return cmd_summarize(csv_path, group_by, rho, summary_output);
    if (*plot) return cmd_plot(summary_path, plot_kind, plot_prefix);
    if (*wt)
      return cmd_width_table(width_kind, width_grid, width_radius, width_samples, width_seed,
                             width_output);
    if (*sm)
      return cmd_sufficient_m(theorem, sm_R, sm_rho, sm_lambda, sm_sigma, sm_beta, sm_kind, sm_s,
                              sm_n, sm_radius, sm_width_sq, sm_width, sm_empirical, sm_logN,
                              sm_samples);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return fail("no subcommand");
}
