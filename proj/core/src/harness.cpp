#include "onebit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <cctype>

#include <json.hpp>

#include "onebit/version.hpp"

namespace onebit {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

unsigned worker_count(std::size_t tasks) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("ONEBIT_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) workers = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
}

/// Runs fn(0..tasks) on a pool; results must be written to preallocated
/// slots so completion order cannot influence the output.
void run_parallel(std::size_t tasks, const std::function<void(std::size_t)>& fn) {
  if (tasks == 0) return;
  const unsigned workers = worker_count(tasks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

MeasurementEnsemble make_ensemble(RowLaw law, int m, int n, double lambda, double df,
                                  double alpha) {
  switch (law) {
    case RowLaw::Gaussian: return MeasurementEnsemble::gaussian(m, n, lambda);
    case RowLaw::Rademacher: return MeasurementEnsemble::rademacher(m, n, lambda);
    case RowLaw::StudentT: return MeasurementEnsemble::student_t(m, n, lambda, df);
    case RowLaw::CoordHeavy: return MeasurementEnsemble::coord_heavy(m, n, lambda, alpha);
  }
  throw std::logic_error("make_ensemble: unreachable");
}

NoiseModel make_noise(NoiseModel::Law law, double sigma, double df, double mu) {
  switch (law) {
    case NoiseModel::Law::None: return NoiseModel::none();
    case NoiseModel::Law::Gaussian: return NoiseModel::gaussian(sigma);
    case NoiseModel::Law::StudentT: return NoiseModel::student_t(sigma, df);
    case NoiseModel::Law::ConstantBias: return NoiseModel::constant_bias(mu);
  }
  throw std::logic_error("make_noise: unreachable");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::TessellationAudit: return "tessellation-audit";
    case ExperimentKind::RecoverySweep: return "recovery-sweep";
    case ExperimentKind::QuantizerMeanCheck: return "quantizer-mean-check";
    case ExperimentKind::BernoulliFailureDemo: return "bernoulli-failure-demo";
    case ExperimentKind::WidthTable: return "width-table";
  }
  return "?";
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "tessellation-audit") return ExperimentKind::TessellationAudit;
  if (name == "recovery-sweep") return ExperimentKind::RecoverySweep;
  if (name == "quantizer-mean-check") return ExperimentKind::QuantizerMeanCheck;
  if (name == "bernoulli-failure-demo") return ExperimentKind::BernoulliFailureDemo;
  if (name == "width-table") return ExperimentKind::WidthTable;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::HammingLocal: return "hamming-local";
    case SolverKind::HammingNet: return "hamming-net";
    case SolverKind::Convex: return "convex";
  }
  return "?";
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "hamming-local") return SolverKind::HammingLocal;
  if (name == "hamming-net") return SolverKind::HammingNet;
  if (name == "convex") return SolverKind::Convex;
  throw std::invalid_argument("unknown solver kind: " + name);
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  std::string descriptor_kind;
  double descriptor_s = 0;
  int descriptor_n = 0;
  double descriptor_radius = 1.0;
  bool has_descriptor = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("invalid config at line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (cfg.raw.count(key))
      throw std::invalid_argument("invalid config: duplicate key '" + key + "'");
    cfg.raw[key] = value;

    try {
      if (key == "experiment") {
        cfg.kind = experiment_from_string(value);
      } else if (key == "seed") {
        cfg.master_seed = static_cast<std::uint64_t>(std::stoull(value));
      } else if (key == "output") {
        cfg.output = value;
      } else if (key == "trials") {
        cfg.trials = static_cast<int>(parse_int(value));
      } else if (key == "rho") {
        cfg.rho = parse_double(value);
      } else if (key == "theta_list") {
        cfg.theta_list.clear();
        for (const auto& v : split_list(value)) cfg.theta_list.push_back(parse_double(v));
      } else if (key == "pairs") {
        cfg.pairs = static_cast<int>(parse_int(value));
      } else if (key == "pairs.min_distance") {
        cfg.pair_min_distance = parse_double(value);
      } else if (key == "dump_patterns") {
        cfg.dump_patterns = parse_bool(value);
      } else if (key == "descriptor.kind") {
        descriptor_kind = value;
        has_descriptor = true;
      } else if (key == "descriptor.s") {
        descriptor_s = parse_double(value);
        has_descriptor = true;
      } else if (key == "descriptor.n") {
        descriptor_n = static_cast<int>(parse_int(value));
        has_descriptor = true;
      } else if (key == "descriptor.radius") {
        descriptor_radius = parse_double(value);
        has_descriptor = true;
      } else if (key == "ensemble.laws") {
        cfg.laws.clear();
        for (const auto& v : split_list(value)) cfg.laws.push_back(row_law_from_string(v));
      } else if (key == "ensemble.df") {
        cfg.ensemble_df = parse_double(value);
      } else if (key == "ensemble.alpha") {
        cfg.ensemble_alpha = parse_double(value);
      } else if (key == "ensemble.m") {
        cfg.m_values.clear();
        for (const auto& v : split_list(value)) cfg.m_values.push_back(static_cast<int>(parse_int(v)));
      } else if (key == "ensemble.lambda") {
        cfg.lambda = parse_double(value);
      } else if (key == "noise.law") {
        cfg.noise_law = noise_law_from_string(value);
      } else if (key == "noise.sigma") {
        cfg.sigma_values.clear();
        for (const auto& v : split_list(value)) cfg.sigma_values.push_back(parse_double(v));
      } else if (key == "noise.df") {
        cfg.noise_df = parse_double(value);
      } else if (key == "noise.mu") {
        cfg.noise_mu = parse_double(value);
      } else if (key == "corruption.beta") {
        cfg.beta_values.clear();
        for (const auto& v : split_list(value)) cfg.beta_values.push_back(parse_double(v));
      } else if (key == "corruption.strategy") {
        cfg.corruption = corruption_strategy_from_string(value);
      } else if (key == "solver.kind") {
        cfg.solver = solver_from_string(value);
      } else if (key == "solver.restarts") {
        cfg.restarts = static_cast<int>(parse_int(value));
      } else if (key == "solver.iters") {
        cfg.iters = static_cast<int>(parse_int(value));
      } else if (key == "solver.net_radius") {
        cfg.net_radius = parse_double(value);
      } else if (key == "solver.probe_count") {
        cfg.probe_count = static_cast<int>(parse_int(value));
      } else if (key == "width.grid") {
        cfg.width_grid.clear();
        for (const auto& v : split_list(value)) {
          const auto x = v.find('x');
          if (x == std::string::npos)
            throw std::invalid_argument("expected sxn entries like 2x64");
          cfg.width_grid.emplace_back(static_cast<int>(parse_int(trim(v.substr(0, x)))),
                                      static_cast<int>(parse_int(trim(v.substr(x + 1)))));
        }
      } else if (key == "mc.samples") {
        cfg.mc_samples = static_cast<int>(parse_int(value));
      } else if (key == "quantizer.z_values") {
        cfg.z_values.clear();
        for (const auto& v : split_list(value)) cfg.z_values.push_back(parse_double(v));
      } else {
        throw std::invalid_argument("invalid config: unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      const std::string what = e.what();
      if (what.rfind("invalid config", 0) == 0 || what.rfind("unknown ", 0) == 0) throw;
      throw std::invalid_argument("invalid config value for '" + key + "': " + what);
    }
  }

  if (has_descriptor) {
    if (descriptor_kind.empty() || descriptor_n == 0)
      throw std::invalid_argument("invalid config: descriptor needs descriptor.kind and descriptor.n");
    if (descriptor_kind == "sparse-ball") {
      cfg.descriptor = SignalSet::sparse_ball(static_cast<int>(descriptor_s), descriptor_n,
                                              descriptor_radius);
    } else if (descriptor_kind == "l1l2-ball") {
      cfg.descriptor = SignalSet::l1l2_ball(descriptor_s, descriptor_n, descriptor_radius);
    } else {
      throw std::invalid_argument("invalid config: unknown descriptor.kind '" + descriptor_kind +
                                  "'");
    }
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (laws.empty() || m_values.empty() || beta_values.empty() || sigma_values.empty())
    throw std::invalid_argument("config: grids must be nonempty");
  if (!(rho > 0)) throw std::invalid_argument("config: rho must be positive");
  for (int m : m_values)
    if (m < 1) throw std::invalid_argument("config: ensemble.m entries must be >= 1");
  for (double b : beta_values)
    if (b < 0 || b > 1) throw std::invalid_argument("config: corruption.beta must be in [0,1]");
  for (double s : sigma_values)
    if (s < 0) throw std::invalid_argument("config: noise.sigma must be >= 0");
  if (descriptor) descriptor->validate();

  switch (kind) {
    case ExperimentKind::RecoverySweep:
      if (!descriptor) throw std::invalid_argument("config: recovery-sweep needs a descriptor");
      if (solver == SolverKind::HammingLocal &&
          descriptor->kind != SignalSetKind::SparseBall)
        throw std::invalid_argument("config: hamming-local requires a sparse-ball descriptor");
      break;
    case ExperimentKind::TessellationAudit:
      if (!descriptor) throw std::invalid_argument("config: tessellation-audit needs a descriptor");
      if (laws.size() != 1 || m_values.size() != 1)
        throw std::invalid_argument("config: tessellation-audit uses a single law and m");
      if (pairs < 1) throw std::invalid_argument("config: pairs must be >= 1");
      break;
    case ExperimentKind::QuantizerMeanCheck:
      if (z_values.empty()) throw std::invalid_argument("config: quantizer.z_values is empty");
      if (mc_samples < 1) throw std::invalid_argument("config: mc.samples must be >= 1");
      break;
    case ExperimentKind::BernoulliFailureDemo:
      break;
    case ExperimentKind::WidthTable:
      if (width_grid.empty()) throw std::invalid_argument("config: width.grid is empty");
      if (mc_samples < 2) throw std::invalid_argument("config: mc.samples must be >= 2");
      break;
  }
}

double ExperimentConfig::effective_lambda(double sigma) const {
  if (lambda > 0) return lambda;
  const double R = descriptor ? descriptor->radius : 1.0;
  return default_dither_amplitude(R, sigma, rho);
}

std::string resolve_output_path(const std::string& path) {
  if (const char* dir = std::getenv("ONEBIT_OUT_DIR")) {
    const std::filesystem::path p(path);
    if (p.is_relative() && dir[0] != '\0') return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

namespace {

void write_trials_csv(std::ostream& out, const std::vector<TrialResult>& rows) {
  out << "# onebit-trials-v1\n";
  out << "law,m,beta,sigma,solver,trial,error,hamming_objective,seed\n";
  for (const auto& r : rows) {
    out << r.law << ',' << r.m << ',' << fmt_double(r.beta) << ',' << fmt_double(r.sigma) << ','
        << r.solver << ',' << r.trial << ',' << fmt_double(r.error) << ','
        << fmt_double(r.hamming_objective) << ',' << r.seed << "\n";
  }
}

void write_manifest(const std::string& path, const ExperimentConfig& config,
                    double total_seconds, const std::vector<TrialResult>& rows,
                    const std::string& csv_path) {
  nlohmann::json j;
  j["schema"] = "onebit-manifest-v1";
  j["library_version"] = ONEBIT_VERSION_STRING;
  j["experiment"] = to_string(config.kind);
  j["master_seed"] = config.master_seed;
  j["created_utc"] = utc_timestamp();
  j["total_seconds"] = total_seconds;
  j["csv"] = csv_path;
  j["config"] = config.raw;
  // Wall-clock data lives only here so the CSV stays byte-reproducible.
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& r : rows) timings.push_back(r.seconds);
  j["trial_seconds"] = std::move(timings);
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

struct SweepCell {
  RowLaw law;
  int m;
  double beta;
  double sigma;
};

RunOutput run_recovery_sweep(const ExperimentConfig& config, const std::string& csv_path) {
  const SignalSet& descriptor = *config.descriptor;
  std::vector<SweepCell> cells;
  for (RowLaw law : config.laws)
    for (int m : config.m_values)
      for (double beta : config.beta_values)
        for (double sigma : config.sigma_values) cells.push_back({law, m, beta, sigma});

  const std::size_t tasks = cells.size() * static_cast<std::size_t>(config.trials);
  std::vector<TrialResult> rows(tasks);
  std::vector<SignPattern> patterns(config.dump_patterns ? tasks : 0);

  // The net depends only on (descriptor, radius, probes, seed); build it once
  // up front so worker scheduling cannot affect it.
  std::optional<Net> net;
  if (config.solver == SolverKind::HammingNet)
    net = build_net(descriptor, config.net_radius, config.probe_count,
                    SeedPlan{config.master_seed});

  const SeedPlan plan{config.master_seed};
  run_parallel(tasks, [&](std::size_t tidx) {
    const SweepCell& cell = cells[tidx / config.trials];
    const int trial = static_cast<int>(tidx % config.trials);
    const auto gtid = static_cast<std::uint64_t>(tidx);
    const auto t0 = std::chrono::steady_clock::now();

    const double lambda = config.effective_lambda(cell.sigma);
    const MeasurementEnsemble ensemble = make_ensemble(
        cell.law, cell.m, descriptor.dim, lambda, config.ensemble_df, config.ensemble_alpha);
    const NoiseModel noise_model =
        make_noise(config.noise_law, cell.sigma, config.noise_df, config.noise_mu);

    const Vector x = sample_signal(descriptor, plan, gtid);
    const Matrix A = sample_matrix(ensemble, plan, gtid);
    const Vector dither = sample_dither(cell.m, lambda, plan, gtid);
    const Vector noise = sample_noise(noise_model, cell.m, plan, gtid);
    const QuantizedObservation clean = one_bit_measure(A, x, dither, noise);
    const QuantizedObservation corrupted =
        corrupt_bits(clean, cell.beta, config.corruption, plan, gtid);

    RecoveryResult result;
    switch (config.solver) {
      case SolverKind::HammingLocal:
        result = hamming_recover_local(A, dither, corrupted.q, descriptor, config.restarts,
                                       config.iters, plan, gtid);
        break;
      case SolverKind::HammingNet:
        result = hamming_recover_net(A, dither, corrupted.q, *net);
        break;
      case SolverKind::Convex:
        result = convex_recover(A, corrupted.q, lambda, descriptor, 0);
        break;
    }

    TrialResult row;
    row.law = to_string(cell.law);
    row.m = cell.m;
    row.beta = cell.beta;
    row.sigma = cell.sigma;
    row.solver = to_string(config.solver);
    row.trial = trial;
    row.error = (result.x_hat - x).norm();
    row.hamming_objective =
        static_cast<double>(hamming_objective(A, dither, corrupted.q, result.x_hat));
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.seed = plan.child_seed(gtid, 0);
    rows[tidx] = std::move(row);
    if (config.dump_patterns) patterns[tidx] = corrupted.q;
  });

  ensure_parent_dir(csv_path);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write results: " + csv_path);
  write_trials_csv(out, rows);
  out.close();

  if (config.dump_patterns) {
    std::ofstream dump(csv_path + ".patterns.bin", std::ios::binary);
    if (!dump) throw std::runtime_error("cannot write pattern dump");
    for (const auto& q : patterns) write_sign_pattern(dump, q);
  }

  RunOutput output;
  output.csv_path = csv_path;
  output.rows = std::move(rows);
  return output;
}

RunOutput run_tessellation_audit(const ExperimentConfig& config, const std::string& csv_path) {
  const SignalSet& descriptor = *config.descriptor;
  const double lambda = config.effective_lambda(0);
  const int m = config.m_values.front();
  const MeasurementEnsemble ensemble = make_ensemble(
      config.laws.front(), m, descriptor.dim, lambda, config.ensemble_df, config.ensemble_alpha);
  const SeedPlan plan{config.master_seed};
  const Matrix A = sample_matrix(ensemble, plan, 0);
  const Vector dither = sample_dither(m, lambda, plan, 0);

  SeedPlan pair_seed{plan.child_seed(0, stream_id::pair_sampling)};
  std::vector<std::pair<Vector, Vector>> pair_list;
  pair_list.reserve(config.pairs);
  for (int p = 0; p < config.pairs; ++p) {
    const auto base = static_cast<std::uint64_t>(p) << 24;
    const Vector x = sample_signal(descriptor, pair_seed, base);
    Vector y;
    bool found = false;
    for (std::uint64_t attempt = 1; attempt < 100000; ++attempt) {
      y = sample_signal(descriptor, pair_seed, base + attempt);
      if ((x - y).norm() >= config.pair_min_distance) {
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("tessellation-audit: could not sample a pair at the requested "
                               "minimum distance");
    pair_list.emplace_back(x, y);
  }

  const TessellationReport report =
      tessellation_audit(A, dither, pair_list, config.rho, lambda, config.theta_list);
  ensure_parent_dir(csv_path);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write results: " + csv_path);
  report.write_csv(out);

  RunOutput output;
  output.csv_path = csv_path;
  return output;
}

RunOutput run_quantizer_mean_check(const ExperimentConfig& config, const std::string& csv_path) {
  const double lambda = config.lambda > 0 ? config.lambda : 1.0;
  const SeedPlan plan{config.master_seed};
  ensure_parent_dir(csv_path);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write results: " + csv_path);
  out << "# onebit-quantizer-v1\n";
  out << "z,empirical_mean,formula_mean,abs_deviation,n_mc,mc_bound\n";
  for (std::size_t zi = 0; zi < config.z_values.size(); ++zi) {
    const double z = config.z_values[zi];
    RandomStream rng = plan.stream(zi, stream_id::quantizer_check);
    double sum = 0;
    for (int k = 0; k < config.mc_samples; ++k)
      sum += static_cast<double>(sign_of(z + rng.uniform(-lambda, lambda)));
    const double empirical = sum / config.mc_samples;
    const double formula =
        std::abs(z) <= lambda ? z / lambda : (z > lambda ? 1.0 : -1.0);
    out << fmt_double(z) << ',' << fmt_double(empirical) << ',' << fmt_double(formula) << ','
        << fmt_double(std::abs(empirical - formula)) << ',' << config.mc_samples << ','
        << fmt_double(4.0 / std::sqrt(static_cast<double>(config.mc_samples))) << "\n";
  }
  RunOutput output;
  output.csv_path = csv_path;
  return output;
}

RunOutput run_bernoulli_failure_demo(const ExperimentConfig& config, const std::string& csv_path) {
  Vector x(2), y(2);
  x << 1, 0;
  y << 1, -0.5;
  y /= y.norm();
  const double distance = (x - y).norm();

  ensure_parent_dir(csv_path);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write results: " + csv_path);
  out << "# onebit-bernoulli-v1\n";
  out << "scenario,detail,distance,hamming_fraction,separation_count,m\n";

  // All four undithered Bernoulli hyperplanes in the plane.
  const double signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  Matrix all(4, 2);
  const Vector zero4 = Vector::Zero(4);
  for (int h = 0; h < 4; ++h) {
    Matrix A(1, 2);
    A << signs[h][0], signs[h][1];
    all.row(h) = A.row(0);
    const int sep = separation_count(A, Vector::Zero(1), x, y);
    char detail[32];
    std::snprintf(detail, sizeof detail, "hyperplane(%+d;%+d)", static_cast<int>(signs[h][0]),
                  static_cast<int>(signs[h][1]));
    out << "undithered," << detail << ',' << fmt_double(distance) << ',' << fmt_double(sep) << ','
        << sep << ",1\n";
  }
  const int sep_all = separation_count(all, zero4, x, y);
  out << "undithered,all-hyperplanes," << fmt_double(distance) << ','
      << fmt_double(sep_all / 4.0) << ',' << sep_all << ",4\n";

  const int m = config.m_values.front();
  const double lambda = config.lambda > 0 ? config.lambda : 2.0;
  const MeasurementEnsemble ensemble = MeasurementEnsemble::rademacher(m, 2, lambda);
  const SeedPlan plan{config.master_seed};
  const Matrix A = sample_matrix(ensemble, plan, 0);
  const Vector dither = sample_dither(m, lambda, plan, 0);
  const int sep = separation_count(A, dither, x, y);
  out << "dithered,lambda=" << fmt_double(lambda) << ',' << fmt_double(distance) << ','
      << fmt_double(static_cast<double>(sep) / m) << ',' << sep << ',' << m << "\n";

  RunOutput output;
  output.csv_path = csv_path;
  return output;
}

RunOutput run_width_table(const ExperimentConfig& config, const std::string& csv_path) {
  const SeedPlan plan{config.master_seed};
  const double radius = config.descriptor ? config.descriptor->radius : 1.0;
  const bool l1l2 = config.descriptor && config.descriptor->kind == SignalSetKind::L1L2Ball;

  ensure_parent_dir(csv_path);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write results: " + csv_path);
  out << "# onebit-width-v1\n";
  out << "kind,s,n,radius,estimate,std_error,n_mc,reference,ratio\n";
  for (std::size_t i = 0; i < config.width_grid.size(); ++i) {
    const auto [s, n] = config.width_grid[i];
    const SignalSet set = l1l2 ? SignalSet::l1l2_ball(s, n, radius)
                               : SignalSet::sparse_ball(s, n, radius);
    const SeedPlan entry{plan.child_seed(i, stream_id::gaussian_width)};
    const WidthEstimate est = gaussian_mean_width(set, config.mc_samples, entry);
    const double reference =
        radius * std::sqrt(s * std::log(std::exp(1.0) * n / static_cast<double>(s)));
    out << (l1l2 ? "l1l2-ball" : "sparse-ball") << ',' << s << ',' << n << ','
        << fmt_double(radius) << ',' << fmt_double(est.value) << ',' << fmt_double(est.std_error)
        << ',' << est.n_mc << ',' << fmt_double(reference) << ','
        << fmt_double(est.value / reference) << "\n";
  }
  RunOutput output;
  output.csv_path = csv_path;
  return output;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::string csv_path = resolve_output_path(config.output);

  RunOutput output;
  switch (config.kind) {
    case ExperimentKind::RecoverySweep:
      output = run_recovery_sweep(config, csv_path);
      break;
    case ExperimentKind::TessellationAudit:
      output = run_tessellation_audit(config, csv_path);
      break;
    case ExperimentKind::QuantizerMeanCheck:
      output = run_quantizer_mean_check(config, csv_path);
      break;
    case ExperimentKind::BernoulliFailureDemo:
      output = run_bernoulli_failure_demo(config, csv_path);
      break;
    case ExperimentKind::WidthTable:
      output = run_width_table(config, csv_path);
      break;
  }

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  output.manifest_path = csv_path + ".manifest.json";
  write_manifest(output.manifest_path, config, total, output.rows, output.csv_path);
  return output;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  if (sorted.size() == 1) return sorted.front();
  const double pos = p * (static_cast<double>(sorted.size()) - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

/// Orders key tuples numerically where both sides parse as numbers.
bool key_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] == b[i]) continue;
    try {
      std::size_t pa = 0, pb = 0;
      const double va = std::stod(a[i], &pa);
      const double vb = std::stod(b[i], &pb);
      if (pa == a[i].size() && pb == b[i].size()) return va < vb;
    } catch (const std::exception&) {
    }
    return a[i] < b[i];
  }
  return a.size() < b.size();
}

}  // namespace

SummaryTable summarize(const std::string& csv_path, std::vector<std::string> group_by,
                       double rho) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open CSV: " + csv_path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "# onebit-trials-v1")
    throw std::invalid_argument("summarize: unsupported CSV schema (expected onebit-trials-v1)");
  if (!std::getline(in, line) ||
      trim(line) != "law,m,beta,sigma,solver,trial,error,hamming_objective,seed")
    throw std::invalid_argument("summarize: unexpected CSV header");

  const std::vector<std::string> columns{"law", "m", "beta", "sigma", "solver"};
  if (group_by.empty()) group_by = columns;
  std::vector<int> key_cols;
  for (const auto& key : group_by) {
    const auto it = std::find(columns.begin(), columns.end(), key);
    if (it == columns.end())
      throw std::invalid_argument("summarize: unknown group-by key '" + key + "'");
    key_cols.push_back(static_cast<int>(it - columns.begin()));
  }

  std::map<std::vector<std::string>, std::vector<double>, decltype(&key_less)> groups(&key_less);
  int data_rows = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split_list(line);
    if (fields.size() != 9)
      throw std::invalid_argument("summarize: malformed row: '" + line + "'");
    std::vector<std::string> key;
    for (int c : key_cols) key.push_back(fields[static_cast<std::size_t>(c)]);
    groups[key].push_back(parse_double(fields[6]));
    ++data_rows;
  }

  SummaryTable table;
  table.group_keys = group_by;
  table.rho = rho;
  if (data_rows == 0) {
    table.warnings.push_back("no trial rows to summarize; cells omitted");
    return table;
  }
  for (auto& [key, errors] : groups) {
    std::sort(errors.begin(), errors.end());
    SummaryRow row;
    row.key = key;
    row.count = static_cast<int>(errors.size());
    row.median = quantile(errors, 0.5);
    row.q25 = quantile(errors, 0.25);
    row.q75 = quantile(errors, 0.75);
    int hits = 0;
    for (double e : errors)
      if (e <= rho) ++hits;
    row.success_rate = static_cast<double>(hits) / static_cast<double>(errors.size());
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_summary_csv(const SummaryTable& table, std::ostream& out) {
  out << "# onebit-summary-v1\n";
  out << "# rho=" << fmt_double(table.rho) << "\n";
  for (std::size_t i = 0; i < table.group_keys.size(); ++i)
    out << table.group_keys[i] << ',';
  out << "count,median,q25,q75,success_rate\n";
  for (const auto& row : table.rows) {
    for (const auto& k : row.key) out << k << ',';
    out << row.count << ',' << fmt_double(row.median) << ',' << fmt_double(row.q25) << ','
        << fmt_double(row.q75) << ',' << fmt_double(row.success_rate) << "\n";
  }
}

SummaryTable read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open summary: " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "# onebit-summary-v1")
    throw std::invalid_argument("read_summary_csv: unsupported schema");
  SummaryTable table;
  if (!std::getline(in, line) || line.rfind("# rho=", 0) != 0)
    throw std::invalid_argument("read_summary_csv: missing rho line");
  table.rho = parse_double(trim(line.substr(6)));
  if (!std::getline(in, line)) throw std::invalid_argument("read_summary_csv: missing header");
  const auto header = split_list(trim(line));
  if (header.size() < 5) throw std::invalid_argument("read_summary_csv: short header");
  table.group_keys.assign(header.begin(), header.end() - 5);
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split_list(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("read_summary_csv: malformed row");
    SummaryRow row;
    row.key.assign(fields.begin(), fields.end() - 5);
    const std::size_t base = fields.size() - 5;
    row.count = static_cast<int>(parse_int(fields[base]));
    row.median = parse_double(fields[base + 1]);
    row.q25 = parse_double(fields[base + 2]);
    row.q75 = parse_double(fields[base + 3]);
    row.success_rate = parse_double(fields[base + 4]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

PlotOutput emit_plots(const SummaryTable& table, const std::string& kind,
                      const std::string& out_prefix) {
  if (kind != "error-vs-m" && kind != "success-vs-m")
    throw std::invalid_argument("emit_plots: unsupported kind '" + kind + "'");
  if (table.rows.empty()) throw std::runtime_error("emit_plots: nothing to plot");
  const auto m_it = std::find(table.group_keys.begin(), table.group_keys.end(), "m");
  if (m_it == table.group_keys.end())
    throw std::invalid_argument("emit_plots: summary must be grouped by m");
  const std::size_t m_col = static_cast<std::size_t>(m_it - table.group_keys.begin());

  // One curve per combination of the non-m key components.
  struct Curve {
    std::string label;
    std::vector<const SummaryRow*> rows;
  };
  std::map<std::string, Curve> curves;
  for (const auto& row : table.rows) {
    std::string label;
    for (std::size_t i = 0; i < row.key.size(); ++i) {
      if (i == m_col) continue;
      if (!label.empty()) label += ",";
      label += table.group_keys[i] + "=" + row.key[i];
    }
    if (label.empty()) label = "all";
    auto& curve = curves[label];
    curve.label = label;
    curve.rows.push_back(&row);
  }

  auto sanitize = [](const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '-';
    return out;
  };

  const std::string prefix = resolve_output_path(out_prefix);
  ensure_parent_dir(prefix + ".gp");
  PlotOutput result;
  std::vector<std::pair<std::string, std::string>> plotted;  // (file, label)
  for (auto& [label, curve] : curves) {
    std::sort(curve.rows.begin(), curve.rows.end(), [&](const SummaryRow* a, const SummaryRow* b) {
      return parse_double(a->key[m_col]) < parse_double(b->key[m_col]);
    });
    const std::string data_path = prefix + "_" + sanitize(label) + ".dat";
    std::ofstream data(data_path);
    if (!data) throw std::runtime_error("cannot write plot data: " + data_path);
    data << "# m median q25 q75 success_rate\n";
    for (const SummaryRow* row : curve.rows) {
      data << row->key[m_col] << ' ' << fmt_double(row->median) << ' ' << fmt_double(row->q25)
           << ' ' << fmt_double(row->q75) << ' ' << fmt_double(row->success_rate) << "\n";
    }
    result.data_paths.push_back(data_path);
    plotted.emplace_back(data_path, label);
  }

  result.script_path = prefix + ".gp";
  std::ofstream script(result.script_path);
  if (!script) throw std::runtime_error("cannot write plot script: " + result.script_path);
  script << "set terminal pngcairo size 900,600\n";
  script << "set output '" << prefix << ".png'\n";
  script << "set xlabel 'm'\n";
  script << "set logscale x 2\n";
  if (kind == "error-vs-m") {
    script << "set ylabel 'recovery error'\n";
    script << "plot";
    for (std::size_t i = 0; i < plotted.size(); ++i) {
      script << (i ? ", " : " ") << "'" << plotted[i].first
             << "' using 1:2:3:4 with yerrorlines title '" << plotted[i].second << "'";
    }
    script << "\n";
  } else {
    script << "set ylabel 'success rate'\nset yrange [0:1.05]\n";
    script << "plot";
    for (std::size_t i = 0; i < plotted.size(); ++i) {
      script << (i ? ", " : " ") << "'" << plotted[i].first
             << "' using 1:5 with linespoints title '" << plotted[i].second << "'";
    }
    script << "\n";
  }
  return result;
}

}  // namespace onebit
