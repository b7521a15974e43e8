#include "onebit/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace onebit {

std::string to_string(RowLaw law) {
  switch (law) {
    case RowLaw::Gaussian: return "gaussian";
    case RowLaw::Rademacher: return "rademacher";
    case RowLaw::StudentT: return "student-t";
    case RowLaw::CoordHeavy: return "coord-heavy";
  }
  return "?";
}

RowLaw row_law_from_string(const std::string& name) {
  if (name == "gaussian") return RowLaw::Gaussian;
  if (name == "rademacher" || name == "bernoulli") return RowLaw::Rademacher;
  if (name == "student-t") return RowLaw::StudentT;
  if (name == "coord-heavy") return RowLaw::CoordHeavy;
  throw std::invalid_argument("unknown row law: " + name);
}

MeasurementEnsemble MeasurementEnsemble::gaussian(int m, int n, double lambda) {
  MeasurementEnsemble e;
  e.row_law = RowLaw::Gaussian;
  e.rows = m;
  e.dim = n;
  e.lambda = lambda;
  e.validate();
  return e;
}

MeasurementEnsemble MeasurementEnsemble::rademacher(int m, int n, double lambda) {
  MeasurementEnsemble e = gaussian(m, n, lambda);
  e.row_law = RowLaw::Rademacher;
  return e;
}

MeasurementEnsemble MeasurementEnsemble::student_t(int m, int n, double lambda, double df) {
  MeasurementEnsemble e;
  e.row_law = RowLaw::StudentT;
  e.rows = m;
  e.dim = n;
  e.lambda = lambda;
  e.df = df;
  e.validate();
  return e;
}

MeasurementEnsemble MeasurementEnsemble::coord_heavy(int m, int n, double lambda, double alpha) {
  MeasurementEnsemble e;
  e.row_law = RowLaw::CoordHeavy;
  e.rows = m;
  e.dim = n;
  e.lambda = lambda;
  e.alpha = alpha;
  e.validate();
  return e;
}

void MeasurementEnsemble::validate() const {
  if (rows < 1) throw std::invalid_argument("MeasurementEnsemble: m must be >= 1");
  if (dim < 1) throw std::invalid_argument("MeasurementEnsemble: n must be >= 1");
  if (!(lambda > 0)) throw std::invalid_argument("MeasurementEnsemble: lambda must be positive");
  if (row_law == RowLaw::StudentT && !(df > 2))
    throw std::invalid_argument("MeasurementEnsemble: StudentT requires df > 2");
  if (row_law == RowLaw::CoordHeavy && !(alpha > 0))
    throw std::invalid_argument("MeasurementEnsemble: CoordHeavy requires alpha > 0");
}

NoiseModel NoiseModel::gaussian(double sigma) {
  NoiseModel n;
  n.law = Law::Gaussian;
  n.sigma = sigma;
  n.validate();
  return n;
}

NoiseModel NoiseModel::student_t(double sigma, double df) {
  NoiseModel n;
  n.law = Law::StudentT;
  n.sigma = sigma;
  n.df = df;
  n.validate();
  return n;
}

NoiseModel NoiseModel::constant_bias(double mu) {
  NoiseModel n;
  n.law = Law::ConstantBias;
  n.mu = mu;
  return n;
}

void NoiseModel::validate() const {
  if (sigma < 0) throw std::invalid_argument("NoiseModel: sigma must be >= 0");
  if (law == Law::StudentT && !(df > 2))
    throw std::invalid_argument("NoiseModel: StudentT requires df > 2");
}

std::string to_string(NoiseModel::Law law) {
  switch (law) {
    case NoiseModel::Law::None: return "none";
    case NoiseModel::Law::Gaussian: return "gaussian";
    case NoiseModel::Law::StudentT: return "student-t";
    case NoiseModel::Law::ConstantBias: return "constant-bias";
  }
  return "?";
}

NoiseModel::Law noise_law_from_string(const std::string& name) {
  if (name == "none") return NoiseModel::Law::None;
  if (name == "gaussian") return NoiseModel::Law::Gaussian;
  if (name == "student-t") return NoiseModel::Law::StudentT;
  if (name == "constant-bias") return NoiseModel::Law::ConstantBias;
  throw std::invalid_argument("unknown noise law: " + name);
}

namespace {

double draw_entry(RowLaw law, double df, double alpha, double heavy_scale, RandomStream& rng) {
  switch (law) {
    case RowLaw::Gaussian:
      return rng.gauss();
    case RowLaw::Rademacher:
      return static_cast<double>(rng.rademacher());
    case RowLaw::StudentT:
      return rng.student_t(df) * std::sqrt((df - 2.0) / df);
    case RowLaw::CoordHeavy:
      return rng.rademacher() * std::pow(rng.exponential(), alpha) / heavy_scale;
  }
  return 0;
}

}  // namespace

Matrix sample_matrix(const MeasurementEnsemble& ensemble, const SeedPlan& seed,
                     std::uint64_t trial) {
  ensemble.validate();
  RandomStream rng = seed.stream(trial, stream_id::matrix);
  // E[E^(2 alpha)] = Gamma(2 alpha + 1) for E ~ Exp(1); dividing by its square
  // root makes the coordinate variance exactly 1.
  const double heavy_scale =
      ensemble.row_law == RowLaw::CoordHeavy ? std::sqrt(std::tgamma(2.0 * ensemble.alpha + 1.0)) : 1.0;
  Matrix a(ensemble.rows, ensemble.dim);
  for (int i = 0; i < ensemble.rows; ++i)
    for (int j = 0; j < ensemble.dim; ++j)
      a(i, j) = draw_entry(ensemble.row_law, ensemble.df, ensemble.alpha, heavy_scale, rng);
  return a;
}

Vector sample_dither(int m, double lambda, const SeedPlan& seed, std::uint64_t trial) {
  if (!(lambda > 0)) throw std::invalid_argument("sample_dither: lambda must be positive");
  if (m < 0) throw std::invalid_argument("sample_dither: m must be >= 0");
  RandomStream rng = seed.stream(trial, stream_id::dither);
  Vector tau(m);
  for (int i = 0; i < m; ++i) tau[i] = rng.uniform(-lambda, lambda);
  return tau;
}

Vector sample_noise(const NoiseModel& model, int m, const SeedPlan& seed,
                    std::uint64_t trial) {
  model.validate();
  if (m < 0) throw std::invalid_argument("sample_noise: m must be >= 0");
  Vector nu = Vector::Zero(m);
  if (model.law == NoiseModel::Law::None) return nu;
  if (model.law == NoiseModel::Law::ConstantBias) {
    nu.setConstant(model.mu);
    return nu;
  }
  RandomStream rng = seed.stream(trial, stream_id::noise);
  if (model.law == NoiseModel::Law::Gaussian) {
    for (int i = 0; i < m; ++i) nu[i] = model.sigma * rng.gauss();
  } else {
    const double scale = model.sigma * std::sqrt((model.df - 2.0) / model.df);
    for (int i = 0; i < m; ++i) nu[i] = scale * rng.student_t(model.df);
  }
  return nu;
}

double default_dither_amplitude(double R, double sigma, double rho) {
  return 2.0 * (R + sigma) + rho;
}

}  // namespace onebit
