#pragma once

#include <string>

#include "onebit/signal_set.hpp"

namespace onebit {

enum class RowLaw { Gaussian, Rademacher, StudentT, CoordHeavy };

std::string to_string(RowLaw law);
RowLaw row_law_from_string(const std::string& name);

/// Distribution of the measurement rows X_i. Every law is coordinate-wise
/// i.i.d., symmetric, and rescaled to unit per-coordinate variance, so the
/// ensemble is isotropic by construction.
///
/// StudentT entries are scaled by sqrt((df-2)/df); df <= 2 is rejected since
/// the variance would not exist. CoordHeavy(alpha) is a symmetrized alpha-th
/// power of an Exp(1) variable divided by sqrt(Gamma(2*alpha+1)); its p-th
/// moments grow like p^alpha, which is the moment profile of interest for
/// heavy-tailed rows.
struct MeasurementEnsemble {
  RowLaw row_law = RowLaw::Gaussian;
  int rows = 0;     // m
  int dim = 0;      // n
  double lambda = 1.0;  // dither amplitude
  double df = 0;        // StudentT only
  double alpha = 0;     // CoordHeavy only
  double norm_equivalence = 1.0;  // L (metadata, not used by samplers)

  static MeasurementEnsemble gaussian(int m, int n, double lambda);
  static MeasurementEnsemble rademacher(int m, int n, double lambda);
  static MeasurementEnsemble student_t(int m, int n, double lambda, double df);
  static MeasurementEnsemble coord_heavy(int m, int n, double lambda, double alpha);

  void validate() const;
};

/// Analog measurement noise. ConstantBias models the adversarial mean
/// component of the noise; StudentT is rescaled so its variance is sigma^2.
struct NoiseModel {
  enum class Law { None, Gaussian, StudentT, ConstantBias };
  Law law = Law::None;
  double sigma = 0;
  double df = 0;
  double mu = 0;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma);
  static NoiseModel student_t(double sigma, double df);
  static NoiseModel constant_bias(double mu);

  void validate() const;
};

std::string to_string(NoiseModel::Law law);
NoiseModel::Law noise_law_from_string(const std::string& name);

/// m x n matrix with i.i.d. rows drawn from the ensemble's row law.
Matrix sample_matrix(const MeasurementEnsemble& ensemble, const SeedPlan& seed,
                     std::uint64_t trial);

/// i.i.d. uniform dithers on [-lambda, lambda].
Vector sample_dither(int m, double lambda, const SeedPlan& seed, std::uint64_t trial);

/// Noise vector of length m.
Vector sample_noise(const NoiseModel& model, int m, const SeedPlan& seed,
                    std::uint64_t trial);

/// Default dither amplitude 2*(R + sigma) + rho; the scaling the recovery
/// guarantees ask for, with unit constants. Overridable everywhere.
double default_dither_amplitude(double R, double sigma, double rho);

}  // namespace onebit
