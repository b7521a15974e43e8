#pragma once

#include <iosfwd>
#include <vector>

#include "onebit/ensemble.hpp"
#include "onebit/quantize.hpp"
#include "onebit/signal_set.hpp"

namespace onebit {

/// Indices of hyperplanes that separate x and y with margin at least
/// theta * ||x - y||_2 on both sides.
struct MarginSeparationSet {
  std::vector<int> indices;
  double theta = 0;

  int count() const { return static_cast<int>(indices.size()); }
};

/// Number of rows i with sign(<X_i,x> + tau_i) != sign(<X_i,y> + tau_i).
int separation_count(const Matrix& A, const Vector& dither, const Vector& x, const Vector& y);

MarginSeparationSet margin_separation_set(const Matrix& A, const Vector& dither,
                                          const Vector& x, const Vector& y, double theta);

/// Noisy variant: the noise enters only the x-side terms, matching the
/// asymmetric separation notion used for noisy measurements.
MarginSeparationSet noisy_margin_separation_set(const Matrix& A, const Vector& dither,
                                                const Vector& noise, const Vector& x,
                                                const Vector& y, double theta);

struct SeparationProbability {
  double estimate = 0;
  double std_error = 0;
};

/// Probability that one random dithered hyperplane separates x and y,
/// Rao-Blackwellized over the dither: for each draw of X the conditional
/// separation probability is the length of
/// [min(-z_x,-z_y), max(-z_x,-z_y)) intersected with [-lambda, lambda],
/// divided by 2*lambda. Mean and standard error over n_mc draws of X.
SeparationProbability separation_probability(const MeasurementEnsemble& ensemble,
                                             const Vector& x, const Vector& y,
                                             int n_mc, const SeedPlan& seed);

/// Exact conditional kernel used above; exposed for oracle tests.
double dither_separation_kernel(double z_x, double z_y, double lambda);

/// Straight-line chain between x and y with steps in [gamma*r, r] whose
/// lengths sum exactly to ||x - y||_2. `points` holds the interior points
/// only; gamma is the realized step/r ratio (1/2 < gamma <= 1 whenever a
/// subdivision is needed). For sparse descriptors the segment stays in the
/// 2s-sparse ball of the larger endpoint norm.
struct MetricChain {
  std::vector<Vector> points;
  double gamma = 1.0;
  double step = 0;
};

MetricChain metric_chain(const Vector& x, const Vector& y, double r, const SignalSet& set);

/// Stability test: if H_{X,tau} theta-well-separates v and w with
/// ||v - w|| >= r_prime, and x, y perturb v, w by at most theta*r_prime/3 in
/// the <X, .> sense, then H separates x and y. Returns true iff the
/// hypotheses hold, and checks the conclusion whenever it does.
bool stability_predicate(const Vector& X, double tau, const Vector& v, const Vector& w,
                         const Vector& x, const Vector& y, double theta, double r_prime);

struct PairStats {
  double distance = 0;
  double hamming_fraction = 0;
  std::vector<int> margin_counts;  // one per theta in the audit's theta list
};

/// Per-pair separation statistics plus a fitted summary: the min/max of
/// hamming_fraction / (distance / lambda) over pairs with distance >= rho,
/// and the Spearman rank correlation between fraction and distance. The
/// theorems' absolute constants are never asserted; the audit only reports
/// the empirical band.
struct TessellationReport {
  std::vector<double> thetas;
  double rho = 0;
  double lambda = 0;
  std::vector<PairStats> pairs;

  int pairs_in_summary = 0;
  double ratio_min = 0;
  double ratio_max = 0;
  double rank_correlation = 0;

  /// CSV with one row per pair and a trailing summary footer row.
  void write_csv(std::ostream& out) const;
};

TessellationReport tessellation_audit(const Matrix& A, const Vector& dither,
                                      const std::vector<std::pair<Vector, Vector>>& pairs,
                                      double rho, double lambda,
                                      const std::vector<double>& theta_list);

/// Spearman rank correlation with average ranks for ties.
double spearman_rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace onebit
