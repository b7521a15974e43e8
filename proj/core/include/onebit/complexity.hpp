#pragma once

#include <functional>
#include <optional>
#include <string>

#include "onebit/ensemble.hpp"
#include "onebit/signal_set.hpp"

namespace onebit {

struct WidthEstimate {
  double value = 0;
  double std_error = 0;
  int n_mc = 0;
};

/// Named constants of the sample-size bounds. The guarantees never pin their
/// absolute constants, so everything defaults to 1 and the calculators are
/// scaling guides rather than certified thresholds. c_tau and C_tau are the
/// dither small-ball constants 1/(2*lambda) and 1/lambda.
struct TheoremConstants {
  double c0 = 1, c1 = 1, c2 = 1, c3 = 1, c4 = 1, c5 = 1;
  double kappa = 1, delta = 1;
  double c_tau = 0.5, C_tau = 1.0;

  static TheoremConstants for_lambda(double lambda);
};

/// sup over the set of <g, x>, computed exactly per descriptor kind:
/// SparseBall uses the s largest |g_i|; L1L2Ball minimizes the infimal
/// convolution sqrt(s)*t + ||soft_threshold(g,t)||_2 over the threshold t;
/// FiniteSet scans its points.
double support_function(const SignalSet& set, const Vector& g);

/// Monte Carlo estimate of E sup |<G, x>| for standard Gaussian G.
WidthEstimate gaussian_mean_width(const SignalSet& set, int n_mc, const SeedPlan& seed);

/// Monte Carlo estimate of the empirical width: the supremum evaluated at
/// (1/sqrt(m)) * sum_i eps_i X_i with independent sign flips eps_i.
WidthEstimate empirical_width(const SignalSet& set, const MeasurementEnsemble& ensemble,
                              int n_mc, const SeedPlan& seed);

/// Upper bound on log N(set, r): the sparse covering estimate
/// s*log(e*n/(s*min(r/R,1))) for SparseBall, log(#points) for FiniteSet, and
/// the Sudakov bound width^2/r^2 (cached width estimate) otherwise.
double covering_bound(const SignalSet& set, double r);

/// Descriptor containing (T - T) intersected with the ball of radius r:
/// SparseBall composes into the 2s-sparse ball of radius min(r, 2R); L1L2Ball
/// rescales its effective sparsity; FiniteSet enumerates pairwise differences.
SignalSet difference_intersection(const SignalSet& set, double r);

/// Descriptor of conv(T) for width purposes. Support functions are blind to
/// convexification, so FiniteSet is returned unchanged; SparseBall relaxes to
/// the L1L2 ball.
SignalSet convex_hull_descriptor(const SignalSet& set);

enum class TheoremId {
  TessSubgaussian,    // tessellation, subgaussian rows
  TessHeavyTailed,    // tessellation, L1-L2 equivalent rows
  RecoverSubgaussian, // Hamming recovery, subgaussian rows
  RecoverHeavyTailed, // Hamming recovery, heavy-tailed rows
  ConvexSubgaussian   // convex-program recovery
};

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

/// Inputs of the sufficient-m calculators. Width and covering terms can be
/// supplied directly (as in closed-form sanity checks) or left unset, in
/// which case they are estimated from the descriptor. The heavy-tailed
/// bounds depend on the empirical width, which itself depends on m; supply
/// either a fixed value or a callable m -> E, the latter resolved by a
/// doubling search.
struct SufficientMParams {
  double R = 1;
  double rho = 0;
  double lambda = 0;  // 0 selects the per-theorem default scaling
  double sigma = 0;
  double beta = 0;
  std::optional<SignalSet> descriptor;
  std::optional<MeasurementEnsemble> ensemble;  // row law for empirical widths

  std::optional<double> width_sq_T;       // squared Gaussian width of T
  std::optional<double> width_T_r;        // Gaussian width of T_r
  std::optional<double> width_U_rho;      // Gaussian width of U_rho
  std::optional<double> empirical_width_value;
  std::function<double(long long)> empirical_width_fn;
  std::optional<double> log_covering;     // log N at the theorem's internal r

  int width_mc = 2000;      // draws per width estimate
  std::uint64_t width_seed = 0x5eedu;
};

struct SufficientM {
  long long m = 0;
  double r_internal = 0;
  double lambda_used = 0;
};

/// Evaluates the selected sample-size bound with the supplied constants and
/// returns the ceiling plus the internal covering radius it used.
SufficientM sufficient_m(TheoremId theorem, const SufficientMParams& params,
                         const TheoremConstants& constants = {});

}  // namespace onebit
