#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "onebit/quantize.hpp"
#include "onebit/signal_set.hpp"

namespace onebit {

struct SolverMeta {
  int iterations = 0;
  int restarts = 0;
  bool converged = true;
};

struct RecoveryResult {
  Vector x_hat;
  double objective = 0;  // Hamming count or the convex objective value
  SolverMeta meta;
};

/// Euclidean projection onto the l2 ball of radius R.
Vector project_l2(const Vector& v, double R);

/// Exact Euclidean projection onto the l1 ball via sort-and-threshold.
Vector project_l1(const Vector& v, double radius);

/// Thrown when alternating projections fail to converge; carries the last
/// iterate and its successive-change residual.
class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(std::string msg, Vector last, double residual)
      : std::runtime_error(std::move(msg)), last_iterate(std::move(last)), residual(residual) {}
  Vector last_iterate;
  double residual;
};

/// Euclidean projection onto {||z||_1 <= l1_radius} intersected with
/// {||z||_2 <= l2_radius} via Dykstra's alternating scheme with correction
/// terms. Containment cases short-circuit to the single exact projection.
Vector project_intersection(const Vector& v, double l1_radius, double l2_radius,
                            double tol = 1e-10, int max_iter = 10000);

/// The convex objective (1/m)<q, A z> - ||z||^2/(2*lambda).
double convex_objective(const Matrix& A, const SignPattern& q, double lambda, const Vector& z);

/// Maximizes the convex objective over conv(T) in closed form: completing the
/// square shows the maximizer is the projection of (lambda/m) A^T q onto
/// conv(T). With certify_samples > 0 the result is checked against that many
/// random feasible points (throws if any beats it by more than 1e-9).
RecoveryResult convex_recover(const Matrix& A, const SignPattern& q_corr, double lambda,
                              const SignalSet& descriptor, int certify_samples = 10000,
                              const SeedPlan& seed = SeedPlan{0});

/// Covering net of the signal set with an empirically certified radius.
struct Net {
  std::vector<Vector> points;
  double radius_target = 0;
  double radius_empirical = 0;

  /// CSV with a header row carrying (n, count, r, radius_empirical).
  void write_csv(std::ostream& out) const;
};

class NetBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Greedy farthest-point net construction, certified on a fresh probe
/// sample. SparseBall descriptors compose one per-support net across all
/// supports when the support count is within budget. Throws NetBudgetError
/// when the point budget is exhausted (use a larger r).
Net build_net(const SignalSet& set, double r, int probe_count, const SeedPlan& seed,
              std::size_t point_budget = 200000);

/// d_H(q, sign(A z + dither)); the Hamming objective both solvers minimize.
int hamming_objective(const Matrix& A, const Vector& dither, const SignPattern& q,
                      const Vector& z);

/// Exact minimizer of the Hamming objective over the net. Ties break by
/// smaller l2 norm, then lexicographic order, so the result is deterministic.
RecoveryResult hamming_recover_net(const Matrix& A, const Vector& dither,
                                   const SignPattern& q_corr, const Net& net);

/// Multi-restart local search over the sparse ball: support swaps plus exact
/// coordinate-wise sweeps of the piecewise-constant objective, accepting
/// strict decreases. Returns the best iterate found; no global claim.
RecoveryResult hamming_recover_local(const Matrix& A, const Vector& dither,
                                     const SignPattern& q_corr, const SignalSet& descriptor,
                                     int restarts, int iters, const SeedPlan& seed,
                                     std::uint64_t trial,
                                     const std::optional<Vector>& warm_start = std::nullopt);

}  // namespace onebit
