#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "onebit/random.hpp"

namespace onebit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class SignalSetKind { SparseBall, L1L2Ball, FiniteSet };

/// Symbolic description of the signal set.
///
/// SparseBall(s, n) with radius R is the set of s-sparse vectors of Euclidean
/// norm at most R. L1L2Ball(s, n) with radius R is the intersection
/// R * (sqrt(s) B1) with R * B2, the convex relaxation of the sparse ball
/// ("effective sparsity" s may be fractional). FiniteSet is an explicit point
/// list; its radius is the largest point norm.
struct SignalSet {
  SignalSetKind kind = SignalSetKind::SparseBall;
  int dim = 0;           // n
  double sparsity = 0;   // s (integer-valued for SparseBall)
  double radius = 0;     // R
  std::vector<Vector> points;  // FiniteSet only

  static SignalSet sparse_ball(int s, int n, double R);
  static SignalSet l1l2_ball(double s, int n, double R);
  static SignalSet finite_set(std::vector<Vector> pts);

  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;

  /// Radius of the l1 constraint of the convex relaxation, R * sqrt(s).
  double l1_radius() const { return radius * std::sqrt(sparsity); }

  bool is_convex() const { return kind == SignalSetKind::L1L2Ball; }

  std::string describe() const;
};

/// True iff x lies in the set up to an additive tolerance on each norm
/// constraint. Throws on dimension mismatch.
bool membership(const SignalSet& set, const Vector& x, double tol);

/// Draws a test signal from the set; the returned point always satisfies
/// membership with tolerance 1e-9.
Vector sample_signal(const SignalSet& set, const SeedPlan& seed, std::uint64_t trial);

}  // namespace onebit
