#pragma once

// Independent test oracles. Everything here deliberately avoids the library's
// implementation paths: projections go through dual bisection / KKT case
// analysis, probabilities through plain two-level Monte Carlo, expectations
// through quadrature. Keep it that way; these exist to catch bugs in the
// main routes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "onebit/ensemble.hpp"
#include "onebit/quantize.hpp"
#include "onebit/signal_set.hpp"

namespace onebit::test {

/// Two-level Monte Carlo separation probability (samples X and tau).
inline double naive_separation_probability(const MeasurementEnsemble& ensemble, const Vector& x,
                                           const Vector& y, int n_mc, std::uint64_t seed,
                                           double* std_error = nullptr) {
  MeasurementEnsemble row = ensemble;
  row.rows = 1;
  SeedPlan plan{seed};
  RandomStream tau_rng(plan.child_seed(1, 999));
  double sum = 0;
  for (int k = 0; k < n_mc; ++k) {
    const Matrix X = sample_matrix(row, plan, static_cast<std::uint64_t>(k));
    const double tau = tau_rng.uniform(-ensemble.lambda, ensemble.lambda);
    const double zx = X.row(0).dot(x) + tau;
    const double zy = X.row(0).dot(y) + tau;
    if (sign_of(zx) != sign_of(zy)) sum += 1.0;
  }
  const double p = sum / n_mc;
  if (std_error) *std_error = std::sqrt(std::max(p * (1 - p), 1e-12) / n_mc);
  return p;
}

/// l1-ball projection via bisection on the dual threshold.
inline Vector project_l1_bisection(const Vector& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  double lo = 0, hi = v.cwiseAbs().maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double theta = 0.5 * (lo + hi);
    double total = 0;
    for (int i = 0; i < v.size(); ++i) total += std::max(std::abs(v[i]) - theta, 0.0);
    (total > radius ? lo : hi) = theta;
  }
  const double theta = 0.5 * (lo + hi);
  Vector out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = v[i] >= 0 ? mag : -mag;
  }
  return out;
}

inline Vector soft_threshold(const Vector& v, double t) {
  Vector out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - t, 0.0);
    out[i] = v[i] >= 0 ? mag : -mag;
  }
  return out;
}

/// Projection onto {||z||_1 <= a} intersect {||z||_2 <= b} by KKT case
/// analysis: the optimum has the form soft(v, alpha) / (1 + beta). All four
/// activity patterns are generated and the feasible candidate closest to v
/// wins (the true projection is among them).
inline Vector project_intersection_kkt(const Vector& v, double a, double b) {
  std::vector<Vector> candidates;
  candidates.push_back(v);
  if (v.norm() > 0) candidates.push_back(v * (b / v.norm()));
  candidates.push_back(project_l1_bisection(v, a));
  {
    // Both constraints active: find alpha with b*||soft||_1 = a*||soft||_2.
    const double top = v.cwiseAbs().maxCoeff();
    auto psi = [&](double alpha) {
      const Vector s = soft_threshold(v, alpha);
      return b * s.lpNorm<1>() - a * s.norm();
    };
    const int grid = 4096;
    double prev_alpha = 0, prev_val = psi(0);
    for (int k = 1; k <= grid; ++k) {
      const double alpha = top * k / (grid + 1);
      const double val = psi(alpha);
      if ((prev_val > 0) != (val > 0)) {
        double lo = prev_alpha, hi = alpha;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          ((psi(mid) > 0) == (prev_val > 0) ? lo : hi) = mid;
        }
        const Vector s = soft_threshold(v, 0.5 * (lo + hi));
        if (s.norm() > 0) {
          const double beta = s.norm() / b - 1.0;
          if (beta > 0) candidates.push_back(s / (1.0 + beta));
        }
      }
      prev_alpha = alpha;
      prev_val = val;
    }
  }
  const double feas_tol = 1e-9 * (1.0 + v.norm());
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& z : candidates) {
    if (z.lpNorm<1>() > a + feas_tol || z.norm() > b + feas_tol) continue;
    const double d = (z - v).norm();
    if (d < best_dist) {
      best_dist = d;
      best = z;
    }
  }
  if (best.size() == 0) throw std::runtime_error("kkt oracle: no feasible candidate");
  return best;
}

/// Brute-force support function of an l1/l2 intersection in R^3: grid over
/// the first two coordinates, closed-form optimal third coordinate.
inline double mesh_support_l1l2_3d(const Vector& g, double a, double b, int grid) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = -grid; i <= grid; ++i) {
    const double x1 = b * i / grid;
    for (int j = -grid; j <= grid; ++j) {
      const double x2 = b * j / grid;
      const double l1_left = a - std::abs(x1) - std::abs(x2);
      const double l2_left_sq = b * b - x1 * x1 - x2 * x2;
      if (l1_left < 0 || l2_left_sq < 0) continue;
      const double x3 = std::min(l1_left, std::sqrt(l2_left_sq));
      best = std::max(best, g[0] * x1 + g[1] * x2 + std::abs(g[2]) * x3);
    }
  }
  return best;
}

/// E max(|g1|, |g2|) for independent standard normals, by quadrature of the
/// survival function 1 - (2 Phi(t) - 1)^2 on [0, 12].
inline double quadrature_expected_max_abs2() {
  auto survival = [](double t) {
    const double phi = 0.5 * (1.0 + std::erf(t / std::sqrt(2.0)));
    const double c = 2.0 * phi - 1.0;
    return 1.0 - c * c;
  };
  const int n = 24000;  // Simpson rule, even count
  const double h = 12.0 / n;
  double sum = survival(0.0) + survival(12.0);
  for (int k = 1; k < n; ++k) sum += survival(k * h) * (k % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Duplicate net scan with the same tie-breaking; written independently of
/// hamming_recover_net.
inline Vector net_scan_oracle(const Matrix& A, const Vector& dither, const SignPattern& q,
                              const std::vector<Vector>& points, int* objective = nullptr) {
  int best_obj = std::numeric_limits<int>::max();
  Vector best;
  for (const auto& z : points) {
    const Vector analog = A * z + dither;
    int obj = 0;
    for (int i = 0; i < analog.size(); ++i)
      if (sign_of(analog[i]) != q[i]) ++obj;
    bool take = false;
    if (obj < best_obj) {
      take = true;
    } else if (obj == best_obj) {
      if (z.norm() < best.norm()) {
        take = true;
      } else if (z.norm() == best.norm()) {
        for (int i = 0; i < z.size(); ++i) {
          if (z[i] < best[i]) {
            take = true;
            break;
          }
          if (z[i] > best[i]) break;
        }
      }
    }
    if (take) {
      best_obj = obj;
      best = z;
    }
  }
  if (objective) *objective = best_obj;
  return best;
}

}  // namespace onebit::test
