#include "onebit/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>

namespace onebit {

Vector project_l2(const Vector& v, double R) {
  if (!(R > 0)) throw std::invalid_argument("project_l2: radius must be positive");
  const double norm = v.norm();
  if (norm <= R) return v;
  return v * (R / norm);
}

Vector project_l1(const Vector& v, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("project_l1: radius must be positive");
  if (v.lpNorm<1>() <= radius) return v;
  // Sort-and-threshold: theta solves sum max(|v_i| - theta, 0) = radius.
  std::vector<double> u(v.size());
  for (int i = 0; i < v.size(); ++i) u[i] = std::abs(v[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0;
  double theta = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumsum += u[k];
    const double candidate = (cumsum - radius) / static_cast<double>(k + 1);
    if (k + 1 == u.size() || u[k + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }
  Vector out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    const double mag = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = v[i] >= 0 ? mag : -mag;
  }
  return out;
}

Vector project_intersection(const Vector& v, double l1_radius, double l2_radius,
                            double tol, int max_iter) {
  if (!(l1_radius > 0) || !(l2_radius > 0))
    throw std::invalid_argument("project_intersection: radii must be positive");
  if (!(tol > 0)) throw std::invalid_argument("project_intersection: tol must be positive");
  const double n = static_cast<double>(v.size());
  // Containment short-circuits: either ball inside the other.
  if (l1_radius >= std::sqrt(n) * l2_radius) return project_l2(v, l2_radius);
  if (l1_radius <= l2_radius) return project_l1(v, l1_radius);

  Vector x = v;
  Vector p = Vector::Zero(v.size());
  Vector q = Vector::Zero(v.size());
  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    const Vector y = project_l1(x + p, l1_radius);
    const Vector p_new = x + p - y;
    Vector x_new = project_l2(y + q, l2_radius);
    const Vector q_new = y + q - x_new;
    // The x iterates can stall for many rounds while the corrections keep
    // moving, so the stopping rule must watch the full (x, p, q) state.
    residual = std::sqrt((x_new - x).squaredNorm() + (p_new - p).squaredNorm() +
                         (q_new - q).squaredNorm());
    p = p_new;
    q = q_new;
    x = std::move(x_new);
    if (residual < tol) {
      // The iterate can sit a hair outside either set; polish with exact
      // projections (the l2 rescale cannot re-violate the l1 constraint).
      if (x.lpNorm<1>() > l1_radius) x = project_l1(x, l1_radius);
      if (x.norm() > l2_radius) x = project_l2(x, l2_radius);
      return x;
    }
  }
  throw ProjectionError("project_intersection: no convergence within max_iter", x, residual);
}

double convex_objective(const Matrix& A, const SignPattern& q, double lambda, const Vector& z) {
  if (static_cast<int>(q.size()) != A.rows())
    throw std::invalid_argument("convex_objective: pattern length mismatch");
  const Vector az = A * z;
  double dot = 0;
  for (int i = 0; i < az.size(); ++i) dot += static_cast<double>(q[i]) * az[i];
  return dot / static_cast<double>(A.rows()) - z.squaredNorm() / (2.0 * lambda);
}

namespace {

Vector project_simplex(const Vector& w) {
  std::vector<double> u(w.size());
  for (int i = 0; i < w.size(); ++i) u[i] = w[i];
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0;
  double tau = 0;
  int rho = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumsum += u[k];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0) {
      rho = static_cast<int>(k + 1);
      tau = t;
    }
  }
  (void)rho;
  Vector out(w.size());
  for (int i = 0; i < w.size(); ++i) out[i] = std::max(w[i] - tau, 0.0);
  return out;
}

/// Projection of c onto conv(points): accelerated projected gradient on the
/// simplex weights, run to a Frank-Wolfe gap small enough for the 1e-9
/// optimality certification downstream.
Vector project_convex_hull(const std::vector<Vector>& points, const Vector& c) {
  const int k = static_cast<int>(points.size());
  const int n = static_cast<int>(c.size());
  Matrix P(n, k);
  for (int j = 0; j < k; ++j) P.col(j) = points[j];
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(P.transpose() * P);
  const double L = std::max(eig.eigenvalues().maxCoeff(), 1e-12);

  Vector w = Vector::Constant(k, 1.0 / k);
  Vector y = w;
  double t = 1;
  const double gap_tol = 1e-13 * std::max(1.0, c.squaredNorm());
  for (int iter = 0; iter < 200000; ++iter) {
    const Vector grad = P.transpose() * (P * y - c);
    Vector w_new = project_simplex(y - grad / L);
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = w_new + ((t - 1.0) / t_new) * (w_new - w);
    t = t_new;
    w = std::move(w_new);
    const Vector g = P.transpose() * (P * w - c);
    const double fw_gap = g.dot(w) - g.minCoeff();
    if (fw_gap <= gap_tol) break;
  }
  return P * w;
}

/// Random point of the l1/l2 intersection (gaussian direction, radial draw,
/// pulled back into the l1 ball); used for certification batches.
Vector sample_l1l2_point(int n, double l1_radius, double l2_radius, RandomStream& rng) {
  Vector x(n);
  double norm = 0;
  do {
    for (int i = 0; i < n; ++i) x[i] = rng.gauss();
    norm = x.norm();
  } while (norm == 0);
  x *= l2_radius * std::pow(rng.u01(), 1.0 / n) / norm;
  const double l1 = x.lpNorm<1>();
  if (l1 > l1_radius) x *= l1_radius / l1;
  return x;
}

Vector sample_hull_point(const SignalSet& set, RandomStream& rng) {
  switch (set.kind) {
    case SignalSetKind::SparseBall:
    case SignalSetKind::L1L2Ball:
      return sample_l1l2_point(set.dim, set.l1_radius(), set.radius, rng);
    case SignalSetKind::FiniteSet: {
      // Dirichlet(1,..,1) weights give a uniform point of the weight simplex.
      Vector x = Vector::Zero(set.dim);
      double total = 0;
      std::vector<double> w(set.points.size());
      for (auto& wi : w) {
        wi = rng.exponential();
        total += wi;
      }
      for (std::size_t j = 0; j < w.size(); ++j) x += (w[j] / total) * set.points[j];
      return x;
    }
  }
  return Vector::Zero(set.dim);
}

bool lexicographic_less(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

/// Deterministic preference order shared by the net scan and the local
/// search: objective, then l2 norm, then lexicographic.
bool candidate_better(double obj_a, const Vector& a, double obj_b, const Vector& b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  const double na = a.norm(), nb = b.norm();
  if (na != nb) return na < nb;
  return lexicographic_less(a, b);
}

}  // namespace

RecoveryResult convex_recover(const Matrix& A, const SignPattern& q_corr, double lambda,
                              const SignalSet& descriptor, int certify_samples,
                              const SeedPlan& seed) {
  descriptor.validate();
  if (!(lambda > 0)) throw std::invalid_argument("convex_recover: lambda must be positive");
  if (static_cast<int>(q_corr.size()) != A.rows())
    throw std::invalid_argument("convex_recover: pattern length mismatch");
  if (A.cols() != descriptor.dim)
    throw std::invalid_argument("convex_recover: descriptor dimension mismatch");

  const int m = static_cast<int>(A.rows());
  Vector qv(m);
  for (int i = 0; i < m; ++i) qv[i] = static_cast<double>(q_corr[i]);
  const Vector target = (lambda / m) * (A.transpose() * qv);

  RecoveryResult result;
  switch (descriptor.kind) {
    case SignalSetKind::SparseBall:
    case SignalSetKind::L1L2Ball:
      // conv(T) is the l1/l2 intersection with radii R*sqrt(s) and R.
      result.x_hat = project_intersection(target, descriptor.l1_radius(), descriptor.radius);
      break;
    case SignalSetKind::FiniteSet:
      if (descriptor.dim > 3)
        throw std::invalid_argument(
            "convex_recover: conv of a finite set is only supported for n <= 3");
      result.x_hat = project_convex_hull(descriptor.points, target);
      break;
  }
  result.objective = convex_objective(A, q_corr, lambda, result.x_hat);

  if (certify_samples > 0) {
    const SignalSet hull = descriptor.kind == SignalSetKind::SparseBall
                               ? SignalSet::l1l2_ball(descriptor.sparsity, descriptor.dim,
                                                      descriptor.radius)
                               : descriptor;
    RandomStream rng = seed.stream(0, stream_id::certification);
    for (int k = 0; k < certify_samples; ++k) {
      const Vector z = sample_hull_point(hull, rng);
      const double phi = convex_objective(A, q_corr, lambda, z);
      if (phi > result.objective + 1e-9)
        throw std::logic_error("convex_recover: certification found a better feasible point");
    }
  }
  return result;
}

void Net::write_csv(std::ostream& out) const {
  out << "# onebit-net-v1\n";
  const int n = points.empty() ? 0 : static_cast<int>(points.front().size());
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "# n=" << n << ",count=" << points.size() << ",r=" << fmt(radius_target)
      << ",radius_empirical=" << fmt(radius_empirical) << "\n";
  for (const auto& p : points) {
    for (int i = 0; i < p.size(); ++i) out << (i ? "," : "") << fmt(p[i]);
    out << "\n";
  }
}

namespace {

double min_dist(const Vector& x, const std::vector<Vector>& net) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : net) best = std::min(best, (x - p).norm());
  return best;
}

/// k-center greedy over a fixed candidate pool until the pool is covered at
/// radius `cover`; appends to `net`, throwing past the point budget.
void greedy_cover(std::vector<Vector>& net, const std::vector<Vector>& pool, double cover,
                  std::size_t point_budget) {
  std::vector<double> dist(pool.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pool.size(); ++i) dist[i] = min_dist(pool[i], net);
  for (;;) {
    std::size_t far = 0;
    double far_dist = 0;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (dist[i] > far_dist) {
        far_dist = dist[i];
        far = i;
      }
    if (far_dist <= cover) return;
    if (net.size() >= point_budget)
      throw NetBudgetError("build_net: point budget exhausted; use a larger radius");
    net.push_back(pool[far]);
    for (std::size_t i = 0; i < pool.size(); ++i)
      dist[i] = std::min(dist[i], (pool[i] - net.back()).norm());
  }
}

std::size_t binomial_capped(int n, int s, std::size_t cap) {
  std::size_t result = 1;
  for (int i = 0; i < s; ++i) {
    result = result * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
    if (result > cap) return cap + 1;
  }
  return result;
}

}  // namespace

Net build_net(const SignalSet& set, double r, int probe_count, const SeedPlan& seed,
              std::size_t point_budget) {
  set.validate();
  if (!(r > 0)) throw std::invalid_argument("build_net: r must be positive");
  if (probe_count < 1) throw std::invalid_argument("build_net: probe_count must be >= 1");

  Net net;
  net.radius_target = r;
  SeedPlan pool_seed{seed.child_seed(0, stream_id::net_pool)};
  SeedPlan probe_seed{seed.child_seed(0, stream_id::net_probe)};

  if (set.kind == SignalSetKind::FiniteSet) {
    net.points = set.points;
  } else if (r >= set.radius) {
    // {0} covers any R-bounded star-shaped set at radius R <= r.
    net.points.push_back(Vector::Zero(set.dim));
  } else if (set.kind == SignalSetKind::SparseBall &&
             binomial_capped(set.dim, static_cast<int>(set.sparsity), point_budget) <=
                 point_budget / 2) {
    // Compose one net of the s-dimensional ball across every support.
    const int s = static_cast<int>(set.sparsity);
    const SignalSet ball = SignalSet::sparse_ball(s, s, set.radius);
    std::vector<Vector> base{Vector::Zero(s)};
    std::vector<Vector> pool(20000);
    for (std::size_t i = 0; i < pool.size(); ++i)
      pool[i] = sample_signal(ball, pool_seed, static_cast<std::uint64_t>(i));
    greedy_cover(base, pool, 0.9 * r, point_budget);

    net.points.push_back(Vector::Zero(set.dim));
    std::vector<int> comb(s);
    std::iota(comb.begin(), comb.end(), 0);
    for (;;) {
      for (const auto& bp : base) {
        if (bp.isZero(0)) continue;
        Vector p = Vector::Zero(set.dim);
        for (int i = 0; i < s; ++i) p[comb[i]] = bp[i];
        if (net.points.size() >= point_budget)
          throw NetBudgetError("build_net: point budget exhausted; use a larger radius");
        net.points.push_back(std::move(p));
      }
      int i = s - 1;
      while (i >= 0 && comb[i] == set.dim - s + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
    }
  } else {
    std::vector<Vector> pool(20000);
    for (std::size_t i = 0; i < pool.size(); ++i)
      pool[i] = sample_signal(set, pool_seed, static_cast<std::uint64_t>(i));
    net.points.push_back(Vector::Zero(set.dim));
    greedy_cover(net.points, pool, 0.9 * r, point_budget);
  }

  // Probe certification: fresh samples per round; uncovered probes are
  // absorbed and the certificate retried on a new batch.
  const int max_rounds = 40;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<Vector> probes(probe_count);
    SeedPlan round_seed{probe_seed.child_seed(static_cast<std::uint64_t>(round), stream_id::net_probe)};
    for (int i = 0; i < probe_count; ++i)
      probes[i] = sample_signal(set, round_seed, static_cast<std::uint64_t>(i));
    double worst = 0;
    for (const auto& p : probes) worst = std::max(worst, min_dist(p, net.points));
    if (worst <= r) {
      net.radius_empirical = worst;
      return net;
    }
    greedy_cover(net.points, probes, 0.9 * r, point_budget);
  }
  throw NetBudgetError("build_net: certification did not stabilize; use a larger radius");
}

int hamming_objective(const Matrix& A, const Vector& dither, const SignPattern& q,
                      const Vector& z) {
  if (static_cast<int>(q.size()) != A.rows() || dither.size() != A.rows() ||
      z.size() != A.cols())
    throw std::invalid_argument("hamming_objective: dimension mismatch");
  const Vector analog = A * z + dither;
  int mismatches = 0;
  for (int i = 0; i < analog.size(); ++i)
    if (sign_of(analog[i]) != q[i]) ++mismatches;
  return mismatches;
}

RecoveryResult hamming_recover_net(const Matrix& A, const Vector& dither,
                                   const SignPattern& q_corr, const Net& net) {
  if (net.points.empty()) throw std::invalid_argument("hamming_recover_net: empty net");
  RecoveryResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (const auto& z : net.points) {
    const int obj = hamming_objective(A, dither, q_corr, z);
    if (best.x_hat.size() == 0 ||
        candidate_better(obj, z, best.objective, best.x_hat)) {
      best.objective = obj;
      best.x_hat = z;
    }
  }
  best.meta.iterations = static_cast<int>(net.points.size());
  return best;
}

namespace {

struct SweepOutcome {
  int count = std::numeric_limits<int>::max();
  double t = 0;
};

/// Exact 1-d minimization of the piecewise-constant mismatch count
/// t -> d_H(q, sign(rest + col * t)) over [-b, b]. Candidate values are
/// segment midpoints (0 when the segment straddles it), never breakpoints,
/// so the sign convention at zero cannot bite.
SweepOutcome sweep_coordinate(const Vector& rest, const Vector& col, const SignPattern& q,
                              double b) {
  const int m = static_cast<int>(rest.size());
  SweepOutcome out;
  if (b <= 0) {
    int count = 0;
    for (int i = 0; i < m; ++i)
      if (sign_of(rest[i]) != q[i]) ++count;
    out.count = count;
    out.t = 0;
    return out;
  }

  std::vector<std::pair<double, int>> events;
  events.reserve(static_cast<std::size_t>(m));
  int count = 0;  // mismatches on the first open segment
  for (int i = 0; i < m; ++i) {
    if (col[i] == 0.0) {
      if (sign_of(rest[i]) != q[i]) ++count;
      continue;
    }
    const double ti = -rest[i] / col[i];
    const double left_val = rest[i] + col[i] * (-b);
    // Interior-limit sign just right of -b (exact zeros take the sign the
    // row has on the segment's interior).
    const std::int8_t left_sign = left_val != 0.0 ? sign_of(left_val)
                                                 : (col[i] > 0 ? std::int8_t{1} : std::int8_t{-1});
    if (left_sign != q[i]) ++count;
    if (ti > -b && ti < b) events.emplace_back(ti, i);
  }
  std::sort(events.begin(), events.end());

  auto consider = [&](double lo, double hi, int current) {
    if (!(hi > lo)) return;
    const double cand = (lo < 0.0 && 0.0 < hi) ? 0.0 : 0.5 * (lo + hi);
    if (current < out.count ||
        (current == out.count && (std::abs(cand) < std::abs(out.t) ||
                                  (std::abs(cand) == std::abs(out.t) && cand < out.t)))) {
      out.count = current;
      out.t = cand;
    }
  };

  double seg_lo = -b;
  for (std::size_t l = 0; l <= events.size(); ++l) {
    const double seg_hi = l < events.size() ? events[l].first : b;
    consider(seg_lo, seg_hi, count);
    if (l < events.size()) {
      const int i = events[l].second;
      const std::int8_t before = col[i] > 0 ? std::int8_t{-1} : std::int8_t{1};
      const std::int8_t after = static_cast<std::int8_t>(-before);
      count += (after != q[i] ? 1 : 0) - (before != q[i] ? 1 : 0);
      seg_lo = seg_hi;
    }
  }
  return out;
}

struct LocalState {
  Vector z;
  Vector analog;  // A z + dither
  int objective = 0;
};

void refresh(LocalState& state, const Matrix& A, const Vector& dither, const SignPattern& q) {
  state.analog = A * state.z + dither;
  state.objective = 0;
  for (int i = 0; i < state.analog.size(); ++i)
    if (sign_of(state.analog[i]) != q[i]) ++state.objective;
}

std::vector<int> support_of(const Vector& z) {
  std::vector<int> s;
  for (int i = 0; i < z.size(); ++i)
    if (z[i] != 0.0) s.push_back(i);
  return s;
}

}  // namespace

RecoveryResult hamming_recover_local(const Matrix& A, const Vector& dither,
                                     const SignPattern& q_corr, const SignalSet& descriptor,
                                     int restarts, int iters, const SeedPlan& seed,
                                     std::uint64_t trial,
                                     const std::optional<Vector>& warm_start) {
  descriptor.validate();
  if (descriptor.kind != SignalSetKind::SparseBall)
    throw std::invalid_argument("hamming_recover_local: descriptor must be a sparse ball");
  if (static_cast<int>(q_corr.size()) != A.rows() || dither.size() != A.rows())
    throw std::invalid_argument("hamming_recover_local: dimension mismatch");
  if (restarts < 0 || iters < 0)
    throw std::invalid_argument("hamming_recover_local: restarts/iters must be >= 0");

  const int n = static_cast<int>(A.cols());
  const int s = static_cast<int>(descriptor.sparsity);
  const double R = descriptor.radius;
  SeedPlan restart_seed{seed.child_seed(trial, stream_id::local_search)};

  // Warm start: top-s thresholding of A^T q scaled by lambda-hat/m (the
  // dither amplitude estimate), then clipped into the ball.
  Vector z0;
  if (warm_start) {
    if (warm_start->size() != n)
      throw std::invalid_argument("hamming_recover_local: warm start dimension mismatch");
    z0 = *warm_start;
  } else {
    Vector qv(q_corr.size());
    for (std::size_t i = 0; i < q_corr.size(); ++i) qv[static_cast<int>(i)] = q_corr[i];
    const Vector u = A.transpose() * qv;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(u[a]) > std::abs(u[b]); });
    double lambda_hat = dither.size() > 0 ? dither.cwiseAbs().maxCoeff() : 0.0;
    if (lambda_hat == 0.0) lambda_hat = 1.0;
    z0 = Vector::Zero(n);
    for (int i = 0; i < s; ++i) z0[order[i]] = lambda_hat * u[order[i]] / A.rows();
    z0 = project_l2(z0, R);
  }

  RecoveryResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.meta.restarts = restarts;

  for (int run = 0; run <= restarts; ++run) {
    LocalState state;
    state.z = run == 0 ? z0
                       : sample_signal(descriptor, restart_seed, static_cast<std::uint64_t>(run));
    refresh(state, A, dither, q_corr);

    int used = 0;
    bool converged = false;
    for (int it = 0; it < iters; ++it) {
      ++used;
      bool improved = false;

      // Within-support refinement: exact sweep of each active coordinate.
      for (int j : support_of(state.z)) {
        const double zj = state.z[j];
        const double b = std::sqrt(std::max(0.0, R * R - state.z.squaredNorm() + zj * zj));
        const Vector rest = state.analog - A.col(j) * zj;
        const SweepOutcome sw = sweep_coordinate(rest, A.col(j), q_corr, b);
        if (sw.count < state.objective) {
          state.z[j] = sw.t;
          refresh(state, A, dither, q_corr);
          improved = true;
        }
      }

      // Support swaps: drop one active coordinate and sweep one inactive
      // coordinate exactly. When the support is below s, a pure insertion
      // (drop nothing) is also tried.
      const std::vector<int> support = support_of(state.z);
      if (n > static_cast<int>(support.size())) {
        int best_count = state.objective;
        int best_j = -1, best_k = -1;
        double best_t = 0;
        bool found = false;
        std::vector<std::uint8_t> active(n, 0);
        for (int j : support) active[j] = 1;
        std::vector<int> drops = support;
        if (static_cast<int>(support.size()) < s) drops.push_back(-1);
        for (int j : drops) {
          const Vector rest = j >= 0 ? Vector(state.analog - A.col(j) * state.z[j])
                                     : state.analog;
          const double zj = j >= 0 ? state.z[j] : 0.0;
          const double norm_wo_sq = std::max(0.0, state.z.squaredNorm() - zj * zj);
          const double b = std::sqrt(std::max(0.0, R * R - norm_wo_sq));
          for (int k = 0; k < n; ++k) {
            if (active[k] || k == j) continue;
            const SweepOutcome sw = sweep_coordinate(rest, A.col(k), q_corr, b);
            if (sw.count < best_count) {
              best_count = sw.count;
              best_j = j;
              best_k = k;
              best_t = sw.t;
              found = true;
            }
          }
        }
        if (found) {
          if (best_j >= 0) state.z[best_j] = 0;
          state.z[best_k] = best_t;
          refresh(state, A, dither, q_corr);
          improved = true;
        }
      }

      if (!improved) {
        converged = true;
        break;
      }
    }

    if (candidate_better(state.objective, state.z, best.objective, best.x_hat.size() ? best.x_hat : state.z) ||
        best.x_hat.size() == 0) {
      best.objective = state.objective;
      best.x_hat = state.z;
      best.meta.iterations = used;
      best.meta.converged = converged || iters == 0;
    }
  }
  return best;
}

}  // namespace onebit
