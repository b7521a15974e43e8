#include "onebit/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace onebit {

namespace {

void check_pair_dims(const Matrix& A, const Vector& dither, const Vector& x, const Vector& y) {
  if (A.cols() != x.size() || A.cols() != y.size())
    throw std::invalid_argument("tessellation: signal dimension does not match A");
  if (A.rows() != dither.size())
    throw std::invalid_argument("tessellation: dither length does not match A");
}

}  // namespace

int separation_count(const Matrix& A, const Vector& dither, const Vector& x, const Vector& y) {
  check_pair_dims(A, dither, x, y);
  const Vector zx = A * x + dither;
  const Vector zy = A * y + dither;
  int count = 0;
  for (int i = 0; i < zx.size(); ++i)
    if (sign_of(zx[i]) != sign_of(zy[i])) ++count;
  return count;
}

MarginSeparationSet margin_separation_set(const Matrix& A, const Vector& dither,
                                          const Vector& x, const Vector& y, double theta) {
  check_pair_dims(A, dither, x, y);
  if (theta < 0) throw std::invalid_argument("margin_separation_set: theta must be >= 0");
  const Vector zx = A * x + dither;
  const Vector zy = A * y + dither;
  const double margin = theta * (x - y).norm();
  MarginSeparationSet set;
  set.theta = theta;
  for (int i = 0; i < zx.size(); ++i) {
    if (sign_of(zx[i]) != sign_of(zy[i]) && std::abs(zx[i]) >= margin && std::abs(zy[i]) >= margin)
      set.indices.push_back(i);
  }
  return set;
}

MarginSeparationSet noisy_margin_separation_set(const Matrix& A, const Vector& dither,
                                                const Vector& noise, const Vector& x,
                                                const Vector& y, double theta) {
  check_pair_dims(A, dither, x, y);
  if (A.rows() != noise.size())
    throw std::invalid_argument("noisy_margin_separation_set: noise length does not match A");
  if (theta < 0) throw std::invalid_argument("noisy_margin_separation_set: theta must be >= 0");
  const Vector zx = A * x + noise + dither;
  const Vector zy = A * y + dither;
  const double margin = theta * (x - y).norm();
  MarginSeparationSet set;
  set.theta = theta;
  for (int i = 0; i < zx.size(); ++i) {
    if (sign_of(zx[i]) != sign_of(zy[i]) && std::abs(zx[i]) >= margin && std::abs(zy[i]) >= margin)
      set.indices.push_back(i);
  }
  return set;
}

double dither_separation_kernel(double z_x, double z_y, double lambda) {
  const double lo = std::min(-z_x, -z_y);
  const double hi = std::max(-z_x, -z_y);
  const double len = std::max(0.0, std::min(hi, lambda) - std::max(lo, -lambda));
  return len / (2.0 * lambda);
}

SeparationProbability separation_probability(const MeasurementEnsemble& ensemble,
                                             const Vector& x, const Vector& y,
                                             int n_mc, const SeedPlan& seed) {
  ensemble.validate();
  if (n_mc < 1) throw std::invalid_argument("separation_probability: n_mc must be >= 1");
  if (x.size() != ensemble.dim || y.size() != ensemble.dim)
    throw std::invalid_argument("separation_probability: dimension mismatch");
  // One row per draw; reuse the matrix sampler so the row law is identical.
  MeasurementEnsemble row = ensemble;
  row.rows = 1;
  SeedPlan inner{seed.child_seed(0, stream_id::separation_mc)};
  double sum = 0, sum_sq = 0;
  for (int k = 0; k < n_mc; ++k) {
    const Matrix X = sample_matrix(row, inner, static_cast<std::uint64_t>(k));
    const double z_x = X.row(0).dot(x);
    const double z_y = X.row(0).dot(y);
    const double p = dither_separation_kernel(z_x, z_y, ensemble.lambda);
    sum += p;
    sum_sq += p * p;
  }
  SeparationProbability out;
  out.estimate = sum / n_mc;
  if (n_mc > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n_mc) / (n_mc - 1));
    out.std_error = std::sqrt(var / n_mc);
  }
  return out;
}

MetricChain metric_chain(const Vector& x, const Vector& y, double r, const SignalSet& set) {
  if (!(r > 0)) throw std::invalid_argument("metric_chain: r must be positive");
  if (x.size() != set.dim || y.size() != set.dim)
    throw std::invalid_argument("metric_chain: dimension mismatch");
  // Inputs may live in the stated superset (e.g. chains between 2s-sparse
  // points are fine); only the looser of the norm constraints is enforced.
  const double bound = std::max({set.radius, x.norm(), y.norm()});
  if (x.norm() > bound + 1e-9 || y.norm() > bound + 1e-9)
    throw std::invalid_argument("metric_chain: endpoints outside the descriptor scale");

  MetricChain chain;
  const double dist = (x - y).norm();
  if (dist <= r) {
    chain.step = dist;
    chain.gamma = dist / r;
    return chain;
  }
  const int steps = static_cast<int>(std::ceil(dist / r));
  chain.step = dist / steps;
  chain.gamma = chain.step / r;
  chain.points.reserve(steps - 1);
  for (int i = 1; i < steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    chain.points.push_back(x + t * (y - x));
  }
  return chain;
}

bool stability_predicate(const Vector& X, double tau, const Vector& v, const Vector& w,
                         const Vector& x, const Vector& y, double theta, double r_prime) {
  if (X.size() != v.size() || X.size() != w.size() || X.size() != x.size() || X.size() != y.size())
    throw std::invalid_argument("stability_predicate: dimension mismatch");
  const double vw = (v - w).norm();
  if (vw < r_prime)
    throw std::invalid_argument("stability_predicate: requires ||w - v|| >= r_prime");

  const double side_v = X.dot(v) + tau;
  const double side_w = X.dot(w) + tau;
  const double margin = theta * vw;
  const bool well_separated = sign_of(side_v) != sign_of(side_w) &&
                              std::abs(side_v) >= margin && std::abs(side_w) >= margin;
  const bool perturbations_small = std::abs(X.dot(x - v)) <= theta * r_prime / 3.0 &&
                                   std::abs(X.dot(y - w)) <= theta * r_prime / 3.0;
  if (!(well_separated && perturbations_small)) return false;

  const double side_x = X.dot(x) + tau;
  const double side_y = X.dot(y) + tau;
  if (sign_of(side_x) == sign_of(side_y))
    throw std::logic_error("stability_predicate: hypotheses held but x, y are not separated");
  return true;
}

double spearman_rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) return 0;
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return 0;
  return cov / std::sqrt(va * vb);
}

TessellationReport tessellation_audit(const Matrix& A, const Vector& dither,
                                      const std::vector<std::pair<Vector, Vector>>& pairs,
                                      double rho, double lambda,
                                      const std::vector<double>& theta_list) {
  const int m = static_cast<int>(A.rows());
  TessellationReport report;
  report.thetas = theta_list;
  report.rho = rho;
  report.lambda = lambda;
  report.pairs.reserve(pairs.size());

  std::vector<double> fractions, distances;
  report.ratio_min = std::numeric_limits<double>::infinity();
  report.ratio_max = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    PairStats stats;
    stats.distance = (x - y).norm();
    stats.hamming_fraction = m > 0 ? static_cast<double>(separation_count(A, dither, x, y)) / m : 0.0;
    for (double theta : theta_list)
      stats.margin_counts.push_back(margin_separation_set(A, dither, x, y, theta).count());
    fractions.push_back(stats.hamming_fraction);
    distances.push_back(stats.distance);
    if (stats.distance >= rho) {
      const double ratio = stats.hamming_fraction / (stats.distance / lambda);
      report.ratio_min = std::min(report.ratio_min, ratio);
      report.ratio_max = std::max(report.ratio_max, ratio);
      ++report.pairs_in_summary;
    }
    report.pairs.push_back(std::move(stats));
  }
  if (report.pairs_in_summary == 0) {
    report.ratio_min = 0;
    report.ratio_max = 0;
  }
  report.rank_correlation = pairs.size() >= 2 ? spearman_rank_correlation(fractions, distances) : 0.0;
  return report;
}

void TessellationReport::write_csv(std::ostream& out) const {
  out << "# onebit-audit-v1\n";
  out << "pair_id,distance,hamming_fraction";
  for (double theta : thetas) out << ",margin_count_t" << theta;
  out << "\n";
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out << i << ',' << fmt(pairs[i].distance) << ',' << fmt(pairs[i].hamming_fraction);
    for (int c : pairs[i].margin_counts) out << ',' << c;
    out << "\n";
  }
  out << "summary,ratio_min=" << fmt(ratio_min) << ",ratio_max=" << fmt(ratio_max)
      << ",pairs_used=" << pairs_in_summary << ",rank_correlation=" << fmt(rank_correlation)
      << "\n";
}

}  // namespace onebit
