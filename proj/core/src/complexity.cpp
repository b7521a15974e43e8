#include "onebit/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

namespace onebit {

TheoremConstants TheoremConstants::for_lambda(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("TheoremConstants: lambda must be positive");
  TheoremConstants c;
  c.c_tau = 1.0 / (2.0 * lambda);
  c.C_tau = 1.0 / lambda;
  return c;
}

namespace {

double soft_threshold_norm(const Vector& g, double t) {
  double sum = 0;
  for (int i = 0; i < g.size(); ++i) {
    const double v = std::max(std::abs(g[i]) - t, 0.0);
    sum += v * v;
  }
  return std::sqrt(sum);
}

/// sqrt(s)*t + ||soft(g,t)||_2, the infimal-convolution objective of the
/// l1/l2 intersection; convex and piecewise smooth in t.
double l1l2_objective(const Vector& g, double sqrt_s, double t) {
  return sqrt_s * t + soft_threshold_norm(g, t);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

double support_function(const SignalSet& set, const Vector& g) {
  set.validate();
  if (g.size() != set.dim) throw std::invalid_argument("support_function: dimension mismatch");
  switch (set.kind) {
    case SignalSetKind::SparseBall: {
      const int s = static_cast<int>(set.sparsity);
      std::vector<double> squares(set.dim);
      for (int i = 0; i < set.dim; ++i) squares[i] = g[i] * g[i];
      std::nth_element(squares.begin(), squares.begin() + (s - 1), squares.end(),
                       std::greater<double>());
      double sum = 0;
      for (int i = 0; i < s; ++i) sum += squares[i];
      return set.radius * std::sqrt(sum);
    }
    case SignalSetKind::L1L2Ball: {
      const double sqrt_s = std::sqrt(set.sparsity);
      std::vector<double> breaks(set.dim + 1, 0.0);
      for (int i = 0; i < set.dim; ++i) breaks[i + 1] = std::abs(g[i]);
      std::sort(breaks.begin(), breaks.end());
      double best = l1l2_objective(g, sqrt_s, breaks.front());
      std::size_t best_idx = 0;
      for (std::size_t i = 1; i < breaks.size(); ++i) {
        const double v = l1l2_objective(g, sqrt_s, breaks[i]);
        if (v < best) {
          best = v;
          best_idx = i;
        }
      }
      const double lo = breaks[best_idx > 0 ? best_idx - 1 : 0];
      const double hi = breaks[std::min(best_idx + 1, breaks.size() - 1)];
      if (hi > lo) {
        const double refined = golden_section_min(
            [&](double t) { return l1l2_objective(g, sqrt_s, t); }, lo, hi, 1e-10);
        best = std::min(best, refined);
      }
      return set.radius * best;
    }
    case SignalSetKind::FiniteSet: {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& p : set.points) best = std::max(best, g.dot(p));
      return best;
    }
  }
  return 0;
}

WidthEstimate gaussian_mean_width(const SignalSet& set, int n_mc, const SeedPlan& seed) {
  if (n_mc < 2) throw std::invalid_argument("gaussian_mean_width: n_mc must be >= 2");
  RandomStream rng = seed.stream(0, stream_id::gaussian_width);
  Vector g(set.dim);
  double sum = 0, sum_sq = 0;
  for (int k = 0; k < n_mc; ++k) {
    for (int i = 0; i < set.dim; ++i) g[i] = rng.gauss();
    const double v = std::max(support_function(set, g), support_function(set, -g));
    sum += v;
    sum_sq += v * v;
  }
  WidthEstimate est;
  est.n_mc = n_mc;
  est.value = sum / n_mc;
  const double var = std::max(0.0, (sum_sq - sum * sum / n_mc) / (n_mc - 1));
  est.std_error = std::sqrt(var / n_mc);
  return est;
}

WidthEstimate empirical_width(const SignalSet& set, const MeasurementEnsemble& ensemble,
                              int n_mc, const SeedPlan& seed) {
  if (n_mc < 2) throw std::invalid_argument("empirical_width: n_mc must be >= 2");
  ensemble.validate();
  if (ensemble.dim != set.dim)
    throw std::invalid_argument("empirical_width: descriptor and ensemble dimensions differ");
  SeedPlan inner{seed.child_seed(0, stream_id::empirical_width)};
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(ensemble.rows));
  double sum = 0, sum_sq = 0;
  for (int k = 0; k < n_mc; ++k) {
    const Matrix X = sample_matrix(ensemble, inner, static_cast<std::uint64_t>(k));
    RandomStream eps = inner.stream(static_cast<std::uint64_t>(k), stream_id::empirical_width);
    Vector v = Vector::Zero(set.dim);
    for (int i = 0; i < ensemble.rows; ++i) v += static_cast<double>(eps.rademacher()) * X.row(i).transpose();
    v *= inv_sqrt_m;
    const double w = std::max(support_function(set, v), support_function(set, -v));
    sum += w;
    sum_sq += w * w;
  }
  WidthEstimate est;
  est.n_mc = n_mc;
  est.value = sum / n_mc;
  const double var = std::max(0.0, (sum_sq - sum * sum / n_mc) / (n_mc - 1));
  est.std_error = std::sqrt(var / n_mc);
  return est;
}

namespace {

/// Width estimates used by the Sudakov covering bound, cached per descriptor.
double cached_width(const SignalSet& set) {
  static std::mutex mutex;
  static std::map<std::string, double> cache;
  char key[160];
  std::snprintf(key, sizeof key, "%d|%d|%.17g|%.17g", static_cast<int>(set.kind), set.dim,
                set.sparsity, set.radius);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double w = gaussian_mean_width(set, 4000, SeedPlan{0xC0FFEEu}).value;
  cache.emplace(key, w);
  return w;
}

}  // namespace

double covering_bound(const SignalSet& set, double r) {
  set.validate();
  if (!(r > 0)) throw std::invalid_argument("covering_bound: r must be positive");
  switch (set.kind) {
    case SignalSetKind::SparseBall: {
      const double s = set.sparsity;
      const double scale = std::min(r / set.radius, 1.0);
      return s * std::log(std::exp(1.0) * set.dim / (s * scale));
    }
    case SignalSetKind::FiniteSet:
      return std::log(static_cast<double>(set.points.size()));
    case SignalSetKind::L1L2Ball: {
      const double w = cached_width(set);
      return (w / r) * (w / r);
    }
  }
  return 0;
}

SignalSet difference_intersection(const SignalSet& set, double r) {
  set.validate();
  if (!(r > 0)) throw std::invalid_argument("difference_intersection: r must be positive");
  switch (set.kind) {
    case SignalSetKind::SparseBall: {
      const int s2 = std::min(2 * static_cast<int>(set.sparsity), set.dim);
      return SignalSet::sparse_ball(s2, set.dim, std::min(r, 2.0 * set.radius));
    }
    case SignalSetKind::L1L2Ball: {
      const double rc = std::min(r, 2.0 * set.radius);
      const double l1 = 2.0 * set.l1_radius();
      const double s_eff = std::clamp((l1 / rc) * (l1 / rc), 1.0, static_cast<double>(set.dim));
      return SignalSet::l1l2_ball(s_eff, set.dim, rc);
    }
    case SignalSetKind::FiniteSet: {
      std::vector<Vector> diffs;
      diffs.push_back(Vector::Zero(set.dim));
      for (const auto& p : set.points)
        for (const auto& q : set.points) {
          const Vector d = p - q;
          if (d.norm() <= r && d.norm() > 0) diffs.push_back(d);
        }
      return SignalSet::finite_set(std::move(diffs));
    }
  }
  return set;
}

SignalSet convex_hull_descriptor(const SignalSet& set) {
  set.validate();
  if (set.kind == SignalSetKind::SparseBall)
    return SignalSet::l1l2_ball(set.sparsity, set.dim, set.radius);
  return set;
}

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::TessSubgaussian: return "tess-subgaussian";
    case TheoremId::TessHeavyTailed: return "tess-heavy";
    case TheoremId::RecoverSubgaussian: return "recover-subgaussian";
    case TheoremId::RecoverHeavyTailed: return "recover-heavy";
    case TheoremId::ConvexSubgaussian: return "convex";
  }
  return "?";
}

TheoremId theorem_from_string(const std::string& name) {
  if (name == "tess-subgaussian") return TheoremId::TessSubgaussian;
  if (name == "tess-heavy") return TheoremId::TessHeavyTailed;
  if (name == "recover-subgaussian") return TheoremId::RecoverSubgaussian;
  if (name == "recover-heavy") return TheoremId::RecoverHeavyTailed;
  if (name == "convex") return TheoremId::ConvexSubgaussian;
  throw std::invalid_argument("unknown theorem id: " + name);
}

namespace {

double resolve_lambda(TheoremId theorem, const SufficientMParams& p, const TheoremConstants& c) {
  if (p.lambda > 0) return p.lambda;
  switch (theorem) {
    case TheoremId::TessSubgaussian:
    case TheoremId::TessHeavyTailed:
      return c.c0 * p.R;
    case TheoremId::RecoverSubgaussian:
    case TheoremId::RecoverHeavyTailed:
      return c.c0 * (p.R + p.sigma) + p.rho;
    case TheoremId::ConvexSubgaussian:
      return c.c0 * (p.sigma + p.R) * std::sqrt(std::max(1.0, std::log(std::exp(1.0) / p.rho)));
  }
  return p.R;
}

const SignalSet& require_descriptor(const SufficientMParams& p, const char* what) {
  if (!p.descriptor)
    throw std::invalid_argument(std::string("sufficient_m: ") + what +
                                " needed but no descriptor supplied");
  return *p.descriptor;
}

double resolve_width_sq_T(const SufficientMParams& p) {
  if (p.width_sq_T) return *p.width_sq_T;
  const double w =
      gaussian_mean_width(require_descriptor(p, "width of T"), p.width_mc, SeedPlan{p.width_seed})
          .value;
  return w * w;
}

double resolve_width(const std::optional<double>& supplied, const SignalSet& set,
                     const SufficientMParams& p) {
  if (supplied) return *supplied;
  return gaussian_mean_width(set, p.width_mc, SeedPlan{p.width_seed}).value;
}

double resolve_log_covering(const SufficientMParams& p, const char* what, double r) {
  if (p.log_covering) return *p.log_covering;
  return covering_bound(require_descriptor(p, what), r);
}

long long ceil_positive(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("sufficient_m: bound is not finite");
  return std::max(1LL, static_cast<long long>(std::ceil(v)));
}

}  // namespace

SufficientM sufficient_m(TheoremId theorem, const SufficientMParams& params,
                         const TheoremConstants& constants) {
  const auto& p = params;
  const auto& c = constants;
  if (!(p.R > 0)) throw std::invalid_argument("sufficient_m: R must be positive");
  if (!(p.rho > 0)) throw std::invalid_argument("sufficient_m: rho must be positive");
  if (theorem == TheoremId::TessSubgaussian && !(p.rho < p.R))
    throw std::invalid_argument("sufficient_m: tessellation bound requires 0 < rho < R");

  SufficientM out;
  out.lambda_used = resolve_lambda(theorem, p, c);
  const double lambda = out.lambda_used;
  const double log_term = std::log(std::exp(1.0) * lambda / p.rho);
  if (theorem != TheoremId::TessHeavyTailed && !(log_term > 0))
    throw std::invalid_argument("sufficient_m: rho too large relative to lambda");

  switch (theorem) {
    case TheoremId::TessSubgaussian: {
      out.r_internal = c.c1 * p.rho / std::sqrt(log_term);
      const double wsq = resolve_width_sq_T(p);
      const double bound =
          c.c1 * p.R * std::log(std::exp(1.0) * p.R / p.rho) / (p.rho * p.rho * p.rho) * wsq;
      out.m = ceil_positive(bound);
      return out;
    }
    case TheoremId::TessHeavyTailed: {
      out.r_internal = c.c1 * p.rho * p.rho / p.R;
      const double r = out.r_internal;
      auto rhs = [&](double E) {
        const double first = (p.R * E / (p.rho * p.rho));
        double logN;
        if (p.log_covering) {
          logN = *p.log_covering;
        } else {
          const SignalSet U = convex_hull_descriptor(require_descriptor(p, "covering of U"));
          logN = covering_bound(U, r);
        }
        return c.c2 * (first * first + p.R * logN / p.rho);
      };
      if (p.empirical_width_value) {
        out.m = ceil_positive(rhs(*p.empirical_width_value));
        return out;
      }
      std::function<double(long long)> efn = p.empirical_width_fn;
      if (!efn) {
        if (!p.ensemble)
          throw std::invalid_argument(
              "sufficient_m: heavy-tailed bound needs an empirical width value, callable, or ensemble");
        const SignalSet U = convex_hull_descriptor(require_descriptor(p, "empirical width of U_r"));
        const SignalSet Ur = difference_intersection(U, r);
        efn = [&, Ur](long long m) {
          MeasurementEnsemble e = *p.ensemble;
          e.rows = static_cast<int>(m);
          return empirical_width(Ur, e, p.width_mc, SeedPlan{p.width_seed}).value;
        };
      }
      // The empirical width depends on m, so the condition is implicit;
      // doubling search returns the first power of two that satisfies it.
      for (long long m = 16; m <= (1LL << 40); m *= 2) {
        if (static_cast<double>(m) >= rhs(efn(m))) {
          out.m = m;
          return out;
        }
      }
      throw std::runtime_error("sufficient_m: doubling search did not terminate");
    }
    case TheoremId::RecoverSubgaussian: {
      out.r_internal = c.c1 * p.rho / std::sqrt(log_term);
      const double r = out.r_internal;
      double width;
      if (p.width_T_r) {
        width = *p.width_T_r;
      } else {
        const SignalSet Tr = difference_intersection(require_descriptor(p, "width of T_r"), r);
        width = resolve_width(std::nullopt, Tr, p);
      }
      const double logN = resolve_log_covering(p, "covering of T", r);
      const double bound =
          c.c2 * lambda * (width * width / (p.rho * p.rho * p.rho) + logN / p.rho);
      out.m = ceil_positive(bound);
      return out;
    }
    case TheoremId::RecoverHeavyTailed: {
      out.r_internal = c.c1 * p.rho * p.rho / lambda;
      const double r = out.r_internal;
      auto rhs = [&](double E) {
        const double first = lambda * E / (p.rho * p.rho);
        const double logN = resolve_log_covering(p, "covering of T", r);
        return c.c2 * (first * first + lambda * logN / p.rho);
      };
      if (p.empirical_width_value) {
        out.m = ceil_positive(rhs(*p.empirical_width_value));
        return out;
      }
      std::function<double(long long)> efn = p.empirical_width_fn;
      if (!efn) {
        if (!p.ensemble)
          throw std::invalid_argument(
              "sufficient_m: heavy-tailed bound needs an empirical width value, callable, or ensemble");
        const SignalSet Tr = difference_intersection(require_descriptor(p, "empirical width of T_r"), r);
        efn = [&, Tr](long long m) {
          MeasurementEnsemble e = *p.ensemble;
          e.rows = static_cast<int>(m);
          return empirical_width(Tr, e, p.width_mc, SeedPlan{p.width_seed}).value;
        };
      }
      for (long long m = 16; m <= (1LL << 40); m *= 2) {
        if (static_cast<double>(m) >= rhs(efn(m))) {
          out.m = m;
          return out;
        }
      }
      throw std::runtime_error("sufficient_m: doubling search did not terminate");
    }
    case TheoremId::ConvexSubgaussian: {
      out.r_internal = c.c1 * p.rho / log_term;
      const double r = out.r_internal;
      double width;
      if (p.width_U_rho) {
        width = *p.width_U_rho;
      } else {
        const SignalSet U = convex_hull_descriptor(require_descriptor(p, "width of U_rho"));
        width = resolve_width(std::nullopt, difference_intersection(U, p.rho), p);
      }
      const double logN = resolve_log_covering(p, "covering of T", r);
      const double first = lambda * width / (p.rho * p.rho);
      const double bound = c.c2 * (first * first + lambda * lambda * logN / (p.rho * p.rho));
      out.m = ceil_positive(bound);
      return out;
    }
  }
  throw std::logic_error("sufficient_m: unreachable");
}

}  // namespace onebit
