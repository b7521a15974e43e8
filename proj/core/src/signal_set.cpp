#include "onebit/signal_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace onebit {

SignalSet SignalSet::sparse_ball(int s, int n, double R) {
  SignalSet set;
  set.kind = SignalSetKind::SparseBall;
  set.sparsity = static_cast<double>(s);
  set.dim = n;
  set.radius = R;
  set.validate();
  return set;
}

SignalSet SignalSet::l1l2_ball(double s, int n, double R) {
  SignalSet set;
  set.kind = SignalSetKind::L1L2Ball;
  set.sparsity = s;
  set.dim = n;
  set.radius = R;
  set.validate();
  return set;
}

SignalSet SignalSet::finite_set(std::vector<Vector> pts) {
  SignalSet set;
  set.kind = SignalSetKind::FiniteSet;
  set.points = std::move(pts);
  if (set.points.empty()) throw std::invalid_argument("finite_set: needs at least one point");
  set.dim = static_cast<int>(set.points.front().size());
  double max_norm = 0;
  for (const auto& p : set.points) {
    if (p.size() != set.dim) throw std::invalid_argument("finite_set: inconsistent point dimensions");
    max_norm = std::max(max_norm, p.norm());
  }
  set.radius = max_norm;
  set.sparsity = static_cast<double>(set.dim);
  return set;
}

void SignalSet::validate() const {
  if (dim < 1) throw std::invalid_argument("SignalSet: dim must be >= 1");
  switch (kind) {
    case SignalSetKind::SparseBall: {
      if (sparsity < 1 || sparsity > dim)
        throw std::invalid_argument("SignalSet: sparsity must satisfy 1 <= s <= n");
      if (sparsity != std::floor(sparsity))
        throw std::invalid_argument("SignalSet: SparseBall sparsity must be integral");
      if (!(radius > 0)) throw std::invalid_argument("SignalSet: radius must be positive");
      break;
    }
    case SignalSetKind::L1L2Ball: {
      if (!(sparsity >= 1) || sparsity > dim)
        throw std::invalid_argument("SignalSet: effective sparsity must satisfy 1 <= s <= n");
      if (!(radius > 0)) throw std::invalid_argument("SignalSet: radius must be positive");
      break;
    }
    case SignalSetKind::FiniteSet: {
      if (points.empty()) throw std::invalid_argument("SignalSet: FiniteSet needs points");
      for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("SignalSet: FiniteSet dimension mismatch");
      break;
    }
  }
}

std::string SignalSet::describe() const {
  std::ostringstream out;
  switch (kind) {
    case SignalSetKind::SparseBall:
      out << "sparse-ball(s=" << static_cast<int>(sparsity) << ",n=" << dim << ",R=" << radius << ")";
      break;
    case SignalSetKind::L1L2Ball:
      out << "l1l2-ball(s=" << sparsity << ",n=" << dim << ",R=" << radius << ")";
      break;
    case SignalSetKind::FiniteSet:
      out << "finite-set(k=" << points.size() << ",n=" << dim << ")";
      break;
  }
  return out.str();
}

bool membership(const SignalSet& set, const Vector& x, double tol) {
  if (x.size() != set.dim) throw std::invalid_argument("membership: dimension mismatch");
  switch (set.kind) {
    case SignalSetKind::SparseBall: {
      int nonzeros = 0;
      for (int i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > tol) ++nonzeros;
      return nonzeros <= static_cast<int>(set.sparsity) && x.norm() <= set.radius + tol;
    }
    case SignalSetKind::L1L2Ball:
      return x.lpNorm<1>() <= set.l1_radius() + tol && x.norm() <= set.radius + tol;
    case SignalSetKind::FiniteSet: {
      for (const auto& p : set.points)
        if ((x - p).norm() <= tol) return true;
      return false;
    }
  }
  return false;
}

Vector sample_signal(const SignalSet& set, const SeedPlan& seed, std::uint64_t trial) {
  set.validate();
  RandomStream rng = seed.stream(trial, stream_id::signal);
  Vector x = Vector::Zero(set.dim);
  switch (set.kind) {
    case SignalSetKind::SparseBall: {
      const int s = static_cast<int>(set.sparsity);
      // Uniform support of size s via partial Fisher-Yates.
      std::vector<int> idx(set.dim);
      std::iota(idx.begin(), idx.end(), 0);
      for (int i = 0; i < s; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(set.dim - i)));
        std::swap(idx[i], idx[j]);
      }
      Vector dir(s);
      double norm = 0;
      do {
        for (int i = 0; i < s; ++i) dir[i] = rng.gauss();
        norm = dir.norm();
      } while (norm == 0.0);
      const double r = set.radius * (1.0 - rng.u01());  // uniform in (0, R]
      for (int i = 0; i < s; ++i) x[idx[i]] = r * dir[i] / norm;
      break;
    }
    case SignalSetKind::L1L2Ball: {
      // Uniform draw in the l2 ball, pulled back into the l1 constraint by
      // rescaling when needed (the scaling keeps both norms feasible).
      double norm = 0;
      do {
        for (int i = 0; i < set.dim; ++i) x[i] = rng.gauss();
        norm = x.norm();
      } while (norm == 0.0);
      const double r = set.radius * std::pow(rng.u01(), 1.0 / set.dim);
      x *= r / norm;
      const double l1 = x.lpNorm<1>();
      if (l1 > set.l1_radius()) x *= set.l1_radius() / l1;
      break;
    }
    case SignalSetKind::FiniteSet: {
      x = set.points[rng.below(set.points.size())];
      break;
    }
  }
  if (!membership(set, x, 1e-9))
    throw std::logic_error("sample_signal: generated point violates membership");
  return x;
}

}  // namespace onebit
