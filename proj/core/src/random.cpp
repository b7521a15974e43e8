#include "onebit/random.hpp"

#include <cmath>
#include <stdexcept>

namespace onebit {

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomStream::below: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double RandomStream::gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * u01() - 1.0;
    v = 2.0 * u01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double RandomStream::exponential() {
  // 1 - u01() lies in (0, 1].
  return -std::log(1.0 - u01());
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("RandomStream::gamma: shape must be positive");
  if (shape < 1.0) {
    const double u = 1.0 - u01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = gauss();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = u01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::student_t(double df) {
  if (!(df > 0.0)) throw std::invalid_argument("RandomStream::student_t: df must be positive");
  const double z = gauss();
  const double chi2 = 2.0 * gamma(0.5 * df);
  return z / std::sqrt(chi2 / df);
}

}  // namespace onebit
