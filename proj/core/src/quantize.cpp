#include "onebit/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace onebit {

std::string to_string(CorruptionStrategy s) {
  switch (s) {
    case CorruptionStrategy::RandomFlip: return "random";
    case CorruptionStrategy::AdversarialLargestMargin: return "adversarial-largest";
    case CorruptionStrategy::AdversarialSmallestMargin: return "adversarial-smallest";
  }
  return "?";
}

CorruptionStrategy corruption_strategy_from_string(const std::string& name) {
  if (name == "random") return CorruptionStrategy::RandomFlip;
  if (name == "adversarial-largest") return CorruptionStrategy::AdversarialLargestMargin;
  if (name == "adversarial-smallest") return CorruptionStrategy::AdversarialSmallestMargin;
  throw std::invalid_argument("unknown corruption strategy: " + name);
}

QuantizedObservation one_bit_measure(const Matrix& A, const Vector& x,
                                     const Vector& dither, const Vector& noise) {
  if (A.cols() != x.size()) throw std::invalid_argument("one_bit_measure: A and x disagree");
  if (A.rows() != dither.size() || A.rows() != noise.size())
    throw std::invalid_argument("one_bit_measure: dither/noise length must equal rows of A");
  QuantizedObservation obs;
  obs.analog = A * x + noise + dither;
  const int m = static_cast<int>(obs.analog.size());
  obs.q.resize(m);
  for (int i = 0; i < m; ++i) obs.q[i] = sign_of(obs.analog[i]);
  obs.corruption_mask.assign(m, 0);
  obs.beta_actual = 0;
  return obs;
}

SignPattern quantize_pattern(const Matrix& A, const Vector& z, const Vector& dither) {
  if (A.cols() != z.size() || A.rows() != dither.size())
    throw std::invalid_argument("quantize_pattern: dimension mismatch");
  const Vector analog = A * z + dither;
  SignPattern q(analog.size());
  for (int i = 0; i < analog.size(); ++i) q[i] = sign_of(analog[i]);
  return q;
}

QuantizedObservation corrupt_bits(const QuantizedObservation& obs, double beta,
                                  CorruptionStrategy strategy, const SeedPlan& seed,
                                  std::uint64_t trial) {
  if (beta < 0 || beta > 1) throw std::invalid_argument("corrupt_bits: beta must be in [0,1]");
  const int m = obs.m();
  const int flips = static_cast<int>(std::floor(beta * m));
  QuantizedObservation out = obs;
  out.corruption_mask.assign(m, 0);
  out.beta_actual = m > 0 ? static_cast<double>(flips) / m : 0.0;
  if (flips == 0) return out;

  std::vector<int> chosen;
  chosen.reserve(flips);
  if (strategy == CorruptionStrategy::RandomFlip) {
    RandomStream rng = seed.stream(trial, stream_id::corruption);
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < flips; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - i)));
      std::swap(idx[i], idx[j]);
      chosen.push_back(idx[i]);
    }
  } else {
    std::vector<int> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    const bool largest = strategy == CorruptionStrategy::AdversarialLargestMargin;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      const double ma = std::abs(obs.analog[a]);
      const double mb = std::abs(obs.analog[b]);
      if (ma != mb) return largest ? ma > mb : ma < mb;
      return a < b;
    });
    chosen.assign(idx.begin(), idx.begin() + flips);
  }
  for (int i : chosen) {
    out.q[i] = static_cast<std::int8_t>(-out.q[i]);
    out.corruption_mask[i] = 1;
  }
  return out;
}

PatternDistance sign_pattern_distance(const SignPattern& q1, const SignPattern& q2) {
  if (q1.size() != q2.size())
    throw std::invalid_argument("sign_pattern_distance: length mismatch");
  PatternDistance d;
  for (std::size_t i = 0; i < q1.size(); ++i)
    if (q1[i] != q2[i]) ++d.count;
  d.fraction = q1.empty() ? 0.0 : static_cast<double>(d.count) / static_cast<double>(q1.size());
  return d;
}

void write_sign_pattern(std::ostream& out, const SignPattern& q) {
  const std::uint64_t m = q.size();
  out.write(reinterpret_cast<const char*>(&m), sizeof(m));
  std::vector<std::uint8_t> bytes((q.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

SignPattern read_sign_pattern(std::istream& in) {
  std::uint64_t m = 0;
  in.read(reinterpret_cast<char*>(&m), sizeof(m));
  if (!in) throw std::runtime_error("read_sign_pattern: truncated header");
  std::vector<std::uint8_t> bytes((m + 7) / 8, 0);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw std::runtime_error("read_sign_pattern: truncated payload");
  SignPattern q(m);
  for (std::uint64_t i = 0; i < m; ++i)
    q[i] = (bytes[i / 8] >> (i % 8)) & 1u ? std::int8_t{1} : std::int8_t{-1};
  return q;
}

}  // namespace onebit
