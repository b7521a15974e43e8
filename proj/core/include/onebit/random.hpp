#pragma once

#include <cstdint>
#include <random>

namespace onebit {

/// SplitMix64 mixing step; used for counter-based child-seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream ids keep the per-trial draws of different samplers disjoint.
/// Every sampler owns one id, so trials can run in any order (or in
/// parallel) and still reproduce bit-identically.
namespace stream_id {
constexpr std::uint64_t matrix = 1;
constexpr std::uint64_t dither = 2;
constexpr std::uint64_t noise = 3;
constexpr std::uint64_t signal = 4;
constexpr std::uint64_t corruption = 5;
constexpr std::uint64_t gaussian_width = 6;
constexpr std::uint64_t empirical_width = 7;
constexpr std::uint64_t net_pool = 8;
constexpr std::uint64_t net_probe = 9;
constexpr std::uint64_t local_search = 10;
constexpr std::uint64_t separation_mc = 11;
constexpr std::uint64_t pair_sampling = 12;
constexpr std::uint64_t certification = 13;
constexpr std::uint64_t quantizer_check = 14;
}  // namespace stream_id

/// Deterministic random stream: a standard-specified mt19937_64 engine plus
/// hand-rolled distribution transforms, so draws are bit-identical across
/// compilers and standard libraries (std:: distributions are not).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0,1) with 53 random mantissa bits.
  double u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method (caches the spare).
  double gauss();

  /// Exp(1).
  double exponential();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Student-t with df degrees of freedom (unscaled; variance df/(df-2)).
  double student_t(double df);

  /// Fair +/-1.
  int rademacher() { return (next_u64() >> 63) ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Counter-based seeding: child streams are pure functions of
/// (master_seed, trial, stream), so any subset of trials can be re-run,
/// reordered, or parallelized with bit-identical results.
struct SeedPlan {
  std::uint64_t master_seed = 0;

  std::uint64_t child_seed(std::uint64_t trial, std::uint64_t stream) const {
    return splitmix64(splitmix64(splitmix64(master_seed) ^ trial) ^ stream);
  }

  RandomStream stream(std::uint64_t trial, std::uint64_t stream) const {
    return RandomStream(child_seed(trial, stream));
  }
};

}  // namespace onebit
