#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "onebit/signal_set.hpp"

namespace onebit {

/// Sign vector in {-1,+1}^m.
using SignPattern = std::vector<std::int8_t>;

/// Sign with the fixed tie convention sign(0) := +1. The measurement laws are
/// atomless, so ties are measure-zero; pinning them keeps tests deterministic.
inline std::int8_t sign_of(double v) { return v >= 0.0 ? std::int8_t{1} : std::int8_t{-1}; }

enum class CorruptionStrategy { RandomFlip, AdversarialLargestMargin, AdversarialSmallestMargin };

std::string to_string(CorruptionStrategy s);
CorruptionStrategy corruption_strategy_from_string(const std::string& name);

/// One-bit observation: the sign pattern plus the provenance needed to audit
/// it (analog values, which bits were flipped).
struct QuantizedObservation {
  Vector analog;                      // A x + noise + dither
  SignPattern q;                      // observed signs
  std::vector<std::uint8_t> corruption_mask;
  double beta_actual = 0;             // flipped fraction, floor(beta*m)/m

  int m() const { return static_cast<int>(q.size()); }
};

/// q = sign(A x + noise + dither), elementwise, sign(0) := +1.
QuantizedObservation one_bit_measure(const Matrix& A, const Vector& x,
                                     const Vector& dither, const Vector& noise);

/// sign(A z + dither) without noise bookkeeping; the solver-side pattern.
SignPattern quantize_pattern(const Matrix& A, const Vector& z, const Vector& dither);

/// Flips exactly floor(beta*m) bits. RandomFlip picks a uniform subset;
/// the adversarial strategies flip the bits with largest (resp. smallest)
/// |analog| value. Exactness makes the adversary's strength reproducible.
QuantizedObservation corrupt_bits(const QuantizedObservation& obs, double beta,
                                  CorruptionStrategy strategy, const SeedPlan& seed,
                                  std::uint64_t trial);

struct PatternDistance {
  int count = 0;
  double fraction = 0;
};

/// Hamming distance between two sign patterns, as a count and a fraction.
PatternDistance sign_pattern_distance(const SignPattern& q1, const SignPattern& q2);

/// Packed serialization: a uint64 length header, then ceil(m/8) bytes with
/// bit i stored at byte i/8, bit position i%8 (LSB = index 0); a set bit
/// means +1.
void write_sign_pattern(std::ostream& out, const SignPattern& q);
SignPattern read_sign_pattern(std::istream& in);

}  // namespace onebit
