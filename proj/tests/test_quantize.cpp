#include <doctest.h>

#include <cmath>
#include <sstream>

#include "onebit/quantize.hpp"
#include "onebit/random.hpp"

using namespace onebit;

TEST_SUITE("quantize") {

TEST_CASE("one_bit_measure arithmetic and tie convention") {
  Matrix A(1, 2);
  A << 1, 0;
  Vector dither(1), noise(1);
  dither << 0.2;
  noise << 0;

  Vector x(2);
  x << 0.5, 0;
  auto obs = one_bit_measure(A, x, dither, noise);
  CHECK(obs.analog[0] == doctest::Approx(0.7));
  CHECK(obs.q[0] == 1);

  x << -0.5, 0;
  obs = one_bit_measure(A, x, dither, noise);
  CHECK(obs.q[0] == -1);

  x << -0.2, 0;
  obs = one_bit_measure(A, x, dither, noise);
  CHECK(obs.analog[0] == 0.0);
  CHECK(obs.q[0] == 1);  // sign(0) := +1

  CHECK_THROWS_AS(one_bit_measure(A, Vector::Zero(3), dither, noise), std::invalid_argument);
}

TEST_CASE("corrupt_bits flips exactly floor(beta*m) bits") {
  const SeedPlan plan{5};
  Matrix A(10, 1);
  A.setOnes();
  Vector x(1);
  x << 0.5;
  const auto obs = one_bit_measure(A, x, Vector::Zero(10), Vector::Zero(10));

  SUBCASE("beta = 0 is a no-op") {
    const auto out = corrupt_bits(obs, 0.0, CorruptionStrategy::RandomFlip, plan, 0);
    CHECK(out.q == obs.q);
    CHECK(out.beta_actual == 0);
  }
  SUBCASE("exact count") {
    const auto out = corrupt_bits(obs, 0.2, CorruptionStrategy::RandomFlip, plan, 0);
    CHECK(sign_pattern_distance(out.q, obs.q).count == 2);
    CHECK(out.beta_actual == doctest::Approx(0.2));
    int mask_count = 0;
    for (auto b : out.corruption_mask) mask_count += b;
    CHECK(mask_count == 2);
  }
  SUBCASE("invalid beta") {
    CHECK_THROWS_AS(corrupt_bits(obs, -0.1, CorruptionStrategy::RandomFlip, plan, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(corrupt_bits(obs, 1.5, CorruptionStrategy::RandomFlip, plan, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("adversarial corruption targets extreme margins") {
  QuantizedObservation obs;
  obs.analog = Vector(4);
  obs.analog << 3, -2, 0.1, 0.5;
  obs.q = {1, -1, 1, 1};
  obs.corruption_mask.assign(4, 0);
  const SeedPlan plan{1};

  const auto largest =
      corrupt_bits(obs, 0.25, CorruptionStrategy::AdversarialLargestMargin, plan, 0);
  CHECK(largest.corruption_mask[0] == 1);
  CHECK(largest.q[0] == -1);

  const auto smallest =
      corrupt_bits(obs, 0.25, CorruptionStrategy::AdversarialSmallestMargin, plan, 0);
  CHECK(smallest.corruption_mask[2] == 1);
}

TEST_CASE("corruption budget holds for every beta and strategy") {
  RandomStream rng(99);
  const SeedPlan plan{77};
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 1 + static_cast<int>(rng.below(40));
    QuantizedObservation obs;
    obs.analog = Vector(m);
    obs.q.resize(m);
    for (int i = 0; i < m; ++i) {
      obs.analog[i] = rng.gauss();
      obs.q[i] = sign_of(obs.analog[i]);
    }
    obs.corruption_mask.assign(m, 0);
    const double beta = rng.u01();
    for (auto strategy : {CorruptionStrategy::RandomFlip,
                          CorruptionStrategy::AdversarialLargestMargin,
                          CorruptionStrategy::AdversarialSmallestMargin}) {
      const auto out = corrupt_bits(obs, beta, strategy, plan, static_cast<std::uint64_t>(rep));
      const int expected = static_cast<int>(std::floor(beta * m));
      CHECK(sign_pattern_distance(out.q, obs.q).count == expected);
      CHECK(out.beta_actual <= beta);
    }
  }
}

TEST_CASE("sign_pattern_distance basics") {
  const SignPattern a{1, 1, -1, -1};
  CHECK(sign_pattern_distance(a, a).count == 0);
  CHECK(sign_pattern_distance(a, a).fraction == 0);

  SignPattern neg = a;
  for (auto& v : neg) v = static_cast<std::int8_t>(-v);
  CHECK(sign_pattern_distance(a, neg).count == 4);
  CHECK(sign_pattern_distance(a, neg).fraction == 1.0);

  const SignPattern b{1, -1, -1, 1};
  CHECK(sign_pattern_distance(a, b).count == 2);
  CHECK(sign_pattern_distance(a, b).fraction == 0.5);

  CHECK_THROWS_AS(sign_pattern_distance(a, SignPattern{1}), std::invalid_argument);
}

TEST_CASE("sign_pattern_distance is a metric on random triples") {
  RandomStream rng(4242);
  for (int rep = 0; rep < 500; ++rep) {
    const int m = 1 + static_cast<int>(rng.below(24));
    SignPattern a(m), b(m), c(m);
    for (int i = 0; i < m; ++i) {
      a[i] = rng.rademacher() > 0 ? 1 : -1;
      b[i] = rng.rademacher() > 0 ? 1 : -1;
      c[i] = rng.rademacher() > 0 ? 1 : -1;
    }
    const int ab = sign_pattern_distance(a, b).count;
    const int ba = sign_pattern_distance(b, a).count;
    const int ac = sign_pattern_distance(a, c).count;
    const int cb = sign_pattern_distance(c, b).count;
    CHECK(ab == ba);
    CHECK(sign_pattern_distance(a, a).count == 0);
    CHECK(ab <= ac + cb);
  }
}

TEST_CASE("quantizer mean matches z/lambda inside the dither range") {
  // E sign(z + tau) = (z/lambda) 1{|z|<=lambda} + 1{z>lambda} - 1{z<-lambda}
  const double lambda = 1.0;
  const int n = 1000000;
  RandomStream rng(314159);
  for (double z : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    double sum = 0;
    for (int k = 0; k < n; ++k) sum += sign_of(z + rng.uniform(-lambda, lambda));
    const double formula =
        std::abs(z) <= lambda ? z / lambda : (z > lambda ? 1.0 : -1.0);
    CHECK(std::abs(sum / n - formula) < 4.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("packed serialization round-trips") {
  RandomStream rng(2020);
  for (int m : {0, 1, 7, 8, 9, 63, 64, 65, 200}) {
    SignPattern q(m);
    for (int i = 0; i < m; ++i) q[i] = rng.rademacher() > 0 ? 1 : -1;
    std::stringstream buf;
    write_sign_pattern(buf, q);
    CHECK(buf.str().size() == 8 + (static_cast<std::size_t>(m) + 7) / 8);
    const SignPattern back = read_sign_pattern(buf);
    CHECK(back == q);
  }
}

}  // TEST_SUITE
