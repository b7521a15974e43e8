#include <benchmark/benchmark.h>

#include "onebit/complexity.hpp"
#include "onebit/recovery.hpp"
#include "onebit/tessellation.hpp"

using namespace onebit;

namespace {

const SeedPlan kPlan{0xBE};

void BM_SampleMatrixGaussian(benchmark::State& state) {
  const auto ensemble =
      MeasurementEnsemble::gaussian(static_cast<int>(state.range(0)), 64, 2.0);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(ensemble, kPlan, trial++));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}
BENCHMARK(BM_SampleMatrixGaussian)->Arg(256)->Arg(2048);

void BM_SampleMatrixStudentT(benchmark::State& state) {
  const auto ensemble =
      MeasurementEnsemble::student_t(static_cast<int>(state.range(0)), 64, 2.0, 3.0);
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_matrix(ensemble, kPlan, trial++));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}
BENCHMARK(BM_SampleMatrixStudentT)->Arg(256)->Arg(2048);

void BM_ProjectL1(benchmark::State& state) {
  RandomStream rng(7);
  const int n = static_cast<int>(state.range(0));
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gauss();
  for (auto _ : state) benchmark::DoNotOptimize(project_l1(v, 1.0));
}
BENCHMARK(BM_ProjectL1)->Arg(64)->Arg(1024);

void BM_ProjectIntersection(benchmark::State& state) {
  RandomStream rng(8);
  const int n = static_cast<int>(state.range(0));
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gauss();
  for (auto _ : state) benchmark::DoNotOptimize(project_intersection(v, 1.4, 1.0));
}
BENCHMARK(BM_ProjectIntersection)->Arg(64)->Arg(1024);

void BM_SeparationCount(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto ensemble = MeasurementEnsemble::gaussian(m, 64, 3.0);
  const Matrix A = sample_matrix(ensemble, kPlan, 0);
  const Vector dither = sample_dither(m, 3.0, kPlan, 0);
  const auto set = SignalSet::sparse_ball(2, 64, 1.0);
  const Vector x = sample_signal(set, kPlan, 0);
  const Vector y = sample_signal(set, kPlan, 1);
  for (auto _ : state) benchmark::DoNotOptimize(separation_count(A, dither, x, y));
}
BENCHMARK(BM_SeparationCount)->Arg(1024)->Arg(8192);

void BM_HammingLocalSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto set = SignalSet::sparse_ball(2, 32, 1.0);
  const auto ensemble = MeasurementEnsemble::gaussian(m, 32, 2.2);
  const Matrix A = sample_matrix(ensemble, kPlan, 0);
  const Vector x = sample_signal(set, kPlan, 0);
  const Vector dither = sample_dither(m, 2.2, kPlan, 0);
  const auto q = one_bit_measure(A, x, dither, Vector::Zero(m)).q;
  for (auto _ : state)
    benchmark::DoNotOptimize(hamming_recover_local(A, dither, q, set, 2, 20, kPlan, 0));
}
BENCHMARK(BM_HammingLocalSolve)->Arg(400)->Arg(1600);

void BM_GaussianMeanWidth(benchmark::State& state) {
  const auto set = SignalSet::sparse_ball(2, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_mean_width(set, 2000, kPlan));
}
BENCHMARK(BM_GaussianMeanWidth)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
