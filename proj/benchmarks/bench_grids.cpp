#include <benchmark/benchmark.h>

#include <random>

#include "specpert/numkernel.hpp"
#include "specpert/spectra.hpp"
#include "specpert/zoo.hpp"

using namespace specpert;

namespace {

ComplexMatrix gaussian(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix m(n, n);
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = Complex(normal(rng), normal(rng));
  return m;
}

// One shift evaluated with a full SVD of lambda - M.
void BM_SminDense(benchmark::State& state) {
  const ComplexMatrix m = gaussian(state.range(0), 5);
  ComplexMatrix shifted = -m;
  shifted.diagonal().array() += Complex(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::smin(shifted));
}
BENCHMARK(BM_SminDense)->RangeMultiplier(2)->Range(32, 256);

// The same shift after a one-time Schur reduction.
void BM_SminShifted(benchmark::State& state) {
  const ComplexMatrix m = gaussian(state.range(0), 5);
  const kernel::ShiftedSmin smin(m);
  for (auto _ : state) benchmark::DoNotOptimize(smin(Complex(0.3, 0.2)));
}
BENCHMARK(BM_SminShifted)->RangeMultiplier(2)->Range(32, 256);

void BM_Pseudospectrum(benchmark::State& state) {
  const auto m = zoo::build(zoo::OperatorSpec::parse("jordan:64"));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectra::pseudospectrum(m, spectra::Window{-1.5, 1.5, -1.5, 1.5}, {n, n}));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}
BENCHMARK(BM_Pseudospectrum)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DetectHoles(benchmark::State& state) {
  const auto s = spectra::SpectrumSet::from_values(zoo::roots_of_unity(256), 1e-12);
  const auto n = static_cast<std::size_t>(state.range(0));
  const double step = 4.0 / static_cast<double>(n - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectra::detect_holes(s, spectra::Window{-2, 2, -2, 2}, {n, n}, 3 * step));
  }
}
BENCHMARK(BM_DetectHoles)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace
