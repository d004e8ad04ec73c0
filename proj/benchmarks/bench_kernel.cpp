#include <benchmark/benchmark.h>

#include <random>

#include "specpert/numkernel.hpp"
#include "specpert/socle.hpp"
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

void BM_EigComplex(benchmark::State& state) {
  const ComplexMatrix m = gaussian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::eig(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigComplex)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_EigVolterraPlusQ(benchmark::State& state) {
  const auto pair = zoo::volterra_pair(static_cast<std::size_t>(state.range(0)));
  const ComplexMatrix m = pair.v + pair.q.matrix();
  for (auto _ : state) benchmark::DoNotOptimize(kernel::eig(m));
}
BENCHMARK(BM_EigVolterraPlusQ)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SolveLu(benchmark::State& state) {
  const ComplexMatrix m = gaussian(state.range(0), 2);
  const ComplexVector b = ComplexVector::Ones(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel::solve(m, b));
}
BENCHMARK(BM_SolveLu)->RangeMultiplier(4)->Range(16, 256);

void BM_SpectralRank(benchmark::State& state) {
  const ComplexMatrix a = gaussian(8, 3).leftCols(3) * gaussian(8, 4).topRows(3);
  socle::SpectralRankOptions options;
  options.probes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(socle::spectral_rank(a, options));
}
BENCHMARK(BM_SpectralRank)->Arg(50)->Arg(200);

}  // namespace
BENCHMARK_MAIN();
