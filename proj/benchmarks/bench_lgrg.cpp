#include <benchmark/benchmark.h>

#include <random>

#include "lgrg/engine.hpp"
#include "lgrg/interaction.hpp"
#include "lgrg/lattice.hpp"
#include "lgrg/simplex.hpp"
#include "lgrg/spinfit.hpp"

namespace {

using namespace lgrg;

void BM_ComputeHbar(benchmark::State& state) {
  const Engine e(Volume::square(static_cast<int>(state.range(0))), {static_cast<double>(state.range(1)), std::nullopt},
                 Coupling());
  for (auto _ : state) benchmark::DoNotOptimize(e.compute_hbar({{0, 0}}));
}
BENCHMARK(BM_ComputeHbar)->Args({4, 8})->Args({6, 8})->Args({6, 30})->Unit(benchmark::kMillisecond);

void BM_SumBlockMidVolume(benchmark::State& state) {
  const Engine e(Volume::square(6), {30.0, std::nullopt}, Coupling());
  Workspace ws;
  EngineState start = e.start({});
  const std::size_t half = e.volume().blocks().size() / 2;
  while (start.cursor() < half) e.sum_block(start, ws);
  for (auto _ : state) {
    EngineState st = start;
    e.sum_block(st, ws);
    benchmark::DoNotOptimize(st.accumulator());
  }
}
BENCHMARK(BM_SumBlockMidVolume)->Unit(benchmark::kMicrosecond);

void BM_EnumerateClasses(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_classes(static_cast<double>(state.range(0)), Symmetry::translation).size());
}
BENCHMARK(BM_EnumerateClasses)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_BlockCollection(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(block_collection({0, 0}, {static_cast<double>(state.range(0)), std::nullopt}).size());
}
BENCHMARK(BM_BlockCollection)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

SiteSet row_of(std::size_t n) {
  std::vector<Site> s;
  for (std::size_t k = 0; k < n; ++k) s.push_back({static_cast<int>(k % 4), static_cast<int>(k / 4)});
  return SiteSet(s);
}

void BM_MobiusInvert(benchmark::State& state) {
  const SiteSet x = row_of(static_cast<std::size_t>(state.range(0)));
  const ValueLookup f = [](const SiteSet& y) -> std::optional<double> { return static_cast<double>(y.size()); };
  for (auto _ : state) benchmark::DoNotOptimize(mobius_invert(f, x));
}
BENCHMARK(BM_MobiusInvert)->Arg(6)->Arg(10)->Arg(14);

void BM_GasToSpin(benchmark::State& state) {
  const SiteSet x = row_of(static_cast<std::size_t>(state.range(0)));
  Interaction h(Basis::gas, Scope::absolute);
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << x.size()); ++m) h.set(x.subset(m), 1.0 / static_cast<double>(m));
  for (auto _ : state) benchmark::DoNotOptimize(gas_to_spin(h).size());
}
BENCHMARK(BM_GasToSpin)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_SimplexMinimax(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0)), k = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix a(m, std::vector<double>(k));
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (auto& v : a[i]) v = u(rng);
    f[i] = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(simplex_minimax(a, f).epsilon);
}
BENCHMARK(BM_SimplexMinimax)->Args({12, 5})->Args({200, 40})->Args({1000, 100})->Unit(benchmark::kMillisecond);

void BM_DesignMatrix(benchmark::State& state) {
  std::vector<SiteSet> xs, ys;
  for (const auto& c : enumerate_classes(8, Symmetry::translation)) xs.push_back(c.representative);
  for (const auto& c : enumerate_classes(4, Symmetry::translation)) ys.push_back(c.representative);
  for (auto _ : state) benchmark::DoNotOptimize(design_matrix(xs, ys).size());
}
BENCHMARK(BM_DesignMatrix)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
