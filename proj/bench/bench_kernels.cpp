// Serial reference kernels against their OpenMP versions.
//   ./build/bench/fbt_bench --benchmark_filter=Twirl

#include <benchmark/benchmark.h>

#include "fbt/geometry.hpp"
#include "fbt/kernels.hpp"
#include "fbt/pathopt.hpp"
#include "fbt/states.hpp"

namespace {

using namespace fbt;
namespace k = fbt::kernels;

std::vector<double> weights(int d, std::uint64_t seed) {
  const auto p = random_distribution(d, seed);
  return {p.weights().data(), p.weights().data() + d};
}

template <bool Parallel>
void BM_Kron(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Matrix a = random_state(d, d, 1).matrix(), b = random_state(d, d, 2).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? k::kron(a, b) : k::serial::kron(a, b));
}

template <bool Parallel>
void BM_Twirl(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix rho = random_state(2, 2, 3).matrix(), sigma = random_state(2, 2, 4).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? k::twirl(rho, sigma, n) : k::serial::twirl(rho, sigma, n));
}

template <bool Parallel>
void BM_PlacementMixture(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = weights(2, 5), q = weights(2, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? k::placement_mixture(p, q, n) : k::serial::placement_mixture(p, q, n));
}

template <bool Parallel>
void BM_Entropy(benchmark::State& state) {
  const auto v = k::placement_mixture(weights(2, 7), weights(2, 8), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? k::entropy(v, 0.0) : k::serial::entropy(v, 0.0));
}

template <bool Parallel>
void BM_PathGradient(benchmark::State& state) {
  const auto rho = random_state(3, 3, 9), sigma = random_state(3, 3, 10);
  PathOptions opts;
  opts.parallel = Parallel;
  opts.max_iter = 20;
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize_path(rho, sigma, static_cast<int>(state.range(0)), linear_mixture_path(rho, sigma), opts));
}

}  // namespace

BENCHMARK(BM_Kron<false>)->Arg(16)->Arg(48);
BENCHMARK(BM_Kron<true>)->Arg(16)->Arg(48);
BENCHMARK(BM_Twirl<false>)->Arg(6)->Arg(8);
BENCHMARK(BM_Twirl<true>)->Arg(6)->Arg(8);
BENCHMARK(BM_PlacementMixture<false>)->Arg(12)->Arg(16);
BENCHMARK(BM_PlacementMixture<true>)->Arg(12)->Arg(16);
BENCHMARK(BM_Entropy<false>)->Arg(16)->Arg(20);
BENCHMARK(BM_Entropy<true>)->Arg(16)->Arg(20);
BENCHMARK(BM_PathGradient<false>)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathGradient<true>)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
