// Serial reference kernel vs the OpenMP production kernel on the matrix
// shapes the sweep actually hits: gate application (d^4 x d^4 times
// d^4 x D^2) and transfer contractions.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cspt/kernels.hpp"

namespace {

using cspt::kernels::cx;
using cspt::kernels::i64;

std::vector<cx> random_block(i64 n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cx> v(static_cast<size_t>(n));
  for (auto& x : v) x = cx{dist(rng), dist(rng)};
  return v;
}

void bm_matmul_serial(benchmark::State& state) {
  const i64 m = state.range(0), k = state.range(1), n = state.range(2);
  const auto a = random_block(m * k, 1);
  const auto b = random_block(k * n, 2);
  std::vector<cx> c(static_cast<size_t>(m * n));
  for (auto _ : state) {
    cspt::kernels::matmul_serial(a.data(), b.data(), c.data(), m, k, n);
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * m * k * n);
}

void bm_matmul_omp(benchmark::State& state) {
  const i64 m = state.range(0), k = state.range(1), n = state.range(2);
  const auto a = random_block(m * k, 1);
  const auto b = random_block(k * n, 2);
  std::vector<cx> c(static_cast<size_t>(m * n));
  for (auto _ : state) {
    cspt::kernels::matmul(a.data(), b.data(), c.data(), m, k, n);
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * m * k * n);
}

void gate_shapes(benchmark::internal::Benchmark* b) {
  b->Args({81, 81, 256});    // 4-site gate onto theta at D = 16
  b->Args({81, 81, 1024});   // D = 32
  b->Args({96, 96, 864});    // first split carry at D = 32
  b->Args({256, 256, 256});  // generic square
}

void bm_permute_serial(benchmark::State& state) {
  const i64 n = state.range(0);
  const std::vector<i64> shape{81, n, n};
  const auto src = random_block(81 * n * n, 3);
  std::vector<cx> dst(src.size());
  const std::vector<int> perm{1, 0, 2};
  for (auto _ : state) {
    cspt::kernels::permute_copy_serial(src.data(), dst.data(), shape, perm);
    benchmark::DoNotOptimize(dst.data());
  }
}

void bm_permute_omp(benchmark::State& state) {
  const i64 n = state.range(0);
  const std::vector<i64> shape{81, n, n};
  const auto src = random_block(81 * n * n, 3);
  std::vector<cx> dst(src.size());
  const std::vector<int> perm{1, 0, 2};
  for (auto _ : state) {
    cspt::kernels::permute_copy(src.data(), dst.data(), shape, perm);
    benchmark::DoNotOptimize(dst.data());
  }
}

}  // namespace

BENCHMARK(bm_matmul_serial)->Apply(gate_shapes);
BENCHMARK(bm_matmul_omp)->Apply(gate_shapes);
BENCHMARK(bm_permute_serial)->Arg(16)->Arg(32);
BENCHMARK(bm_permute_omp)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
