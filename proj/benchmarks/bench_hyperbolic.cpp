// Rowwise Poincare-ball primitives at training-realistic batch shapes.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "mint/hyperbolic.hpp"

namespace {

using mint::hyp::Mat;

Mat tangent_batch(int rows, int cols, std::uint64_t seed) {
  std::uint64_t s = seed;
  auto next = [&]() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<double>((z ^ (z >> 31)) >> 11) / 9007199254740992.0;
  };
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = 2.0 * next() - 1.0;
  return m;
}

void BM_Exp0Rows(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  Mat v = tangent_batch(n, d, 11);
  for (auto _ : state) benchmark::DoNotOptimize(mint::hyp::exp0_rows(v, 1.0));
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_Log0Rows(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  Mat y = mint::hyp::exp0_rows(tangent_batch(n, d, 12), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mint::hyp::log0_rows(y, 1.0));
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_MobiusAddRows(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  Mat x = mint::hyp::exp0_rows(tangent_batch(n, d, 13), 1.0);
  Mat y = mint::hyp::exp0_rows(tangent_batch(n, d, 14), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(mint::hyp::mobius_add_rows(x, y, 1.0));
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_Exp0RowsVjp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  Mat v = tangent_batch(n, d, 15);
  Mat g = tangent_batch(n, d, 16);
  for (auto _ : state)
    benchmark::DoNotOptimize(mint::hyp::exp0_rows_vjp(v, g, 1.0));
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(BM_Exp0Rows)->Args({256, 32})->Args({4096, 32})->Args({4096, 128});
BENCHMARK(BM_Log0Rows)->Args({256, 32})->Args({4096, 32})->Args({4096, 128});
BENCHMARK(BM_MobiusAddRows)
    ->Args({256, 32})
    ->Args({4096, 32})
    ->Args({4096, 128});
BENCHMARK(BM_Exp0RowsVjp)->Args({256, 32})->Args({4096, 32});
