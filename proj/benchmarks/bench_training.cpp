// One multi-network training epoch as a function of the corpus size m.
// Useful next to the linear-scaling acceptance check when profiling.

#include <benchmark/benchmark.h>

#include <vector>

#include "mint/synthetic.hpp"
#include "mint/training.hpp"

namespace {

std::vector<mint::TemporalGraph> scaling_corpus(int m) {
  std::vector<mint::TemporalGraph> graphs;
  for (int i = 0; i < m; ++i) {
    mint::SynthRegime r;
    r.name = "bench" + std::to_string(i);
    r.days = 60;
    r.base_intensity = 40.0;
    r.node_pool = 50;
    r.phase = (3 * i) % r.period;
    r.seed = 40 + i;
    graphs.push_back(mint::generate_synthetic(r));
  }
  return graphs;
}

void BM_MintEpoch(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto graphs = scaling_corpus(m);
  std::vector<const mint::TemporalGraph*> nets;
  for (const auto& g : graphs) nets.push_back(&g);

  mint::train::TrainConfig cfg = mint::train::TrainConfig::mint_defaults();
  cfg.model = "gclstm";
  cfg.arch.dim = 8;
  cfg.arch.dec_hidden = 8;
  cfg.arch.window = 3;
  cfg.max_epochs = 1;
  cfg.min_epochs = 1;
  cfg.seed = 3;

  for (auto _ : state)
    benchmark::DoNotOptimize(mint::train::mint_train(nets, cfg));
  state.SetComplexityN(m);
}

}  // namespace

BENCHMARK(BM_MintEpoch)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Arg(8)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);
