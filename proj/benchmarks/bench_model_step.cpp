// Single-snapshot model step: value-only forward and forward+backward on the
// tape, for both architectures at a few embedding widths.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "mint/autodiff.hpp"
#include "mint/dtdg.hpp"
#include "mint/synthetic.hpp"
#include "mint/tgnn.hpp"

namespace {

mint::TemporalGraph bench_graph() {
  mint::SynthRegime r;
  r.name = "bench";
  r.days = 30;
  r.base_intensity = 120.0;
  r.node_pool = 200;
  r.seed = 99;
  return mint::generate_synthetic(r);
}

void BM_StepValues(benchmark::State& state, const std::string& arch) {
  mint::TemporalGraph g = bench_graph();
  mint::tgnn::HyperParams hp;
  hp.dim = static_cast<int>(state.range(0));
  hp.dec_hidden = hp.dim;
  auto model = mint::tgnn::TemporalModel::create(arch, hp, 7);
  mint::tgnn::SnapData d = mint::tgnn::build_snap_data(g, 10);
  d.label = 1;
  mint::tgnn::ModelState s = model->initial_state(g.num_nodes());
  for (auto _ : state) benchmark::DoNotOptimize(model->step_values(d, s));
}

void BM_StepBackward(benchmark::State& state, const std::string& arch) {
  mint::TemporalGraph g = bench_graph();
  mint::tgnn::HyperParams hp;
  hp.dim = static_cast<int>(state.range(0));
  hp.dec_hidden = hp.dim;
  auto model = mint::tgnn::TemporalModel::create(arch, hp, 7);
  mint::tgnn::SnapData d = mint::tgnn::build_snap_data(g, 10);
  d.label = 1;
  mint::tgnn::ModelState s0 = model->initial_state(g.num_nodes());
  for (auto _ : state) {
    mint::ad::Tape t;
    auto pvars = model->lift_params(t, true);
    auto sv = model->lift_state(t, s0);
    auto step = model->step(t, d, sv, pvars);
    mint::ad::Var loss = mint::tgnn::bce_loss(t, step.prob, d.label);
    t.backward(loss);
    benchmark::DoNotOptimize(pvars[0].grad());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_StepValues, htgn, "htgn")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_StepValues, gclstm, "gclstm")->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_StepBackward, htgn, "htgn")->Arg(16)->Arg(32);
BENCHMARK_CAPTURE(BM_StepBackward, gclstm, "gclstm")->Arg(16)->Arg(32);
