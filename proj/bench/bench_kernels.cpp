// Serial reference vs OpenMP batch kernels on stage-1 instances drawn from a
// synthetic corpus. Both kernels produce bit-identical results; this only
// measures time.

#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "defhyper/kernels.hpp"
#include "defhyper/synth.hpp"

using namespace defhyper;

namespace {

struct Workload {
  Stage1Params params;
  std::vector<Stage1Instance> instances;
};

const Workload& workload(Mode mode) {
  static std::map<Mode, Workload> cache;
  if (auto it = cache.find(mode); it != cache.end()) return it->second;
  SynthConfig sc;
  sc.records = 1000;
  const Corpus corpus = synth_generate(sc, 7);
  ModelConfig cfg;
  cfg.mode = mode;
  const auto encoder = InputEncoder::build(cfg, corpus);
  Workload w{Stage1Params(cfg, encoder.input_size()), stage1_instances(corpus, encoder, cfg.window)};
  Rng rng(11);
  w.params.init(rng);
  return cache.emplace(mode, std::move(w)).first->second;
}

std::vector<BatchItem> make_batch(std::size_t n, std::size_t pool) {
  std::vector<BatchItem> batch(n);
  for (std::size_t k = 0; k < n; ++k) batch[k] = {k % pool, 1000 + k};
  return batch;
}

template <bool Parallel>
void BM_BatchGradient(benchmark::State& state) {
  const auto mode = static_cast<Mode>(state.range(0));
  const auto& w = workload(mode);
  const auto batch = make_batch(static_cast<std::size_t>(state.range(1)), w.instances.size());
  Stage1Params out = w.params;
  const BatchSpec spec{0.5, 1.0};
  for (auto _ : state) {
    const double loss = Parallel ? batch_gradient_parallel(w.params, w.instances, batch, spec, out)
                                 : batch_gradient_serial(w.params, w.instances, batch, spec, out);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(std::string(mode_name(mode)) + (Parallel ? " threads=" + std::to_string(parallel_thread_count()) : ""));
}

template <bool Parallel>
void BM_Probabilities(benchmark::State& state) {
  const auto& w = workload(Mode::Pos);
  for (auto _ : state) {
    auto p = Parallel ? stage1_probabilities_parallel(w.params, w.instances)
                      : stage1_probabilities_serial(w.params, w.instances);
    benchmark::DoNotOptimize(p.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(w.instances.size()));
}

void batch_args(benchmark::internal::Benchmark* b) {
  for (Mode m : {Mode::Pos, Mode::Word}) {
    for (int n : {32, 256}) b->Args({static_cast<long>(m), n});
  }
}

}  // namespace

BENCHMARK(BM_BatchGradient<false>)->Name("batch_gradient/serial")->Apply(batch_args);
BENCHMARK(BM_BatchGradient<true>)->Name("batch_gradient/parallel")->Apply(batch_args);
BENCHMARK(BM_Probabilities<false>)->Name("probabilities/serial");
BENCHMARK(BM_Probabilities<true>)->Name("probabilities/parallel");

BENCHMARK_MAIN();
