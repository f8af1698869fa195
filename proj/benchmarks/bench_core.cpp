#include <benchmark/benchmark.h>

#include "samplenet/network.hpp"
#include "samplenet/scoring.hpp"
#include "samplenet/transport.hpp"

using namespace samplenet;

static void BM_PairwiseDistance(benchmark::State& state) {
  const int64_t m = state.range(0);
  Rng rng(1);
  Tensor a = rng_draw(rng, Dist::StandardNormal, {m, 3});
  Tensor b = rng_draw(rng, Dist::StandardNormal, {m, 3});
  for (auto _ : state) {
    Tensor d = pairwise_distance(a, b, 1);
    benchmark::DoNotOptimize(d.data());
  }
}
BENCHMARK(BM_PairwiseDistance)->Arg(64)->Arg(256);

static void BM_EnergyScoreForwardBackward(benchmark::State& state) {
  const int64_t n = state.range(0), m = state.range(1);
  Rng rng(2);
  Tensor samples = rng_draw(rng, Dist::StandardNormal, {n, m, 1});
  Tensor targets = rng_draw(rng, Dist::StandardNormal, {n, 1});
  samples.set_requires_grad(true);
  for (auto _ : state) {
    Tape tape;
    Rng stream(3);
    Tensor loss = minibatch_energy_score(samples, targets, m, 1, stream, &tape);
    tape.backward(loss);
    benchmark::DoNotOptimize(loss.value());
  }
}
BENCHMARK(BM_EnergyScoreForwardBackward)->Args({128, 50})->Args({500, 100});

static void BM_SinkhornDivergence(benchmark::State& state) {
  const int64_t k = state.range(0);
  Rng rng(4);
  PointCloud a(rng_draw(rng, Dist::StandardNormal, {k, 1}));
  PointCloud b(rng_draw(rng, Dist::StandardNormal, {k, 1}));
  const SinkhornOptions opt{0.0025, 200, 1e-6};
  for (auto _ : state) {
    Tensor v = sinkhorn_divergence(a, b, opt);
    benchmark::DoNotOptimize(v.value());
  }
}
BENCHMARK(BM_SinkhornDivergence)->Arg(8)->Arg(16)->Arg(64);

static void BM_TrainStep(benchmark::State& state) {
  const bool with_transport = state.range(0) != 0;
  Rng gen(5);
  Dataset data = gen_unimodal_toy(256, gen);
  MlpConfig cfg;
  cfg.input_dim = 1;
  cfg.hidden_sizes = {50};
  cfg.head = HeadSamples{100, 1};
  Rng init(6);
  SampleNetModel model(cfg, init);
  LossConfig loss;
  loss.M = 100;
  loss.K = with_transport ? 16 : 100;
  loss.eta = with_transport ? 2.0 : 0.0;
  loss.sinkhorn_iters = 60;
  loss.sinkhorn_tol = 1e-4;
  AdamState adam(model.parameters(), 1e-2);
  Rng stream(7);
  for (auto _ : state) {
    Tape tape;
    Tensor samples = forward_samples(model, data.X, &tape);
    Tensor l = combined_loss(samples, data.Y, loss, stream, &tape);
    tape.backward(l);
    adam_step(model.parameters(), adam);
  }
}
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
