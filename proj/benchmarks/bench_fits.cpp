#include "shrinkvb/lm_models.hpp"
#include "shrinkvb/probit_models.hpp"
#include "shrinkvb/simbench.hpp"

#include <benchmark/benchmark.h>

using namespace shrinkvb;

namespace {

RegressionData lm_data(Index n, Index p) {
  LmSimDesign d;
  d.n = n;
  d.p = p;
  d.seed = 1;
  auto sim = gen_lm_data(d);
  return {std::move(sim.X), std::move(sim.y)};
}

BinaryData probit_data(Index n, Index p) {
  BinarySimDesign d;
  d.n = n;
  d.p = p;
  d.n_zero = p * 4 / 5;
  d.seed = 1;
  auto sim = gen_binary_data(d);
  return {std::move(sim.X), std::move(sim.y)};
}

void BM_LmCaviSweep(benchmark::State& state) {
  const auto data = lm_data(1000, state.range(0));
  const auto family = state.range(1) ? CoeffFamily::correlated : CoeffFamily::independent;
  LmVariational vb(data, {Prior::horseshoe, family, {}});
  for (auto _ : state) vb.cavi_sweep();
}
BENCHMARK(BM_LmCaviSweep)->ArgsProduct({{50, 100, 200, 400}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_ProbitCaviSweep(benchmark::State& state) {
  const auto data = probit_data(state.range(0), 50);
  ProbitVariational vb(data, {Prior::ridge, CoeffFamily::correlated, {}});
  for (auto _ : state) vb.cavi_sweep();
}
BENCHMARK(BM_ProbitCaviSweep)->RangeMultiplier(4)->Range(500, 32000)->Unit(benchmark::kMicrosecond);

void BM_ProbitSviStep(benchmark::State& state) {
  const auto data = probit_data(state.range(0), 50);
  ProbitVariational vb(data, {Prior::ridge, CoeffFamily::correlated, {}});
  Rng rng(2);
  for (auto _ : state) {
    const auto batch = minibatch_indices(data.n(), 100, rng);
    benchmark::DoNotOptimize(vb.stochastic_step(batch, 0.05));
  }
}
BENCHMARK(BM_ProbitSviStep)->RangeMultiplier(4)->Range(1000, 64000)->Unit(benchmark::kMicrosecond);

void BM_LmGibbsSweeps(benchmark::State& state) {
  const auto data = lm_data(500, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_lm_gibbs(data, {Prior::lasso, CoeffFamily::correlated, {}}, 100, 0, 3));
  }
}
BENCHMARK(BM_LmGibbsSweeps)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_TruncatedNormalSampler(benchmark::State& state) {
  Rng rng(4);
  const double mu = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_trunc_normal(mu, TruncSide::positive, rng));
}
BENCHMARK(BM_TruncatedNormalSampler)->Arg(-8)->Arg(0)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
