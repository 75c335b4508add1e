#include <benchmark/benchmark.h>

#include "mixamp/amp.hpp"
#include "mixamp/fit.hpp"
#include "mixamp/mixd.hpp"

namespace {

using namespace mixamp;

std::vector<double> observations(const SignalModel& m, std::size_t n, double sigma2) {
    SeededStream rng(1, n);
    const auto x = sample_signal(m, n, rng);
    return sample_scalar_channel(x, {sigma2}, rng);
}

void BM_BayesDenoise(benchmark::State& state) {
    const SignalModel m = BgParams{0.1, 0.0, 1.0};
    const auto y = observations(m, static_cast<std::size_t>(state.range(0)), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(bayes_denoise(y, m, 0.1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BayesDenoise)->Arg(100)->Arg(5000);

void BM_MixdBernoulli(benchmark::State& state) {
    const auto y = observations(BernoulliParams{0.05}, static_cast<std::size_t>(state.range(0)), 0.1);
    const ParamGrid grid = build_bernoulli_grid(kDefaultBernoulliGrid);
    for (auto _ : state) benchmark::DoNotOptimize(mixd_denoise(y, grid, 0.1));
}
BENCHMARK(BM_MixdBernoulli)->Arg(15)->Arg(100)->Arg(1000);

void BM_MixdBg(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(1));
    const auto y = observations(BgParams{0.1, 0.0, 1.0}, static_cast<std::size_t>(state.range(0)), 0.1);
    const ParamGrid grid = build_bg_grid(k, k, k);
    for (auto _ : state) benchmark::DoNotOptimize(mixd_denoise(y, grid, 0.1));
}
BENCHMARK(BM_MixdBg)->Args({100, 17})->Args({100, 33})->Args({5000, 17});

void BM_FitBg(benchmark::State& state) {
    const auto y = observations(BgParams{0.1, 0.0, 1.0}, static_cast<std::size_t>(state.range(0)), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(fit_bg_ml(y, 0.1));
}
BENCHMARK(BM_FitBg)->Arg(100)->Arg(1000);

void BM_AmpStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SignalModel m = BgParams{0.1, 0.0, 1.0};
    const MatrixChannelSpec ch{n, n * 2 / 5, 0.025};
    SeededStream rng(2, 0);
    const auto x = sample_signal(m, n, rng);
    const auto sample = sample_matrix_channel(x, ch, rng);
    AmpConfig cfg;
    cfg.known_params = m;
    const AmpState st = amp_init(sample.a, sample.y);
    for (auto _ : state) benchmark::DoNotOptimize(amp_step(st, sample.a, sample.y, cfg));
}
BENCHMARK(BM_AmpStep)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
