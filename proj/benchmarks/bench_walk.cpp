#include <benchmark/benchmark.h>

#include <cmath>

#include "qwalk/analysis.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/walker.hpp"

using namespace qwalk;

namespace {

RunConfig bench_config(int t_max, int realizations) {
    RunConfig cfg;
    cfg.schedule = RandomTwoPoint{0.5, 1};
    cfg.t_max = t_max;
    cfg.n_realizations = realizations;
    cfg.master_seed = 99;
    cfg.snapshot_times = {t_max};
    return cfg;
}

}  // namespace

static void BM_WalkerRealization(benchmark::State& state) {
    const int t_max = static_cast<int>(state.range(0));
    const RunConfig cfg = bench_config(t_max, 1);
    for (auto _ : state) {
        RealizationResult r = run_single(cfg, 0);
        benchmark::DoNotOptimize(r.moments.mean.data());
    }
    state.SetItemsProcessed(state.iterations() * t_max);
}
BENCHMARK(BM_WalkerRealization)->RangeMultiplier(4)->Range(256, 4096);

static void BM_WalkerRealizationComplexCoin(benchmark::State& state) {
    const int t_max = static_cast<int>(state.range(0));
    RunConfig cfg = bench_config(t_max, 1);
    // a coin with nonzero imaginary parts exercises the general kernel
    const double s = 1.0 / std::sqrt(2.0);
    cfg.coin.m = {cplx(s, 0), cplx(0, s), cplx(0, s), cplx(s, 0)};
    for (auto _ : state) {
        RealizationResult r = run_single(cfg, 0);
        benchmark::DoNotOptimize(r.moments.mean.data());
    }
    state.SetItemsProcessed(state.iterations() * t_max);
}
BENCHMARK(BM_WalkerRealizationComplexCoin)->Arg(1024);

static void BM_Ensemble(benchmark::State& state) {
    const RunConfig cfg = bench_config(512, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        EnsembleResult r = run_ensemble(cfg, 0);
        benchmark::DoNotOptimize(r.moments.mean.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SampleSequence(benchmark::State& state) {
    const StepSchedule sch = RandomTwoPoint{0.5, 1};
    for (auto _ : state) {
        auto seq = sample_sequence(sch, static_cast<int>(state.range(0)), {7, 3});
        benchmark::DoNotOptimize(seq.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleSequence)->Arg(1 << 20);

static void BM_ExactEnsemble(benchmark::State& state) {
    RunConfig cfg = bench_config(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) {
        Density d = exact_ensemble(cfg);
        benchmark::DoNotOptimize(d.values.data());
    }
}
BENCHMARK(BM_ExactEnsemble)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_FitMomentForms(benchmark::State& state) {
    MomentSeries s;
    s.mean.assign(4097, 0.0);
    s.second_moment.assign(4097, 0.0);
    for (int t = 1; t <= 4096; ++t) {
        const double st = std::sqrt(static_cast<double>(t));
        s.mean[static_cast<std::size_t>(t)] = -t / (1.5 + 0.9 * st);
        s.second_moment[static_cast<std::size_t>(t)] =
            t * static_cast<double>(t) / (1.3 + 0.3 * st);
    }
    for (auto _ : state) {
        MomentFit f = fit_moment_forms(s, {64, 4096});
        benchmark::DoNotOptimize(&f);
    }
}
BENCHMARK(BM_FitMomentForms);

BENCHMARK_MAIN();
