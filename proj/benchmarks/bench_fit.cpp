#include "synthetic.hpp"

#include <trendline/design.hpp>
#include <trendline/forecast.hpp>
#include <trendline/model.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace trendline;

TimeSeries series(std::size_t n) {
    return testing::seasonal_retail_series(7, testing::day("2015-01-01"), n);
}

void BM_BuildDesign(benchmark::State& state) {
    const auto ts = series(static_cast<std::size_t>(state.range(0)));
    const auto config = ModelConfig::defaults();
    const auto context = make_design_context(ts, config, {});
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_design(ts.timestamps(), config, context, {}));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildDesign)->Arg(365)->Arg(1461);

void BM_Fit(benchmark::State& state) {
    const auto ts = series(static_cast<std::size_t>(state.range(0)));
    const auto config = ModelConfig::defaults();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(ts, config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fit)->Arg(365)->Arg(730)->Arg(1461)->Unit(benchmark::kMillisecond);

void BM_PredictWithIntervals(benchmark::State& state) {
    const auto model = fit(series(730), ModelConfig::defaults());
    const auto grid = make_future_grid(model, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(model, grid, 42));
    }
}
BENCHMARK(BM_PredictWithIntervals)->Arg(30)->Arg(365)->Unit(benchmark::kMillisecond);

} // namespace
