#include "synthetic.hpp"

#include <trendline/dm_test.hpp>
#include <trendline/metrics.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace trendline;

std::vector<double> noise(std::uint64_t seed, std::size_t n) {
    testing::Generator gen(seed);
    std::vector<double> out(n);
    for (auto& v : out) {
        v = gen.normal();
    }
    return out;
}

void BM_Rmse(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = noise(1, n);
    const auto b = noise(2, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmse(a, b));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rmse)->Arg(1000)->Arg(100000);

void BM_DieboldMariano(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto e1 = noise(3, n);
    const auto e2 = noise(4, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dm_test(e1, e2, Loss::Squared, 7));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DieboldMariano)->Arg(1000)->Arg(100000);

} // namespace
