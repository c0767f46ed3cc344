// Serial reference vs OpenMP kernels.
//
//   ./btcmc_bench --benchmark_filter=Prices
//   OMP_NUM_THREADS=4 ./btcmc_bench

#include "btcmc/parallel.hpp"
#include "btcmc/pricing.hpp"
#include "btcmc/var.hpp"
#include "test_support.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace btcmc;

struct Batch {
    std::vector<pricing::CostParams> costs;
    std::vector<pricing::NetworkParams> nets;
};

Batch make_batch(std::size_t n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Batch b;
    b.costs.reserve(n);
    b.nets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.costs.emplace_back(0.02 + 0.2 * u(rng), std::pow(10.0, -2.0 + 3.0 * u(rng)));
        b.nets.emplace_back(std::pow(10.0, 8.0 + 5.0 * u(rng)), 12.5);
    }
    return b;
}

void BM_PricesSerial(benchmark::State& state) {
    const auto b = make_batch(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(parallel::model_prices_serial(b.costs, b.nets));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PricesOpenMP(benchmark::State& state) {
    const auto b = make_batch(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(parallel::model_prices(b.costs, b.nets));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

bool granger_trial(std::mt19937_64& rng) {
    const auto [x, y] = testutil::simulate_var({{{{0.5, 0.0}, {0.0, 0.5}}}}, {0.0, 0.0}, 200, 1.0, rng);
    return granger_wald(var_fit(x, y, 2), 1, 0).p_value < 0.05;
}

void BM_GrangerSizeSerial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel::rejection_rate_serial(static_cast<std::size_t>(state.range(0)), 7, granger_trial));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GrangerSizeOpenMP(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel::rejection_rate(static_cast<std::size_t>(state.range(0)), 7, granger_trial));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_PricesSerial)->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_PricesOpenMP)->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_GrangerSizeSerial)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GrangerSizeOpenMP)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
