// Serial reference vs OpenMP kernel on the same workload.
#include <benchmark/benchmark.h>

#include "bsnet/simulator.hpp"

namespace {

using namespace bsnet;

const NetworkConfig kNetwork(1000, 12, 1.0, PacketSpec(4, 2e6));
const ChannelModel kChannel(0.37, 0.02);

SimOptions options(benchmark::State &state) {
    SimOptions opt;
    opt.trials = static_cast<std::uint64_t>(state.range(0));
    opt.seed = 1;
    return opt;
}

void BM_EstimateSerial(benchmark::State &state) {
    const auto opt = options(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_tdr_serial(kNetwork, kChannel, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EstimateParallel(benchmark::State &state) {
    const auto opt = options(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_tdr(kNetwork, kChannel, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_EstimateSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EstimateParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
