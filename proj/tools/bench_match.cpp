// Compares the serial reference match scan against the OpenMP variant on
// synthetic ternary populations. The engines route through the same kernels,
// so this is the cost model for the per-trial matching step.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "lcs/core.hpp"
#include "lcs/match_kernel.hpp"
#include "lcs/rng.hpp"

namespace {

struct Workload {
    std::vector<lcs::TernaryCondition> conds;
    std::vector<lcs::BitInput> inputs;
};

Workload make_workload(std::size_t rules, std::size_t length) {
    lcs::RandomStream rng(7);
    Workload w;
    w.conds.reserve(rules);
    for (std::size_t i = 0; i < rules; ++i) {
        lcs::TernaryCondition cond;
        cond.symbols.resize(length);
        for (auto& s : cond.symbols)
            s = rng.bernoulli(0.5) ? lcs::Tri::Wild : static_cast<lcs::Tri>(rng.index(2));
        w.conds.push_back(std::move(cond));
    }
    for (std::size_t i = 0; i < 64; ++i) {
        lcs::BitInput input(length);
        for (auto& b : input)
            b = static_cast<std::uint8_t>(rng.index(2));
        w.inputs.push_back(std::move(input));
    }
    return w;
}

void bm_match_serial(benchmark::State& state) {
    const auto w = make_workload(static_cast<std::size_t>(state.range(0)),
                                 static_cast<std::size_t>(state.range(1)));
    std::vector<std::uint8_t> flags;
    std::size_t next = 0;
    for (auto _ : state) {
        const auto& input = w.inputs[next++ % w.inputs.size()];
        lcs::match_scan_serial(
            w.conds.size(), [&](std::size_t i) { return lcs::matches(w.conds[i], input); },
            flags);
        benchmark::DoNotOptimize(flags.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}

void bm_match_parallel(benchmark::State& state) {
    const auto w = make_workload(static_cast<std::size_t>(state.range(0)),
                                 static_cast<std::size_t>(state.range(1)));
    std::vector<std::uint8_t> flags;
    std::size_t next = 0;
    for (auto _ : state) {
        const auto& input = w.inputs[next++ % w.inputs.size()];
        lcs::match_scan_parallel(
            w.conds.size(), [&](std::size_t i) { return lcs::matches(w.conds[i], input); },
            flags);
        benchmark::DoNotOptimize(flags.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}

} // namespace

BENCHMARK(bm_match_serial)
    ->Args({400, 20})
    ->Args({4096, 20})
    ->Args({65536, 20})
    ->Args({65536, 70})
    ->Args({262144, 70});
BENCHMARK(bm_match_parallel)
    ->Args({400, 20})
    ->Args({4096, 20})
    ->Args({65536, 20})
    ->Args({65536, 70})
    ->Args({262144, 70});

BENCHMARK_MAIN();
