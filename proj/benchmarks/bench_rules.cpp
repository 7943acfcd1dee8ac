#include <benchmark/benchmark.h>

#include "zxwring/rules.hpp"

namespace {

// One representative per rule class; trials dominate the cost.
void check(benchmark::State& state, const char* rule) {
    const int trials = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(zxw::check_soundness(rule, trials, 1e-9, 12345));
}

void BM_SoundnessWhite(benchmark::State& state) { check(state, "BZW"); }
BENCHMARK(BM_SoundnessWhite)->Arg(10)->Arg(100);

void BM_SoundnessControlled(benchmark::State& state) { check(state, "CMcpy"); }
BENCHMARK(BM_SoundnessControlled)->Arg(10)->Arg(100);

void BM_SoundnessLemma(benchmark::State& state) { check(state, "dbl_dist"); }
BENCHMARK(BM_SoundnessLemma)->Arg(10)->Arg(100);

void BM_FullCatalog(benchmark::State& state) {
    const int trials = static_cast<int>(state.range(0));
    for (auto _ : state)
        for (const auto& r : zxw::rule_catalog())
            benchmark::DoNotOptimize(zxw::check_soundness(r.name, trials, 1e-9, 12345));
}
BENCHMARK(BM_FullCatalog)->Arg(5);

}  // namespace
