#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "zxwring/pnf.hpp"

namespace {

// Ring multiplication is the heaviest rewrite pipeline: the product of two
// dense n-variable normal forms has to be renormalized from scratch.
void BM_NormalizeProduct(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    zxw::Diagram a = zxw::pnf_to_diagram(zxwbench::dense_poly(n));
    zxw::Diagram b = zxw::pnf_to_diagram(zxwbench::dense_poly(n, 2));
    zxw::Diagram prod = zxw::box_times(a, b);
    for (auto _ : state) benchmark::DoNotOptimize(zxw::normalize_to_pnf(prod));
}
BENCHMARK(BM_NormalizeProduct)->DenseRange(1, 4);

void BM_NormalizeSum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    zxw::Diagram a = zxw::pnf_to_diagram(zxwbench::dense_poly(n));
    zxw::Diagram b = zxw::pnf_to_diagram(zxwbench::dense_poly(n, 1));
    zxw::Diagram sum = zxw::box_plus(a, b);
    for (auto _ : state) benchmark::DoNotOptimize(zxw::normalize_to_pnf(sum));
}
BENCHMARK(BM_NormalizeSum)->DenseRange(1, 4);

}  // namespace
