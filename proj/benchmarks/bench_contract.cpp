#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "zxwring/controlled.hpp"
#include "zxwring/pnf.hpp"
#include "zxwring/semantics.hpp"

namespace {

// Tensor contraction of a normal-form diagram; cost grows with variable count.
void BM_EvalPnf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    zxw::Diagram d = zxw::pnf_to_diagram(zxwbench::dense_poly(n));
    for (auto _ : state) benchmark::DoNotOptimize(zxw::evaluate_matrix(d));
}
BENCHMARK(BM_EvalPnf)->DenseRange(1, 5);

void BM_EvalMultiCtrl(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    zxw::CMatrix x(2, 2);
    x.at(0, 1) = x.at(1, 0) = 1.0;
    zxw::Diagram d = zxw::multi_ctrl(x, k).diagram;
    for (auto _ : state) benchmark::DoNotOptimize(zxw::evaluate_matrix(d));
}
BENCHMARK(BM_EvalMultiCtrl)->DenseRange(1, 4);

}  // namespace
