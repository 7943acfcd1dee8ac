#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "zxwring/matpoly.hpp"

namespace {

// Product of k disjoint linear blocks over n variables; the factorizer has to
// rediscover the split by enumerating anchored bipartitions of the support.
zxw::MultilinearPoly block_product(int n, int k) {
    zxw::MultilinearPoly p = zxw::MultilinearPoly::constant(n, zxw::GaussianRational(1));
    for (int b = 0; b < k; ++b) {
        zxw::MultilinearPoly f = zxw::MultilinearPoly::constant(n, zxw::GaussianRational(1));
        for (int j = b + 1; j <= n; j += k)
            f = zxw::poly_add(f, zxw::poly_scale(zxw::MultilinearPoly::variable(n, j),
                                                 zxw::GaussianRational(2 + b)));
        p = zxw::poly_mul(p, f);
    }
    return p;
}

void BM_FactorDisjoint(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    zxw::MultilinearPoly p = block_product(n, k);
    for (auto _ : state) benchmark::DoNotOptimize(zxw::factor_disjoint(p));
}
BENCHMARK(BM_FactorDisjoint)->Args({4, 2})->Args({6, 2})->Args({6, 3})->Args({8, 2});

void BM_MatPolyRoundTrip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    zxw::CMatrix m(2, 2);
    m.at(0, 0) = 1.0;
    m.at(0, 1) = 2.0;
    m.at(1, 0) = -1.0;
    std::vector<zxw::MatVar> vars;
    for (int j = 0; j < n; ++j) vars.push_back({std::string(1, char('A' + j)), m, false});
    zxw::MatPoly p = zxw::make_matpoly(2, vars, zxwbench::dense_poly(n));
    for (auto _ : state) {
        zxw::Diagram d = zxw::matpoly_to_diagram(p);
        benchmark::DoNotOptimize(zxw::diagram_to_matpoly(d));
    }
}
BENCHMARK(BM_MatPolyRoundTrip)->DenseRange(1, 3);

}  // namespace
