// Fast mode table against the serial per-mode reference on the same inputs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "casimir/mode_sum.hpp"

using namespace casimir;

namespace {

struct Setup {
    ResponseModel sphere, wall, gap;
    ModeSumInput in;

    Setup(int nodes, int l_max, bool profile)
        : sphere(profile ? ResponseModel::linear_profile(1.0, 1.2, 1.1) : ResponseModel::constant(2.0)),
          wall(ResponseModel::constant(3.0)),
          gap(ResponseModel::constant(1.0)) {
        in.r1 = 1.0;
        in.r2 = 2.0;
        in.sphere = &sphere;
        in.wall = &wall;
        in.gap = &gap;
        in.l_max = l_max;
        in.slopes = true;
        for (int k = 0; k < nodes; ++k) in.kappa.push_back(std::pow(10.0, -2.0 + 4.0 * (k + 0.5) / nodes));
    }
};

void BM_ModeTable(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), state.range(2) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(mode_table(s.in).max_product);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 2);
}

void BM_ModeTableReference(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), state.range(2) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(mode_table_reference(s.in).max_product);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 2);
}

// {frequency nodes, l_max, radial profile}
BENCHMARK(BM_ModeTable)->Args({64, 40, 0})->Args({128, 80, 0})->Args({16, 10, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModeTableReference)->Args({64, 40, 0})->Args({128, 80, 0})->Args({16, 10, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
