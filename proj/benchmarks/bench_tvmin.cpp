#include "pcalc/tvmin.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace pcalc;

static void BM_Minimize(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    EnergyParams p;
    p.g = GridFunction({m, m}, 1.0 / m);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& v : p.g.values) v = u(rng);
    p.A.assign(p.g.size(), {1.0, 0.5});
    p.max_iter = 2000;
    for (auto _ : state) benchmark::DoNotOptimize(minimize(p));
}
BENCHMARK(BM_Minimize)->Arg(3)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Energy(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    EnergyParams p;
    p.g = GridFunction({m, m}, 1.0 / m, 0.5);
    p.A.assign(p.g.size(), {1.0, 0.5});
    GridFunction w = p.g;
    for (std::size_t i = 0; i < w.size(); ++i) w.values[i] = static_cast<double>(i % 7);
    for (auto _ : state) benchmark::DoNotOptimize(energy(w, p));
}
BENCHMARK(BM_Energy)->Arg(16)->Arg(64);
BENCHMARK_MAIN();
