#include "pcalc/bv1d.hpp"
#include "pcalc/pairing_nd.hpp"
#include "pcalc/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace pcalc;

static void BM_Pairing1D(benchmark::State& state) {
    const Interval1D dom(-1, 1);
    const int cells = static_cast<int>(state.range(0));
    std::vector<Rational> bp;
    std::vector<Piece> pa, pu;
    for (int i = 1; i < cells; ++i) bp.emplace_back(2 * i - cells, cells);
    for (int i = 0; i < cells; ++i) {
        pa.emplace_back(Poly({Rational(i % 3), Rational(1, i + 1)}));
        pu.emplace_back(Poly({Rational(i % 5, 2), Rational(-1, 3), Rational(i % 2)}));
    }
    PiecewiseFunction1D a(dom, bp, pa), u(dom, bp, pu);
    for (auto _ : state) benchmark::DoNotOptimize(pairing_1d(a, u, LambdaSelector(0.3)));
}
BENCHMARK(BM_Pairing1D)->Arg(4)->Arg(16)->Arg(64);

static void BM_PairingMeasureRadial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    FieldND f = catalog("radial", {{"N", n}});
    BoxSet e = BoxSet::single(Box::cube(n, 0, 1));
    for (auto _ : state) benchmark::DoNotOptimize(pairing_measure_box(f, e, LambdaSelector(0.25)));
}
BENCHMARK(BM_PairingMeasureRadial)->Arg(2)->Arg(3);

static void BM_PairingMeasureStaircase(benchmark::State& state) {
    FieldND f = catalog("staircase", {{"N", 2}});
    BoxSet e = staircase_set(2, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pairing_measure_box(f, e, LambdaSelector(0.5)));
}
BENCHMARK(BM_PairingMeasureStaircase)->Arg(5)->Arg(20);

static void BM_GaussGreenRadial(benchmark::State& state) {
    FieldND f = catalog("radial", {{"N", 2}});
    BoxSet e = BoxSet::single(Box::cube(2, 0, 1));
    for (auto _ : state) benchmark::DoNotOptimize(gauss_green_check(f, e, LambdaSelector(0.3)));
}
BENCHMARK(BM_GaussGreenRadial)->Unit(benchmark::kMillisecond);

static void BM_Cubature(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    QuadOptions q;
    q.rel_tol = 1e-10;
    auto f = [n](const std::vector<double>& y) {
        double s = 1;
        for (double v : y) s += v * v;
        return std::pow(s, -0.5 * (n + 1));
    };
    for (auto _ : state) benchmark::DoNotOptimize(integrate_box(f, std::vector<double>(n, 0.0), std::vector<double>(n, 1.0), q));
}
BENCHMARK(BM_Cubature)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
