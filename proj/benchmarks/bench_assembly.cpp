#include "mpspec/assembly.hpp"

#include <benchmark/benchmark.h>

using namespace mpspec;

static void BM_AssembleBar(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    const MultipatchSpace space = build_space_1d(ProblemKind::fixed_bar(), p, 3, static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_operators(space));
    }
    state.counters["dofs"] = static_cast<double>(space.dimension());
}
BENCHMARK(BM_AssembleBar)->Args({2, 100})->Args({4, 100})->Args({6, 100})->Unit(benchmark::kMillisecond);

static void BM_AssembleMembrane(benchmark::State& state)
{
    const MultipatchSpace space =
        build_space_2d(ProblemKind::fixed_bar(), static_cast<int>(state.range(0)), 2, static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_operators(space));
    }
    state.counters["dofs"] = static_cast<double>(space.dimension());
}
BENCHMARK(BM_AssembleMembrane)->Args({2, 16})->Args({3, 32})->Unit(benchmark::kMillisecond);

static void BM_BuildExtraction(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_space_1d(ProblemKind::simply_supported_beam(), 6, 5, 40));
    }
}
BENCHMARK(BM_BuildExtraction)->Unit(benchmark::kMicrosecond);
