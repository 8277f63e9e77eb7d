#include "mpspec/assembly.hpp"
#include "mpspec/eigensolve.hpp"
#include "mpspec/perturbation.hpp"

#include <benchmark/benchmark.h>

using namespace mpspec;

namespace {

OperatorSet membrane(int p, int elements)
{
    return assemble_operators(build_space_2d(ProblemKind::fixed_bar(), p, 2, elements));
}

} // namespace

static void BM_DenseGevp(benchmark::State& state)
{
    const OperatorSet ops = membrane(2, static_cast<int>(state.range(0)));
    const bool vectors = state.range(1) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_gevp(ops.stiffness, ops.mass, vectors));
    }
    state.counters["dofs"] = static_cast<double>(ops.dimension());
}
BENCHMARK(BM_DenseGevp)->Args({8, 0})->Args({8, 1})->Args({15, 0})->Unit(benchmark::kMillisecond);

static void BM_TopEigenpair(benchmark::State& state)
{
    const OperatorSet ops = membrane(3, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(top_eigenpair(ops.stiffness, ops.mass));
    }
    state.counters["dofs"] = static_cast<double>(ops.dimension());
}
BENCHMARK(BM_TopEigenpair)->Arg(8)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_PowerIteration(benchmark::State& state)
{
    const OperatorSet ops = membrane(3, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_eigenpair(ops.stiffness, ops.mass));
    }
}
BENCHMARK(BM_PowerIteration)->Unit(benchmark::kMillisecond);

static void BM_PragmaticEstimation(benchmark::State& state)
{
    const OperatorSet ops = membrane(static_cast<int>(state.range(0)), 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(algorithm1_estimate(ops));
    }
}
BENCHMARK(BM_PragmaticEstimation)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
