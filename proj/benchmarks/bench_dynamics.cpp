#include "mpspec/analytic.hpp"
#include "mpspec/assembly.hpp"
#include "mpspec/dynamics.hpp"
#include "mpspec/spectral_analysis.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace mpspec;

// Fixed number of central-difference steps on the membrane standing wave.
static void BM_CentralDifference(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    const int e = static_cast<int>(state.range(1));
    const MultipatchSpace space = build_space_2d(ProblemKind::fixed_bar(), p, 2, e);
    const OperatorSet ops = assemble_operators(space);
    const PerturbedOperators pair = perturb(ops, PerturbationParams{});
    const Eigen::VectorXd u0 = project_mode(AnalyticModeSet(ModelProblem::fixed_membrane, 1), 0, space, ops.mass);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(u0.size());
    const double dt = std::pow(p / (2.0 * e), p);
    IntegrateOptions options;
    options.omega_max = top_eigenpair(pair.stiffness, pair.mass).omega;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(pair, u0, v0, dt, 200 * dt, options));
    }
    state.counters["steps/s"] = benchmark::Counter(200.0, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_CentralDifference)->Args({2, 16})->Args({3, 16})->Unit(benchmark::kMillisecond);
