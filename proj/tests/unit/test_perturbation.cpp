#include "mpspec/assembly.hpp"
#include "mpspec/errors.hpp"
#include "mpspec/perturbation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace mpspec;

namespace {

OperatorSet two_patch_bar(int p, int elements)
{
    return assemble_operators(build_space_1d(ProblemKind::fixed_bar(), p, 2, elements));
}

double top(const PerturbedOperators& pair)
{
    return solve_gevp(pair.stiffness, pair.mass, false).max_frequency();
}

} // namespace

TEST(Perturb, ZeroParametersLeaveOperatorsUnchanged)
{
    const OperatorSet ops = two_patch_bar(3, 8);
    const PerturbedOperators pair = perturb(ops, PerturbationParams{});
    EXPECT_EQ((pair.stiffness.dense() - ops.stiffness.dense()).norm(), 0.0);
    EXPECT_EQ((pair.mass.dense() - ops.mass.dense()).norm(), 0.0);
    EXPECT_EQ(pair.stiffness.kind(), OperatorKind::perturbed_stiffness);
}

TEST(Perturb, UniformScalingAddsCombinedPenalty)
{
    const OperatorSet ops = two_patch_bar(3, 8);
    PerturbationParams params;
    params.alpha = 0.7;
    params.beta = 1e-3;
    const PerturbedOperators pair = perturb(ops, params);
    EXPECT_LT((pair.stiffness.dense() - ops.stiffness.dense() - 0.7 * ops.combined.dense()).norm(), 1e-12);
    EXPECT_LT((pair.mass.dense() - ops.mass.dense() - 1e-3 * ops.combined.dense()).norm(), 1e-15);
}

TEST(Perturb, PerLevelAndOverrideTerms)
{
    const OperatorSet ops = two_patch_bar(3, 8);
    PerturbationParams params;
    params.alpha_levels = {0.5, 2.0};
    params.beta_levels = {0.0, 1e-4};
    const PerturbedOperators pair = perturb(ops, params);
    const Eigen::MatrixXd expected_k = ops.stiffness.dense() + 0.5 * ops.penalties[0].dense() +
                                       2.0 * ops.penalties[1].dense();
    EXPECT_LT((pair.stiffness.dense() - expected_k).norm(), 1e-12);

    PerturbationParams with_override;
    with_override.overrides.push_back({2, 0, 3.0, 0.0});
    const PerturbedOperators o = perturb(ops, with_override);
    EXPECT_LT((o.stiffness.dense() - ops.stiffness.dense() - 3.0 * ops.per_interface[1][0].dense()).norm(), 1e-12);
}

TEST(Perturb, RejectsInvalidParameters)
{
    const OperatorSet ops = two_patch_bar(3, 8);
    PerturbationParams negative;
    negative.alpha = -1.0;
    EXPECT_THROW(perturb(ops, negative), ArgumentError);
    PerturbationParams short_levels;
    short_levels.alpha_levels = {1.0};
    short_levels.beta_levels = {1.0};
    EXPECT_THROW(perturb(ops, short_levels), ArgumentError);
    PerturbationParams missing;
    missing.overrides.push_back({1, 4, 1.0, 0.0});
    EXPECT_THROW(perturb(ops, missing), ArgumentError);
}

// Property: adding a PSD term to the stiffness never lowers a frequency and
// adding it to the mass never raises one (Courant-Fischer).
TEST(Perturb, MonotoneInStiffnessAndMassScaling)
{
    const OperatorSet ops = two_patch_bar(2, 10);
    const Spectrum base = solve_gevp(ops.stiffness, ops.mass, false);
    for (double a : {1e-3, 1e-1, 10.0}) {
        PerturbationParams pk;
        pk.alpha = a;
        const Spectrum sk = solve_gevp(perturb(ops, pk).stiffness, ops.mass, false);
        PerturbationParams pm;
        pm.beta = a * 1e-4;
        const PerturbedOperators mm = perturb(ops, pm);
        const Spectrum sm = solve_gevp(mm.stiffness, mm.mass, false);
        for (Eigen::Index i = 0; i < base.size(); ++i) {
            EXPECT_GE(sk.eigenvalues(i), base.eigenvalues(i) * (1 - 1e-12));
            EXPECT_LE(sm.eigenvalues(i), base.eigenvalues(i) * (1 + 1e-12));
        }
    }
}

TEST(RegimeProbe, FirstOrderEstimateUsesTargetRelation)
{
    const OperatorSet ops = two_patch_bar(2, 25);
    RegimeSpec spec{Regime::f_gt_1, 2.0, 0.0, 0.0, 40.0 * std::numbers::pi};
    const RegimeResult r = regime_probe(ops, spec);
    EXPECT_GT(r.params.alpha, 0.0);
    EXPECT_NEAR(r.params.beta, 2.0 * r.params.alpha / std::pow(40.0 * std::numbers::pi, 2), 1e-18);
    EXPECT_LT(r.spectrum.max_frequency(), solve_gevp(ops.stiffness, ops.mass, false).max_frequency());
    EXPECT_THROW(regime_probe(ops, {Regime::f_gt_1, 0.5, 0.0, 0.0, std::nullopt}), ArgumentError);
    EXPECT_THROW(regime_probe(ops, {Regime::f_in_0_1, 1.5, 1.0, 0.0, std::nullopt}), ArgumentError);
}

TEST(RegimeProbe, PenaltyOnlyIsNondecreasingInAlpha)
{
    const OperatorSet ops = two_patch_bar(3, 12);
    const double h = ops.element_size;
    double previous = solve_gevp(ops.stiffness, ops.mass, false).max_frequency();
    for (double scale : {0.1, 1.0, 10.0, 100.0}) {
        const double w = regime_probe(ops, {Regime::f_zero, 0.0, scale / h, 0.0, std::nullopt}).spectrum.max_frequency();
        EXPECT_GE(w, previous * (1 - 1e-12));
        previous = w;
    }
}

TEST(Algorithm1, LowersTopFrequencyAndRecordsTrace)
{
    const OperatorSet ops = two_patch_bar(3, 20);
    const double before = solve_gevp(ops.stiffness, ops.mass, false).max_frequency();
    const PerturbationParams params = algorithm1_estimate(ops, 2.0, 0.9);
    ASSERT_FALSE(params.trace.empty());
    EXPECT_NEAR(params.omega_max_unperturbed, before, 1e-9 * before);
    EXPECT_GT(params.alpha, 0.0);
    const double after = top(perturb(ops, params));
    EXPECT_LT(after, before);
    for (const IterationRecord& r : params.trace) {
        EXPECT_NEAR(r.beta, 2.0 * r.alpha / (r.target * r.target), 1e-14 * r.beta);
    }
    // The returned pair is the last accepted trace entry.
    bool found = false;
    for (const IterationRecord& r : params.trace) {
        if (r.alpha == params.alpha && r.beta == params.beta) {
            found = true;
            EXPECT_NEAR(r.omega_max, after, 1e-8 * after);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Algorithm1, PowerAndDenseTopModesAgree)
{
    const OperatorSet ops = two_patch_bar(2, 10);
    const PerturbedOperators pair = perturb(ops, PerturbationParams{});
    const Eigenpair d = top_mode(pair, ops.mass, TopEigenMethod::dense);
    const Eigenpair p = top_mode(pair, ops.mass, TopEigenMethod::power);
    EXPECT_NEAR(d.omega, p.omega, 1e-8 * d.omega);
    EXPECT_NEAR(std::abs(d.vector.dot(ops.mass.apply(p.vector))), 1.0, 1e-4);
}

TEST(Algorithm1, SinglePatchHasNothingToSuppress)
{
    const OperatorSet ops = assemble_operators(build_space_1d(ProblemKind::fixed_bar(), 3, 1, 12));
    EXPECT_THROW(algorithm1_estimate(ops), NoOutlierError);
}

TEST(Algorithm1, RejectsInvalidFactors)
{
    const OperatorSet ops = two_patch_bar(2, 6);
    EXPECT_THROW(algorithm1_estimate(ops, 1.0, 0.9), ArgumentError);
    EXPECT_THROW(algorithm1_estimate(ops, 2.0, 1.0), ArgumentError);
}

TEST(ExactTarget, QuadraticBarReachesTopAnalyticFrequency)
{
    const MultipatchSpace space = build_space_1d(ProblemKind::fixed_bar(), 2, 2, 25);
    const OperatorSet ops = assemble_operators(space);
    const double target = static_cast<double>(space.dimension()) * std::numbers::pi;
    const std::vector<double> targets{target};
    const PerturbationParams params = estimate_exact_target_1d(ops, 2.0, targets);
    ASSERT_TRUE(params.per_level());
    EXPECT_LE(params.trace.size(), 8u);
    EXPECT_GT(params.alpha_levels[0], 0.0);
    EXPECT_NEAR(params.beta_levels[0], 2.0 * params.alpha_levels[0] / (target * target),
                1e-14 * params.beta_levels[0]);
    // Full-spectrum check after convergence.
    EXPECT_NEAR(top(perturb(ops, params)), target, 0.05 * target);
    EXPECT_THROW(estimate_exact_target_1d(ops, 2.0, std::vector<double>{}), ArgumentError);
    EXPECT_THROW(estimate_exact_target_1d(ops, 0.5, targets), ArgumentError);
}

TEST(ExactTarget, CubicBarSolvesCoupledTwoLevelSystem)
{
    const MultipatchSpace space = build_space_1d(ProblemKind::fixed_bar(), 3, 2, 25);
    const OperatorSet ops = assemble_operators(space);
    const double n = static_cast<double>(space.dimension());
    const std::vector<double> targets{n * std::numbers::pi, (n - 1) * std::numbers::pi};
    const PerturbationParams params = estimate_exact_target_1d(ops, 2.0, targets);
    ASSERT_EQ(params.alpha_levels.size(), 2u);
    EXPECT_GT(params.alpha_levels[0], 0.0);
    EXPECT_GT(params.alpha_levels[1], 0.0);
    EXPECT_NEAR(top(perturb(ops, params)), targets[0], 0.05 * targets[0]);
}

TEST(ExactTarget, NoInterfaceEnergyIsAnEstimationError)
{
    const OperatorSet ops = assemble_operators(build_space_1d(ProblemKind::fixed_bar(), 2, 1, 10));
    EXPECT_THROW(estimate_exact_target_1d(ops, 2.0, std::vector<double>{10.0}), EstimationError);
}

TEST(Algorithm1, TraceCsvHasOneRowPerRecord)
{
    std::vector<IterationRecord> trace(3);
    trace[1].iteration = 2;
    std::ostringstream os;
    write_trace_csv(os, trace);
    const std::string s = os.str();
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
    EXPECT_EQ(s.rfind("iteration,alpha,beta,omega_max,target", 0), 0u);
}
