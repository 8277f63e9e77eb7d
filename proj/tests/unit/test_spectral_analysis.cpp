#include "mpspec/analytic.hpp"
#include "mpspec/assembly.hpp"
#include "mpspec/errors.hpp"
#include "mpspec/spectral_analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace mpspec;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Analytic, ClosedFormFrequencies)
{
    const AnalyticModeSet bar(ModelProblem::fixed_bar, 4);
    EXPECT_DOUBLE_EQ(bar.omega(2), 3 * pi);
    const AnalyticModeSet free(ModelProblem::free_bar, 4);
    EXPECT_DOUBLE_EQ(free.omega(0), 0.0);
    EXPECT_DOUBLE_EQ(free.omega(3), 3 * pi);
    const AnalyticModeSet beam(ModelProblem::ss_beam, 3);
    EXPECT_NEAR(beam.omega(1), 4 * pi * pi, 1e-12);
    const AnalyticModeSet membrane(ModelProblem::fixed_membrane, 3);
    ASSERT_EQ(membrane.size(), 9u);
    EXPECT_NEAR(membrane.omega(0), std::sqrt(2.0) * pi, 1e-14);
    EXPECT_NEAR(membrane.omega(8), std::sqrt(18.0) * pi, 1e-14);
    const AnalyticModeSet plate(ModelProblem::ss_plate, 2);
    EXPECT_NEAR(plate.omega(3), 8 * pi * pi, 1e-12);
}

TEST(Analytic, DegenerateGroupsCoverSymmetricPairs)
{
    const AnalyticModeSet membrane(ModelProblem::fixed_membrane, 4);
    for (const auto& g : membrane.degenerate_groups()) {
        for (std::size_t i = g[0]; i < g[1]; ++i) {
            EXPECT_NEAR(membrane.omega(i), membrane.omega(g[0]), 1e-12 * membrane.omega(g[0]));
        }
    }
    std::set<std::array<int, 2>> seen;
    for (std::size_t i = 0; i < membrane.size(); ++i) {
        seen.insert(membrane.index(i));
    }
    EXPECT_EQ(seen.size(), 16u);
}

TEST(Analytic, DerivativesMatchFiniteDifferences)
{
    const AnalyticModeSet free(ModelProblem::free_bar, 6);
    const double eps = 1e-5;
    for (std::size_t i = 1; i < 6; ++i) {
        for (double t : {0.1, 0.4, 0.9}) {
            const double fd = (free.factor(i, 0, t + eps) - free.factor(i, 0, t - eps)) / (2 * eps);
            EXPECT_NEAR(free.factor_derivative(i, 0, t, 1), fd, 1e-6 * (1 + std::abs(fd)));
            const double fd2 = (free.factor_derivative(i, 0, t + eps, 1) - free.factor_derivative(i, 0, t - eps, 1)) /
                               (2 * eps);
            EXPECT_NEAR(free.factor_derivative(i, 0, t, 2), fd2, 1e-5 * (1 + std::abs(fd2)));
        }
    }
}

TEST(ConvergenceOrder, RecoversExactPowerLaw)
{
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> e;
    for (double x : h) {
        e.push_back(3.0 * std::pow(x, 4.5));
    }
    EXPECT_NEAR(convergence_order(h, e), 4.5, 1e-12);
    EXPECT_THROW(convergence_order(std::vector<double>{0.1, 0.05}, std::vector<double>{1.0, 0.5}), ArgumentError);
    EXPECT_THROW(convergence_order(h, std::vector<double>{1.0, 0.0, 1.0, 1.0}), ArgumentError);
}

// Property: matching is a bijection, and for a conforming discretization the
// sorted discrete frequencies bound the analytic ones from above.
TEST(MatchModes, PermutationAndUpperBound)
{
    for (int p = 2; p <= 4; ++p) {
        const MultipatchSpace s = build_space_1d(ProblemKind::fixed_bar(), p, 3, 8);
        const OperatorSet ops = assemble_operators(s);
        const Spectrum spectrum = solve_gevp(ops.stiffness, ops.mass);
        const AnalyticModeSet analytic(ModelProblem::fixed_bar, s.dimension());
        const MatchedSpectrum m = match_modes(spectrum, analytic, s, ops.mass);
        ASSERT_EQ(m.size(), s.dimension());
        std::vector<Eigen::Index> sorted = m.permutation;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            EXPECT_EQ(sorted[i], static_cast<Eigen::Index>(i));
        }
        for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
            EXPECT_GE(spectrum.frequencies(i), analytic.omega(static_cast<std::size_t>(i)) * (1 - 1e-12));
        }
        // Low modes pair with their own index and are accurate.
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_EQ(m.permutation[i], static_cast<Eigen::Index>(i));
            EXPECT_GT(m.cosine[i], 0.999);
            EXPECT_LT(m.l2_error[i], 1e-2);
        }
    }
}

TEST(MatchModes, MembraneDegenerateGroups)
{
    const MultipatchSpace s = build_space_2d(ProblemKind::fixed_bar(), 2, 2, 5);
    const OperatorSet ops = assemble_operators(s);
    const Spectrum spectrum = solve_gevp(ops.stiffness, ops.mass);
    const AnalyticModeSet analytic(ModelProblem::fixed_membrane, s.direction(0).dimension());
    const MatchedSpectrum m = match_modes(spectrum, analytic, s, ops.mass);
    const std::vector<double> ratio = normalized_frequencies(m);
    // (1,2) and (2,1) are resolved without mixing.
    EXPECT_NEAR(ratio[1], ratio[2], 1e-6);
    EXPECT_LT(std::abs(ratio[1] - 1.0), 1e-3);
}

TEST(FlagOutliers, CountsTwoPatchQuadraticBar)
{
    const OperatorSet ops = assemble_operators(build_space_1d(ProblemKind::fixed_bar(), 3, 3, 20));
    const Spectrum spectrum = solve_gevp(ops.stiffness, ops.mass);
    const std::vector<bool> flags = flag_outliers(spectrum, ops);
    EXPECT_EQ(std::count(flags.begin(), flags.end(), true), 4);
    // Outliers are the modes at the top of the spectrum.
    EXPECT_TRUE(flags.back());
    EXPECT_FALSE(flags.front());
}

TEST(ProjectMode, L2DistanceOfProjectionConverges)
{
    const AnalyticModeSet analytic(ModelProblem::fixed_bar, 3);
    double previous = 1.0;
    for (int e : {4, 8, 16}) {
        const MultipatchSpace s = build_space_1d(ProblemKind::fixed_bar(), 3, 2, e);
        const OperatorSet ops = assemble_operators(s);
        const Eigen::VectorXd u = project_mode(analytic, 2, s, ops.mass);
        const double d = l2_distance(s, u, [&](double x, double) { return analytic.value(2, x); });
        EXPECT_LT(d, previous / 12.0);
        EXPECT_NEAR(mode_l2_distance_1d(u, analytic, 2, s), d / analytic.l2_norm(2), 1e-3 * d);
        previous = d;
    }
}

TEST(FrequencyError, AgreesWithEigenvalueDifference)
{
    // Coarse mesh: the error is large enough for the eigenvalue to resolve it.
    const MultipatchSpace s = build_space_1d(ProblemKind::fixed_bar(), 2, 2, 6);
    const OperatorSet ops = assemble_operators(s);
    const Spectrum spectrum = solve_gevp(ops.stiffness, ops.mass);
    const AnalyticModeSet analytic(ModelProblem::fixed_bar, s.dimension());
    const MatchedSpectrum m = match_modes(spectrum, analytic, s, ops.mass);
    for (std::size_t i : {0u, 3u, 6u}) {
        const double direct = m.omega_h[i] / m.omega_exact[i] - 1.0;
        const double identity = frequency_error_1d(m.modes.col(static_cast<Eigen::Index>(i)), analytic, i, s, ops);
        EXPECT_NEAR(identity, direct, 1e-9 * std::abs(direct) + 1e-14) << "mode " << i;
    }
}

TEST(FrequencyError, IncludesPerturbationTerms)
{
    const MultipatchSpace s = build_space_1d(ProblemKind::simply_supported_beam(), 3, 2, 6);
    const OperatorSet ops = assemble_operators(s);
    PerturbationParams params;
    params.alpha = 1e-3;
    params.beta = 1e-9;
    const PerturbedOperators pair = perturb(ops, params);
    const Spectrum spectrum = solve_gevp(pair.stiffness, pair.mass);
    const AnalyticModeSet analytic(ModelProblem::ss_beam, s.dimension());
    const MatchedSpectrum m = match_modes(spectrum, analytic, s, ops.mass);
    for (std::size_t i : {1u, 4u}) {
        const double direct = m.omega_h[i] / m.omega_exact[i] - 1.0;
        const double identity =
            frequency_error_1d(m.modes.col(static_cast<Eigen::Index>(i)), analytic, i, s, ops, params);
        EXPECT_NEAR(identity, direct, 1e-8 * std::abs(direct) + 1e-13) << "mode " << i;
    }
}
