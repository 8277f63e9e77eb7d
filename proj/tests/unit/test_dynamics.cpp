#include "mpspec/analytic.hpp"
#include "mpspec/assembly.hpp"
#include "mpspec/dynamics.hpp"
#include "mpspec/errors.hpp"
#include "mpspec/spectral_analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mpspec;

namespace {

PerturbedOperators oscillator(double omega)
{
    SparseMatrix k(1, 1);
    k.insert(0, 0) = omega * omega;
    SparseMatrix m(1, 1);
    m.insert(0, 0) = 1.0;
    return {SymmetricOperator(k, OperatorKind::stiffness), SymmetricOperator(m, OperatorKind::mass)};
}

} // namespace

TEST(CriticalTimestep, IsTwoOverOmega)
{
    EXPECT_DOUBLE_EQ(critical_timestep(4.0), 0.5);
    EXPECT_THROW(critical_timestep(0.0), ArgumentError);
}

TEST(CentralDifference, SingleOscillatorMatchesRecurrenceSolution)
{
    // u_{n+1} = 2 u_n - u_{n-1} - (w dt)^2 u_n with u_0 = 1, v_0 = 0 has the
    // closed form cos(n theta), cos(theta) = 1 - (w dt)^2 / 2.
    const double omega = 3.0;
    const double dt = 0.05;
    const PerturbedOperators pair = oscillator(omega);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Ones(1);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(1);
    const Trajectory tr = integrate(pair, u0, v0, dt, 4.0);
    const double theta = std::acos(1.0 - 0.5 * omega * omega * tr.dt * tr.dt);
    EXPECT_NEAR(tr.final_state.u_current(0), std::cos(static_cast<double>(tr.steps) * theta), 1e-12);
    EXPECT_NEAR(tr.dt * static_cast<double>(tr.steps), 4.0, 1e-12);
    // Second-order accuracy against the exact cos(w t).
    EXPECT_NEAR(tr.final_state.u_current(0), std::cos(omega * 4.0), 0.02);
}

TEST(CentralDifference, RejectsUnstableStep)
{
    const PerturbedOperators pair = oscillator(10.0);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Ones(1);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(1);
    EXPECT_THROW(integrate(pair, u0, v0, 0.25, 1.0), StabilityError);
    IntegrateOptions unchecked;
    unchecked.enforce_stability = false;
    EXPECT_NO_THROW(integrate(pair, u0, v0, 0.25, 1.0, unchecked));
}

// Property: the scheme conserves the staggered energy
// 1/2 v'M v + 1/2 u_{n+1}' K u_n with v = (u_{n+1} - u_n) / dt to roundoff, so
// the reported total energy only drifts by the O(dt) error of its velocity.
TEST(CentralDifference, StaggeredEnergyIsConserved)
{
    const MultipatchSpace s = build_space_1d(ProblemKind::fixed_bar(), 3, 2, 10);
    const OperatorSet ops = assemble_operators(s);
    const AnalyticModeSet analytic(ModelProblem::fixed_bar, 3);
    const Eigen::VectorXd u0 = project_mode(analytic, 0, s, ops.mass) + 0.1 * project_mode(analytic, 2, s, ops.mass);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(u0.size());
    IntegrateOptions options;
    options.sample_every = 1;
    const Trajectory tr = integrate(ops, PerturbationParams{}, u0, v0, 1e-3, 2.0, options);
    ASSERT_GT(tr.samples.size(), 1000u);
    auto staggered = [&](std::size_t n) {
        const Eigen::VectorXd& a = tr.samples[n].u;
        const Eigen::VectorXd& b = tr.samples[n + 1].u;
        const Eigen::VectorXd v = (b - a) / tr.dt;
        return 0.5 * ops.mass.quadratic_form(v) + 0.5 * b.dot(ops.stiffness.apply(a));
    };
    const double reference = staggered(0);
    const double e0 = tr.samples.front().energy.total;
    for (std::size_t n = 0; n + 1 < tr.samples.size(); ++n) {
        EXPECT_NEAR(staggered(n), reference, 1e-11 * reference);
        const Sample& sm = tr.samples[n];
        EXPECT_NEAR(sm.energy.total, e0, 1e-2 * e0);
        EXPECT_NEAR(sm.energy.total, sm.energy.kinetic + sm.energy.strain, 1e-12 * e0);
    }
}

TEST(CentralDifference, StandingWaveStaysCloseToAnalytic)
{
    const double pi = std::numbers::pi;
    const MultipatchSpace s = build_space_1d(ProblemKind::fixed_bar(), 3, 2, 8);
    const OperatorSet ops = assemble_operators(s);
    const AnalyticModeSet analytic(ModelProblem::fixed_bar, 1);
    const Eigen::VectorXd u0 = project_mode(analytic, 0, s, ops.mass);
    IntegrateOptions options;
    options.sample_every = 50;
    options.error = [&](double t, const Eigen::VectorXd& u) {
        return l2_distance(s, u, [&](double x, double) { return std::sin(pi * x) * std::cos(pi * t); });
    };
    const Trajectory tr = integrate(ops, PerturbationParams{}, u0, Eigen::VectorXd::Zero(u0.size()), 1e-3, 2.0, options);
    for (const Sample& sm : tr.samples) {
        EXPECT_LT(sm.error, 1e-5);
    }
    EXPECT_NEAR(tr.samples.back().t, 2.0, 1e-12);
}
