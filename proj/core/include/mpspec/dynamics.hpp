#pragma once

#include "mpspec/perturbation.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mpspec {

/// Central-difference stability limit 2 / omega_max.
double critical_timestep(double omega_max);

struct TransientState {
    Eigen::VectorXd u_current;
    Eigen::VectorXd u_previous;
    double t = 0.0;
    double dt = 0.0;
};

struct Energy {
    double kinetic = 0.0;
    double strain = 0.0;
    double total = 0.0;
};

/// Kinetic energy from the backward-difference velocity (u_current - u_previous) / dt
/// and strain energy of u_current, both with the perturbed pair.
Energy energy(const PerturbedOperators& pair, const TransientState& state);
Energy energy(const OperatorSet& ops, const PerturbationParams& params, const TransientState& state);

struct Sample {
    double t = 0.0;
    Eigen::VectorXd u;
    Energy energy;
    double error = 0.0; ///< only meaningful when an error functional was supplied
};

struct IntegrateOptions {
    /// Largest perturbed frequency; computed when absent and the guard is on.
    std::optional<double> omega_max;
    bool enforce_stability = true;
    /// Record every n-th step (0: initial and final state only).
    std::size_t sample_every = 0;
    /// Optional error functional evaluated at recorded samples.
    std::function<double(double t, const Eigen::VectorXd& u)> error;
};

struct Trajectory {
    std::vector<Sample> samples;
    TransientState final_state;
    std::size_t steps = 0;
    double dt = 0.0; ///< step actually used (dt shrunk so that steps * dt = T)
};

/// Explicit central differences for M~ u'' + K~ u = 0 with the mass factored once.
/// The step is reduced to T / ceil(T / dt) so the run ends exactly at T.
/// Throws StabilityError when dt >= 2 / omega_max and the guard is enabled.
Trajectory integrate(const PerturbedOperators& pair, const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double dt,
                     double t_end, const IntegrateOptions& options = {});
Trajectory integrate(const OperatorSet& ops, const PerturbationParams& params, const Eigen::VectorXd& u0,
                     const Eigen::VectorXd& v0, double dt, double t_end, const IntegrateOptions& options = {});

/// CSV rows: t, l2_error, total_energy.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

} // namespace mpspec
