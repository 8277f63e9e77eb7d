#include "mpspec/dynamics.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>
#include <sstream>

namespace mpspec {

double critical_timestep(double omega_max)
{
    if (!(omega_max > 0.0)) {
        throw ArgumentError("critical time step needs a positive maximum frequency");
    }
    return 2.0 / omega_max;
}

Energy energy(const PerturbedOperators& pair, const TransientState& state)
{
    Energy e;
    if (state.dt > 0.0 && state.u_previous.size() == state.u_current.size()) {
        const Eigen::VectorXd v = (state.u_current - state.u_previous) / state.dt;
        e.kinetic = 0.5 * pair.mass.quadratic_form(v);
    }
    e.strain = 0.5 * pair.stiffness.quadratic_form(state.u_current);
    e.total = e.kinetic + e.strain;
    return e;
}

Energy energy(const OperatorSet& ops, const PerturbationParams& params, const TransientState& state)
{
    return energy(perturb(ops, params), state);
}

Trajectory integrate(const PerturbedOperators& pair, const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double dt,
                     double t_end, const IntegrateOptions& options)
{
    const auto n = static_cast<Eigen::Index>(pair.mass.dimension());
    if (u0.size() != n || v0.size() != n) {
        throw ArgumentError("initial data length differs from the operator dimension");
    }
    if (!(dt > 0.0) || !(t_end >= 0.0)) {
        throw ArgumentError("time step must be positive and the end time nonnegative");
    }

    Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower> mass(pair.mass.lower());
    if (mass.info() != Eigen::Success) {
        throw NotSpdError("perturbed mass matrix is not positive definite");
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = steps == 0 ? dt : t_end / static_cast<double>(steps);

    if (options.enforce_stability) {
        const double omega = options.omega_max ? *options.omega_max : top_eigenpair(pair.stiffness, pair.mass).omega;
        if (omega > 0.0 && h >= critical_timestep(omega)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "time step " << h << " is not below the critical step " << critical_timestep(omega);
            throw StabilityError(msg.str());
        }
    }

    Trajectory out;
    out.dt = h;
    out.steps = steps;

    TransientState state;
    state.dt = h;
    state.u_current = u0;
    const Eigen::VectorXd a0 = -mass.solve(pair.stiffness.apply(u0));
    state.u_previous = u0 - h * v0 + (0.5 * h * h) * a0;

    auto record = [&]() {
        Sample s;
        s.t = state.t;
        s.u = state.u_current;
        s.energy = energy(pair, state);
        if (options.error) {
            s.error = options.error(state.t, state.u_current);
        }
        out.samples.push_back(std::move(s));
    };
    record();

    Eigen::VectorXd next(n);
    for (std::size_t k = 1; k <= steps; ++k) {
        next = 2.0 * state.u_current - state.u_previous - (h * h) * mass.solve(pair.stiffness.apply(state.u_current));
        state.u_previous.swap(state.u_current);
        state.u_current.swap(next);
        state.t = static_cast<double>(k) * h;
        if (k == steps || (options.sample_every > 0 && k % options.sample_every == 0)) {
            record();
        }
    }
    out.final_state = state;
    return out;
}

Trajectory integrate(const OperatorSet& ops, const PerturbationParams& params, const Eigen::VectorXd& u0,
                     const Eigen::VectorXd& v0, double dt, double t_end, const IntegrateOptions& options)
{
    return integrate(perturb(ops, params), u0, v0, dt, t_end, options);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory)
{
    const auto old_precision = os.precision(17);
    os << "t,l2_error,total_energy\n";
    for (const Sample& s : trajectory.samples) {
        os << s.t << ',' << s.error << ',' << s.energy.total << '\n';
    }
    os.precision(old_precision);
}

} // namespace mpspec
