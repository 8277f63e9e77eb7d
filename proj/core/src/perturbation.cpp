#include "mpspec/perturbation.hpp"

#include <Eigen/LU>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace mpspec {

namespace {

void require_nonnegative(double v, const char* name)
{
    if (!(v >= 0.0)) {
        throw ArgumentError(std::string("perturbation scaling ") + name + " must be nonnegative");
    }
}

SymmetricOperator add_scaled(const SymmetricOperator& base, double s, const SymmetricOperator& term, OperatorKind kind)
{
    return base.plus_scaled(s, term, kind);
}

bool any_penalty(const OperatorSet& ops)
{
    for (const SymmetricOperator& k : ops.penalties) {
        if (!k.is_zero()) {
            return true;
        }
    }
    return false;
}

} // namespace

PerturbedOperators perturb(const OperatorSet& ops, const PerturbationParams& params)
{
    PerturbedOperators out{ops.stiffness, ops.mass};
    const std::size_t levels = ops.penalties.size();

    if (!params.per_level()) {
        require_nonnegative(params.alpha, "alpha");
        require_nonnegative(params.beta, "beta");
        out.stiffness = add_scaled(ops.stiffness, params.alpha, ops.combined, OperatorKind::perturbed_stiffness);
        out.mass = add_scaled(ops.mass, params.beta, ops.combined, OperatorKind::perturbed_mass);
    } else {
        if (params.alpha_levels.size() != levels || params.beta_levels.size() != levels) {
            throw ArgumentError("per-level scalings need exactly one alpha and one beta per penalty level");
        }
        for (std::size_t l = 0; l < levels; ++l) {
            require_nonnegative(params.alpha_levels[l], "alpha^l");
            require_nonnegative(params.beta_levels[l], "beta^l");
            out.stiffness = add_scaled(out.stiffness, params.alpha_levels[l], ops.penalties[l],
                                       OperatorKind::perturbed_stiffness);
            out.mass = add_scaled(out.mass, params.beta_levels[l], ops.penalties[l], OperatorKind::perturbed_mass);
        }
    }

    for (const InterfaceOverride& o : params.overrides) {
        if (o.level < 1 || static_cast<std::size_t>(o.level) > levels ||
            o.interface >= ops.per_interface[o.level - 1].size()) {
            throw ArgumentError("interface override addresses a missing level or interface");
        }
        require_nonnegative(o.alpha, "alpha_e");
        require_nonnegative(o.beta, "beta_e");
        const auto l = static_cast<std::size_t>(o.level - 1);
        const double weight = std::pow(ops.element_size, 2.0 * o.level - 2.0);
        const double base_alpha = params.per_level() ? params.alpha_levels[l] : params.alpha * weight;
        const double base_beta = params.per_level() ? params.beta_levels[l] : params.beta * weight;
        const SymmetricOperator& part = ops.per_interface[l][o.interface];
        out.stiffness = add_scaled(out.stiffness, o.alpha - base_alpha, part, OperatorKind::perturbed_stiffness);
        out.mass = add_scaled(out.mass, o.beta - base_beta, part, OperatorKind::perturbed_mass);
    }
    return out;
}

RegimeResult regime_probe(const OperatorSet& ops, const RegimeSpec& spec, bool compute_vectors)
{
    PerturbationParams params;
    params.f = spec.f;
    switch (spec.regime) {
    case Regime::f_zero:
        params.f = 0.0;
        params.alpha = spec.alpha;
        break;
    case Regime::f_in_0_1: {
        if (!(spec.f > 0.0 && spec.f < 1.0)) {
            throw ArgumentError("f_in_0_1 regime needs 0 < f < 1");
        }
        const double omega = top_eigenpair(ops.stiffness, ops.mass).omega;
        params.alpha = spec.alpha;
        params.beta = spec.f * spec.alpha / (omega * omega);
        params.omega_max_unperturbed = omega;
        break;
    }
    case Regime::f_gt_1: {
        if (!(spec.f > 1.0)) {
            throw ArgumentError("f_gt_1 regime needs f > 1");
        }
        const Eigenpair top = top_eigenpair(ops.stiffness, ops.mass);
        const double energy = ops.combined.quadratic_form(top.vector);
        if (!(energy > 0.0)) {
            throw EstimationError("top mode carries no interface energy");
        }
        const double target = spec.target.value_or(0.9 * top.omega);
        params.alpha = (target * target - top.lambda) / (energy * (1.0 - spec.f));
        params.beta = spec.f * params.alpha / (target * target);
        params.omega_max_unperturbed = top.omega;
        break;
    }
    case Regime::mass_only:
        params.f = 0.0;
        params.beta = spec.beta;
        break;
    }
    const PerturbedOperators pair = perturb(ops, params);
    return {params, solve_gevp(pair.stiffness, pair.mass, compute_vectors)};
}

PerturbationParams estimate_exact_target_1d(const OperatorSet& ops, double f, std::span<const double> targets,
                                            const ExactTargetOptions& options)
{
    const std::size_t levels = ops.penalties.size();
    if (!(f > 1.0)) {
        throw ArgumentError("exact-target estimation needs f > 1");
    }
    if (targets.size() != levels) {
        throw ArgumentError("expected " + std::to_string(levels) + " target frequencies, got " +
                            std::to_string(targets.size()));
    }
    if (!any_penalty(ops)) {
        throw EstimationError("no interface energy: every penalty matrix is zero");
    }

    std::vector<std::size_t> active;
    for (std::size_t l = 0; l < levels; ++l) {
        if (!ops.penalties[l].is_zero()) {
            if (!(targets[l] > 0.0)) {
                throw ArgumentError("target frequencies must be positive");
            }
            active.push_back(l);
        }
    }
    const auto na = static_cast<Eigen::Index>(active.size());

    PerturbationParams params;
    params.f = f;
    params.alpha_levels.assign(levels, 0.0);
    params.beta_levels.assign(levels, 0.0);

    const Eigen::MatrixXd k = ops.stiffness.dense();
    const Eigen::MatrixXd m = ops.mass.dense();

    for (int it = 1; it <= options.max_iters; ++it) {
        const PerturbedOperators pair = perturb(ops, params);
        const Spectrum s = solve_gevp(pair.stiffness, pair.mass, true);
        if (it == 1) {
            params.omega_max_unperturbed = s.max_frequency();
        }
        // Modes normalized by the unperturbed mass matrix.
        Eigen::MatrixXd v = s.eigenvectors;
        const Eigen::MatrixXd mv = m * v;
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            v.col(j) /= std::sqrt(v.col(j).dot(mv.col(j)));
        }

        std::vector<Eigen::Index> chosen;
        std::vector<char> taken(static_cast<std::size_t>(v.cols()), 0);
        for (std::size_t l : active) {
            const Eigen::MatrixXd kv = ops.penalties[l].full() * v;
            Eigen::Index best = -1;
            double best_energy = -1.0;
            for (Eigen::Index j = 0; j < v.cols(); ++j) {
                if (taken[static_cast<std::size_t>(j)]) {
                    continue;
                }
                const double e = v.col(j).dot(kv.col(j));
                // Ascending order: ">=" keeps the higher frequency on ties.
                if (e >= best_energy * (1.0 - 1e-12)) {
                    if (e > best_energy) {
                        best_energy = e;
                    }
                    best = j;
                }
            }
            taken[static_cast<std::size_t>(best)] = 1;
            chosen.push_back(best);
        }

        Eigen::MatrixXd a(na, na);
        Eigen::VectorXd rhs(na);
        for (Eigen::Index i = 0; i < na; ++i) {
            const Eigen::VectorXd u = v.col(chosen[static_cast<std::size_t>(i)]);
            const double wi = targets[active[static_cast<std::size_t>(i)]];
            rhs(i) = wi * wi - u.dot(k * u);
            for (Eigen::Index j = 0; j < na; ++j) {
                const std::size_t lj = active[static_cast<std::size_t>(j)];
                const double wj = targets[lj];
                a(i, j) = (1.0 - f * (wi * wi) / (wj * wj)) * ops.penalties[lj].quadratic_form(u);
            }
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible() || lu.rcond() < 1e-14) {
            throw EstimationError("parameter system is singular in iteration " + std::to_string(it));
        }
        const Eigen::VectorXd x = lu.solve(rhs);

        double change = 0.0;
        IterationRecord rec;
        rec.iteration = it;
        for (Eigen::Index i = 0; i < na; ++i) {
            const std::size_t l = active[static_cast<std::size_t>(i)];
            const double next = x(i);
            if (!(next >= 0.0)) {
                throw EstimationError("negative stiffness scaling at level " + std::to_string(l + 1) +
                                      "; targets lie above the outlier frequencies");
            }
            const double denom = std::max(std::abs(next), std::numeric_limits<double>::min());
            change = std::max(change, std::abs(next - params.alpha_levels[l]) / denom);
            params.alpha_levels[l] = next;
            params.beta_levels[l] = f * next / (targets[l] * targets[l]);
        }
        rec.alpha = params.alpha_levels[active.front()];
        rec.beta = params.beta_levels[active.front()];
        rec.alpha_levels = params.alpha_levels;
        rec.beta_levels = params.beta_levels;
        rec.target = targets[active.front()];
        const PerturbedOperators updated = perturb(ops, params);
        rec.omega_max = top_eigenpair(updated.stiffness, updated.mass).omega;
        params.trace.push_back(rec);

        if (change <= options.tolerance) {
            return params;
        }
    }
    throw ConvergenceError("exact-target estimation did not converge in " + std::to_string(options.max_iters) +
                               " iterations",
                           {}, params.trace);
}

Eigenpair top_mode(const PerturbedOperators& pair, const SymmetricOperator& normalize_with, TopEigenMethod method)
{
    Eigenpair top = method == TopEigenMethod::dense ? top_eigenpair(pair.stiffness, pair.mass)
                                                    : max_eigenpair(pair.stiffness, pair.mass);
    top.vector /= std::sqrt(normalize_with.quadratic_form(top.vector));
    return top;
}

PerturbationParams algorithm1_estimate(const OperatorSet& ops, double f, double c, const Algorithm1Options& options)
{
    if (!(f > 1.0)) {
        throw ArgumentError("pragmatic estimation needs f > 1");
    }
    if (!(c > 0.0 && c < 1.0)) {
        throw ArgumentError("reduction factor c must lie in (0, 1)");
    }

    PerturbationParams params;
    params.f = f;
    params.c = c;

    const PerturbedOperators unperturbed{ops.stiffness, ops.mass};
    const Eigenpair top = top_mode(unperturbed, ops.mass, options.method);
    params.omega_max_unperturbed = top.omega;

    const double energy = ops.combined.quadratic_form(top.vector);
    if (!(energy > 1e-12 * top.lambda)) {
        throw NoOutlierError("the top mode carries no interface energy; nothing to suppress");
    }

    double omega_prev = top.omega;
    Eigen::VectorXd mode = top.vector;
    for (int it = 1; it <= options.max_outer; ++it) {
        const double target = c * omega_prev;
        const double alpha = (target * target - ops.stiffness.quadratic_form(mode)) / (energy * (1.0 - f));
        if (!(alpha > 0.0)) {
            // The top mode is already below the target without any stiffening.
            return params;
        }
        PerturbationParams trial = params;
        trial.alpha = alpha;
        trial.beta = f * alpha / (target * target);
        const Eigenpair next = top_mode(perturb(ops, trial), ops.mass, options.method);

        IterationRecord rec;
        rec.iteration = it;
        rec.alpha = trial.alpha;
        rec.beta = trial.beta;
        rec.omega_max = next.omega;
        rec.target = target;
        params.trace.push_back(rec);

        if (next.omega > omega_prev) {
            return params;
        }
        params.alpha = trial.alpha;
        params.beta = trial.beta;
        if (omega_prev - next.omega <= options.stagnation * omega_prev) {
            return params;
        }
        omega_prev = next.omega;
        mode = next.vector;
    }
    throw ConvergenceError("pragmatic estimation did not stop within " + std::to_string(options.max_outer) + " iterations", {},
                           params.trace);
}

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace)
{
    const auto old_precision = os.precision(17);
    os << "iteration,alpha,beta,omega_max,target\n";
    for (const IterationRecord& r : trace) {
        os << r.iteration << ',' << r.alpha << ',' << r.beta << ',' << r.omega_max << ',' << r.target << '\n';
    }
    os.precision(old_precision);
}

} // namespace mpspec
