// Acceptance suite: one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset; the exit status is nonzero if any
// selected criterion fails.

#include "mpspec/analytic.hpp"
#include "mpspec/assembly.hpp"
#include "mpspec/dynamics.hpp"
#include "mpspec/eigensolve.hpp"
#include "mpspec/errors.hpp"
#include "mpspec/perturbation.hpp"
#include "mpspec/spectral_analysis.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mpspec;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> violations;

    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            violations.push_back(what);
        }
    }
};

std::string fixed(double v, int digits = 4)
{
    std::ostringstream os;
    os << std::setprecision(digits) << std::fixed << v;
    return os.str();
}

std::string sci(double v)
{
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << v;
    return os.str();
}

double top_frequency(const OperatorSet& ops, const PerturbationParams& params)
{
    const PerturbedOperators pair = perturb(ops, params);
    return solve_gevp(pair.stiffness, pair.mass, false).max_frequency();
}

bool has_interface_energy(const OperatorSet& ops)
{
    return std::any_of(ops.penalties.begin(), ops.penalties.end(),
                       [](const SymmetricOperator& k) { return !k.is_zero(); });
}

// 1. Interior outlier counts of multipatch bars and beams.
void outlier_counts(Outcome& out)
{
    const int elements = 20;
    int exact = 0;
    int total = 0;
    auto run = [&](ProblemKind kind, int p, int np, int expected, const char* name) {
        const OperatorSet ops = assemble_operators(build_space_1d(kind, p, np, elements));
        const Spectrum s = solve_gevp(ops.stiffness, ops.mass);
        const std::vector<bool> flags = flag_outliers(s, ops);
        const auto flagged = std::count(flags.begin(), flags.end(), true);
        ++total;
        if (flagged == expected) {
            ++exact;
        }
        out.check(flagged == expected, std::string(name) + " p=" + std::to_string(p) + " Np=" + std::to_string(np) +
                                           ": flagged " + std::to_string(flagged) + ", expected " +
                                           std::to_string(expected));
    };
    for (int p = 2; p <= 5; ++p) {
        for (int np : {2, 3, 5}) {
            run(ProblemKind::fixed_bar(), p, np, (np - 1) * (p - 1), "bar");
        }
    }
    for (int p = 3; p <= 6; ++p) {
        for (int np : {2, 3}) {
            run(ProblemKind::simply_supported_beam(), p, np, (np - 1) * (p - 2), "beam");
        }
    }
    out.detail << "exact counts in " << exact << "/" << total << " configurations (" << elements
               << " elements per patch)";
}

// 2. Top-frequency response of the four scaling regimes.
void regime_laws(Outcome& out)
{
    const OperatorSet ops = assemble_operators(build_space_1d(ProblemKind::fixed_bar(), 2, 2, 25));
    const double h = ops.element_size;
    const double base = solve_gevp(ops.stiffness, ops.mass, false).max_frequency();

    std::vector<double> penalty_only;
    for (double a : {1.0 / h, 10.0 / h, 100.0 / h}) {
        penalty_only.push_back(regime_probe(ops, {Regime::f_zero, 0.0, a, 0.0, std::nullopt}).spectrum.max_frequency());
    }
    const double weak = regime_probe(ops, {Regime::f_in_0_1, 0.5, h, 0.0, std::nullopt}).spectrum.max_frequency();
    const double strong = regime_probe(ops, {Regime::f_gt_1, 2.0, 0.0, 0.0, std::nullopt}).spectrum.max_frequency();
    const double mass = regime_probe(ops, {Regime::mass_only, 0.0, 0.0, h * h * h, std::nullopt}).spectrum.max_frequency();

    out.check(penalty_only[0] <= penalty_only[1] && penalty_only[1] <= penalty_only[2],
              "(a) penalty-only top frequency nondecreasing in alpha");
    out.check(weak >= base, "(b) f=0.5 top frequency >= unperturbed");
    out.check(strong < base, "(c) f=2 top frequency < unperturbed");
    out.check(mass < base, "(d) mass-only top frequency < unperturbed");
    out.detail << "unperturbed " << fixed(base, 2) << "; (a) " << fixed(penalty_only[0], 0) << " <= "
               << fixed(penalty_only[1], 0) << " <= " << fixed(penalty_only[2], 0) << "; (b) " << fixed(weak, 2)
               << "; (c) " << fixed(strong, 2) << "; (d) " << fixed(mass, 2);
}

// 3. Pragmatic estimation on the 2x2-patch quadratic membrane.
void algorithm1_behavior(Outcome& out)
{
    const MultipatchSpace space = build_space_2d(ProblemKind::fixed_bar(), 2, 2, 15);
    const OperatorSet ops = assemble_operators(space);
    const double f = 2.0;
    const PerturbationParams params = algorithm1_estimate(ops, f, 0.9);
    const std::size_t iterations = params.trace.size();
    out.check(iterations <= 8, "terminates within 8 iterations (took " + std::to_string(iterations) + ")");

    const AnalyticModeSet analytic(ModelProblem::fixed_membrane, space.direction(0).dimension());
    const double reference = analytic.omegas().back();
    const double top = top_frequency(ops, params);

    // Sweep alpha over five decades around the estimate, beta = f alpha / omega_hat^2
    // with the final target omega_hat.
    const double omega_hat_sq = f * params.alpha / params.beta;
    double sweep_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 30; ++i) {
        PerturbationParams q;
        q.alpha = params.alpha * std::pow(10.0, -2.0 + 5.0 * i / 29.0);
        q.beta = f * q.alpha / omega_hat_sq;
        sweep_min = std::min(sweep_min, top_frequency(ops, q));
    }
    out.check(top / reference <= 1.1 * sweep_min / reference,
              "max normalized frequency within 10% of the sweep minimum");

    const Spectrum s0 = solve_gevp(ops.stiffness, ops.mass);
    const MatchedSpectrum m0 = match_modes(s0, analytic, space, ops.mass, flag_outliers(s0, ops));
    const PerturbedOperators pair = perturb(ops, params);
    const Spectrum s1 = solve_gevp(pair.stiffness, pair.mass);
    const MatchedSpectrum m1 = match_modes(s1, analytic, space, ops.mass);
    const auto low = static_cast<std::size_t>(0.8 * static_cast<double>(m0.size()));
    double worst = 0.0;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < low; ++i) {
        if (m0.outlier[i]) {
            ++skipped;
            continue;
        }
        worst = std::max(worst, std::abs(m1.omega_h[i] / m0.omega_h[i] - 1.0));
    }
    out.check(worst < 5e-3, "first 80% of matched frequencies change < 0.5%");

    auto matched_max = [](const MatchedSpectrum& m) {
        double r = 0.0;
        for (double x : normalized_frequencies(m)) {
            r = std::max(r, x);
        }
        return r;
    };
    out.detail << iterations << " iterations; top/reference " << fixed(top / reference) << " vs sweep min "
               << fixed(sweep_min / reference) << " (+" << fixed(100 * (top / sweep_min - 1), 2)
               << "%); worst low-spectrum change " << fixed(100 * worst, 3) << "% (" << skipped
               << " flagged modes skipped); matched max ratio " << fixed(matched_max(m0)) << " -> "
               << fixed(matched_max(m1));
}

struct Slopes {
    double freq = 0.0;
    double mode = 0.0;
};

Slopes mode_convergence(ModelProblem problem, int p, const std::vector<int>& meshes, bool perturbed)
{
    const std::size_t index = 17;
    std::vector<double> hs;
    std::vector<double> fe;
    std::vector<double> le;
    for (int e : meshes) {
        const MultipatchSpace space = build_space_1d(problem_kind(problem), p, 2, e);
        const OperatorSet ops = assemble_operators(space);
        const PerturbationParams params = perturbed ? algorithm1_estimate(ops) : PerturbationParams{};
        const PerturbedOperators pair = perturb(ops, params);
        const Spectrum s = solve_gevp(pair.stiffness, pair.mass);
        const AnalyticModeSet analytic(problem, space.dimension());
        const MatchedSpectrum m = match_modes(s, analytic, space, ops.mass);
        const Eigenpair polished =
            refine_eigenpair(pair.stiffness, pair.mass, m.modes.col(static_cast<Eigen::Index>(index)));
        hs.push_back(ops.element_size);
        fe.push_back(std::abs(frequency_error_1d(polished.vector, analytic, index, space, ops, params)));
        le.push_back(mode_l2_distance_1d(polished.vector, analytic, index, space));
    }
    return {convergence_order(hs, fe), convergence_order(hs, le)};
}

// 4. Convergence orders of mode 18.
void convergence_orders(Outcome& out)
{
    struct Case {
        ModelProblem problem;
        int p;
        std::vector<int> meshes;
    };
    const std::vector<Case> cases = {
        {ModelProblem::fixed_bar, 2, {40, 80, 160}}, {ModelProblem::fixed_bar, 3, {40, 80, 160}},
        {ModelProblem::fixed_bar, 4, {40, 80, 160}}, {ModelProblem::fixed_bar, 5, {60, 120, 240}},
        {ModelProblem::ss_beam, 3, {40, 80, 160}},   {ModelProblem::ss_beam, 4, {40, 80, 160}},
        {ModelProblem::ss_beam, 5, {48, 96, 192}},   {ModelProblem::ss_beam, 6, {80, 100, 125}},
    };
    double worst = 0.0;
    for (const Case& c : cases) {
        const bool bar = c.problem == ModelProblem::fixed_bar;
        const double freq_expected = bar ? 2.0 * c.p : 2.0 * (c.p - 1);
        const double mode_expected = c.p + 1.0;
        for (bool perturbed : {false, true}) {
            const Slopes s = mode_convergence(c.problem, c.p, c.meshes, perturbed);
            const std::string label = std::string(bar ? "bar" : "beam") + " p=" + std::to_string(c.p) +
                                      (perturbed ? " perturbed" : " standard");
            out.check(std::abs(s.freq - freq_expected) <= 0.3,
                      label + ": frequency slope " + fixed(s.freq, 3) + " vs " + fixed(freq_expected, 0));
            out.check(std::abs(s.mode - mode_expected) <= 0.3,
                      label + ": mode slope " + fixed(s.mode, 3) + " vs " + fixed(mode_expected, 0));
            worst = std::max({worst, std::abs(s.freq - freq_expected), std::abs(s.mode - mode_expected)});
            out.detail << (out.detail.tellp() > 0 ? "; " : "") << (bar ? "bar" : "beam") << c.p
                       << (perturbed ? "p " : "s ") << fixed(s.freq, 2) << "/" << fixed(s.mode, 2);
        }
    }
    out.detail << "; largest deviation " << fixed(worst, 3);
}

// 5. Critical time step with and without the pragmatic perturbation.
void timestep_improvement(Outcome& out)
{
    for (ModelProblem problem : {ModelProblem::fixed_membrane, ModelProblem::ss_plate}) {
        const bool plate = problem == ModelProblem::ss_plate;
        for (int e : {4, 8, 12}) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = 0.0;
            std::ostringstream row;
            for (int p = 2; p <= 6; ++p) {
                const OperatorSet ops = assemble_operators(build_space_2d(problem_kind(problem), p, 2, e));
                const double standard = critical_timestep(top_eigenpair(ops.stiffness, ops.mass).omega);
                double improved = standard;
                const bool outliers = has_interface_energy(ops);
                if (outliers) {
                    const PerturbedOperators pair = perturb(ops, algorithm1_estimate(ops));
                    improved = critical_timestep(top_eigenpair(pair.stiffness, pair.mass).omega);
                }
                const std::string label =
                    std::string(plate ? "plate" : "membrane") + " e=" + std::to_string(e) + " p=" + std::to_string(p);
                if (outliers) {
                    out.check(improved > standard, label + ": improved dt_crit > standard");
                } else {
                    out.check(improved == standard, label + ": no interior outliers, improved == standard");
                }
                lo = std::min(lo, improved);
                hi = std::max(hi, improved);
                row << " " << fixed(improved / standard, 2);
            }
            out.check(hi / lo <= 1.5, std::string(plate ? "plate" : "membrane") + " e=" + std::to_string(e) +
                                          ": improved dt_crit varies across p by " + fixed(hi / lo, 2) +
                                          " (limit 1.5)");
            out.detail << (out.detail.tellp() > 0 ? "; " : "") << (plate ? "plate" : "membrane") << " e=" << e
                       << " gain p=2..6" << row.str() << ", spread " << fixed(hi / lo, 2);
        }
    }
}

// 6. Final-time L2 error of the standing wave sin(pi x) sin(pi y) cos(sqrt(2) pi t).
void transient_accuracy(Outcome& out)
{
    const double t_end = std::sqrt(2.0);
    const std::map<int, std::vector<int>> meshes = {{2, {8, 16, 32}}, {3, {8, 16, 24}}};
    for (const auto& [p, levels] : meshes) {
        for (bool perturbed : {false, true}) {
            std::vector<double> hs;
            std::vector<double> errors;
            for (int e : levels) {
                const MultipatchSpace space = build_space_2d(ProblemKind::fixed_bar(), p, 2, e);
                const OperatorSet ops = assemble_operators(space);
                const PerturbationParams params = perturbed ? algorithm1_estimate(ops) : PerturbationParams{};
                const AnalyticModeSet lowest(ModelProblem::fixed_membrane, 1);
                const Eigen::VectorXd u0 = project_mode(lowest, 0, space, ops.mass);
                const double dt = std::pow(p / (2.0 * e), p);
                const Trajectory tr = integrate(ops, params, u0, Eigen::VectorXd::Zero(u0.size()), dt, t_end);
                const double ct = std::cos(std::sqrt(2.0) * pi * t_end);
                const double err = l2_distance(space, tr.final_state.u_current, [&](double x, double y) {
                                       return std::sin(pi * x) * std::sin(pi * y) * ct;
                                   }) /
                                   0.5;
                hs.push_back(ops.element_size);
                errors.push_back(err);
            }
            const double slope = convergence_order(hs, errors);
            const std::string label = "p=" + std::to_string(p) + (perturbed ? " perturbed" : " standard");
            out.check(std::abs(slope - (p + 1)) <= 0.4, label + ": slope " + fixed(slope, 3) + " vs " +
                                                            std::to_string(p + 1));
            out.detail << (out.detail.tellp() > 0 ? "; " : "") << label << " slope " << fixed(slope, 3)
                       << " (finest error " << sci(errors.back()) << ")";
        }
    }
}

// 7. Dense solver against a Jacobi oracle, and invariants on representative runs.
void eigensolver_oracle(Outcome& out)
{
    std::mt19937_64 rng(20240607);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 1 + trial % 8;
        const Eigen::MatrixXd k = oracle::random_spd(rng, n);
        const Eigen::MatrixXd m = oracle::random_spd(rng, n);
        const Spectrum s = solve_gevp(k, m);
        const Eigen::VectorXd ref = oracle::generalized_eigenvalues(k, m);
        for (Eigen::Index i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(s.eigenvalues(i) - ref(i)) / std::abs(ref(i)));
        }
    }
    out.check(worst <= 1e-10, "random pairs agree with the oracle to 1e-10 (worst " + sci(worst) + ")");

    struct Run {
        std::string name;
        MultipatchSpace space;
        bool perturbed;
    };
    const std::vector<Run> runs = {
        {"bar p=2 2x25", build_space_1d(ProblemKind::fixed_bar(), 2, 2, 25), false},
        {"bar p=2 2x25 perturbed", build_space_1d(ProblemKind::fixed_bar(), 2, 2, 25), true},
        {"bar p=5 5x20", build_space_1d(ProblemKind::fixed_bar(), 5, 5, 20), false},
        {"beam p=6 3x20", build_space_1d(ProblemKind::simply_supported_beam(), 6, 3, 20), false},
        {"single-patch bar p=3", build_space_1d(ProblemKind::fixed_bar(), 3, 1, 30), false},
        {"membrane p=2 2x2x15", build_space_2d(ProblemKind::fixed_bar(), 2, 2, 15), false},
        {"membrane p=2 2x2x15 perturbed", build_space_2d(ProblemKind::fixed_bar(), 2, 2, 15), true},
        {"plate p=4 2x2x8 perturbed", build_space_2d(ProblemKind::simply_supported_beam(), 4, 2, 8), true},
    };
    double worst_residual = 0.0;
    double worst_orth = 0.0;
    for (const Run& r : runs) {
        const OperatorSet ops = assemble_operators(r.space);
        const PerturbedOperators pair = perturb(ops, r.perturbed ? algorithm1_estimate(ops) : PerturbationParams{});
        const Spectrum s = solve_gevp(pair.stiffness, pair.mass);
        const double res = max_relative_residual(pair.stiffness, pair.mass, s);
        const double orth = orthonormality_defect(pair.mass, s.eigenvectors);
        out.check(res <= 1e-8, r.name + ": residual " + sci(res));
        out.check(orth <= 1e-9, r.name + ": M-orthonormality defect " + sci(orth));
        worst_residual = std::max(worst_residual, res);
        worst_orth = std::max(worst_orth, orth);
    }
    out.detail << "oracle worst relative error " << sci(worst) << "; " << runs.size()
               << " experiment spectra: residual <= " << sci(worst_residual) << ", orthonormality defect <= "
               << sci(worst_orth);
}

// 8. Low spectrum of the outlier-free single-patch cubic bar.
void single_patch_accuracy(Outcome& out)
{
    const OperatorSet ops = assemble_operators(build_space_1d(ProblemKind::fixed_bar(), 3, 1, 30));
    const Spectrum s = solve_gevp(ops.stiffness, ops.mass, false);
    const Eigen::Index n_half = s.size() / 2;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index n = 1; n <= n_half; ++n) {
        const double r = s.frequencies(n - 1) / (static_cast<double>(n) * pi);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.check(lo >= 1.0 && hi <= 1.02, "omega_n / (n pi) in [1, 1.02]");
    out.detail << "N = " << s.size() << ", n <= " << n_half << ": ratio in [" << std::setprecision(10) << lo << ", "
               << hi << "]";
}

} // namespace

int main(int argc, char** argv)
{
    std::cout << std::unitbuf;
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"interior outlier counts", outlier_counts},
        {"regime laws", regime_laws},
        {"pragmatic estimation behavior", algorithm1_behavior},
        {"convergence orders", convergence_orders},
        {"critical time step improvement", timestep_improvement},
        {"transient spatial accuracy", transient_accuracy},
        {"eigensolver oracle equivalence", eigensolver_oracle},
        {"analytic low-spectrum accuracy", single_patch_accuracy},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > static_cast<int>(criteria.size())) {
            std::cerr << "usage: " << argv[0] << " [criterion 1-8 ...]\n";
            return 2;
        }
        selected.push_back(c);
    }
    if (selected.empty()) {
        for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) {
            selected.push_back(c);
        }
    }

    int failures = 0;
    for (int c : selected) {
        const auto& [name, body] = criteria[static_cast<std::size_t>(c - 1)];
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(out);
        } catch (const std::exception& e) {
            out.pass = false;
            out.violations.push_back(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << c << " (" << name << "): " << (out.pass ? "PASS" : "FAIL") << " ["
                  << fixed(seconds, 1) << " s]\n  " << out.detail.str() << '\n';
        for (const std::string& v : out.violations) {
            std::cout << "  violated: " << v << '\n';
        }
        if (!out.pass) {
            ++failures;
        }
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
