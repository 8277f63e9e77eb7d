#include "mpspec/experiments.hpp"

#include "mpspec/assembly.hpp"
#include "mpspec/csv.hpp"
#include "mpspec/dynamics.hpp"
#include "mpspec/eigensolve.hpp"
#include "mpspec/errors.hpp"
#include "mpspec/multipatch.hpp"
#include "mpspec/perturbation.hpp"
#include "mpspec/spectral_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

namespace mpspec {

namespace {

const std::vector<ExperimentInfo> kRegistry = {
    {ExperimentKind::spectrum_1d,
     "normalized spectrum of a multipatch bar or beam, standard and perturbed, with outlier flags",
     "interior outlier counts of multipatch bars and beams; normalized 1D spectra of the fixed bar and "
     "simply supported beam with and without the perturbation",
     {"problem", "p", "patches", "elements", "perturbation", "f", "c", "alpha", "beta", "max_outer"},
     {"spectrum.csv", "spectrum_standard.csv", "summary.csv", "trace.csv", "spectrum.gp"}},
    {ExperimentKind::spectrum_2d,
     "normalized spectrum of a multipatch membrane or plate, standard and perturbed, with outlier flags",
     "normalized spectra of the square membrane and plate on 2x2 and 5x5 patches and in the "
     "Bezier-element limit (one element per patch)",
     {"problem", "p", "patches", "elements", "perturbation", "f", "c", "alpha", "beta", "max_outer"},
     {"spectrum.csv", "spectrum_standard.csv", "summary.csv", "trace.csv", "spectrum.gp"}},
    {ExperimentKind::regime_probe,
     "top of the spectrum for the four scaling regimes f = 0, 0 < f < 1, f > 1 and mass-only",
     "the f-regime study of the two-patch quadratic bar (penalty only, weak mass scaling, f = 2 first-order "
     "estimate, mass-only beta = h^3)",
     {"problem", "p", "patches", "elements", "f"},
     {"regimes.csv", "regime_spectra.csv", "regimes.gp"}},
    {ExperimentKind::algorithm1_trace,
     "per-iteration spectra and parameters of the pragmatic estimation loop",
     "iteration history (spectra, alpha and beta per pass) of the pragmatic estimation on the 2x2-patch "
     "quadratic membrane",
     {"problem", "p", "patches", "elements", "f", "c", "max_outer"},
     {"trace.csv", "iterations.csv", "iterations.gp"}},
    {ExperimentKind::convergence,
     "h-convergence of one frequency and its mode, standard and perturbed, with fitted orders",
     "convergence of the 18th frequency and mode of the two-patch fixed bar (p = 2..5) and "
     "simply supported beam (p = 3..6)",
     {"problem", "p", "patches", "elements", "refinements", "levels", "mode", "perturbation", "f", "c", "max_outer"},
     {"errors.csv", "slopes.csv", "convergence.gp"}},
    {ExperimentKind::dynamics,
     "central-difference standing wave on the fixed membrane, final-time L2 error under refinement",
     "transient accuracy of the perturbed explicit scheme with the time step (p / (2 nele))^p "
     "(standing-wave substitute for the annulus study)",
     {"p", "patches", "elements", "refinements", "levels", "perturbation", "f", "c", "max_outer", "periods"},
     {"dynamics_errors.csv", "slopes.csv", "trajectory_p<p>_<variant>.csv", "dynamics.gp"}},
    {ExperimentKind::timestep_sweep,
     "critical time step 2 / omega_max of the standard and improved spectra over degree and mesh",
     "critical time step and its increase for the 2x2-patch membrane and plate, p = 2..6",
     {"problem", "p", "patches", "elements", "refinements", "levels", "perturbation", "f", "c", "max_outer"},
     {"dtcrit.csv", "dtcrit.gp"}},
};

std::string fmt(double v)
{
    return format_real(v);
}

// Writes a CSV with the resolved configuration in front.
class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const ExperimentConfig& config, const std::vector<std::string>& header,
            RunReport& report)
        : stream_(path)
        , writer_(stream_)
    {
        if (!stream_) {
            throw Error("cannot write '" + path.string() + "'");
        }
        for (const std::string& line : config.resolved_lines()) {
            writer_.comment(line);
        }
        writer_.header(header);
        report.files.push_back(path);
    }
    CsvWriter& operator*() { return writer_; }
    CsvWriter* operator->() { return &writer_; }

private:
    std::ofstream stream_;
    CsvWriter writer_;
};

void write_script(const std::filesystem::path& path, const std::string& body, RunReport& report)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << "set datafile separator ','\n"
        << "set datafile commentschars '#'\n"
        << body;
    report.files.push_back(path);
}

std::string suffixed(const std::string& stem, const std::vector<int>& degrees, int p)
{
    return degrees.size() == 1 ? stem + ".csv" : stem + "_p" + std::to_string(p) + ".csv";
}

MultipatchSpace build(const ExperimentConfig& config, int p, int elements)
{
    const ProblemKind kind = problem_kind(config.problem);
    return spatial_dimension(config.problem) == 1 ? build_space_1d(kind, p, config.patches, elements)
                                                   : build_space_2d(kind, p, config.patches, elements);
}

std::size_t modes_per_direction(const MultipatchSpace& space)
{
    return space.direction(0).dimension();
}

bool has_interface_energy(const OperatorSet& ops)
{
    return std::any_of(ops.penalties.begin(), ops.penalties.end(),
                       [](const SymmetricOperator& k) { return !k.is_zero(); });
}

bool is_perturbed(const PerturbationParams& params)
{
    if (params.per_level()) {
        return std::any_of(params.alpha_levels.begin(), params.alpha_levels.end(), [](double a) { return a != 0.0; }) ||
               std::any_of(params.beta_levels.begin(), params.beta_levels.end(), [](double b) { return b != 0.0; });
    }
    return params.alpha != 0.0 || params.beta != 0.0;
}

PerturbationParams pragmatic(const OperatorSet& ops, const ExperimentConfig& config, const std::string& label,
                             RunReport& report)
{
    if (!has_interface_energy(ops)) {
        report.notes.push_back(label + ": no interface penalty (no interior outliers), left unperturbed");
        return {};
    }
    Algorithm1Options options;
    options.max_outer = config.max_outer;
    try {
        return algorithm1_estimate(ops, config.f, config.c, options);
    } catch (const NoOutlierError& e) {
        report.notes.push_back(label + ": " + e.what() + ", left unperturbed");
        return {};
    }
}

// Parameters for the configured perturbation mode.
PerturbationParams choose_params(const OperatorSet& ops, const MultipatchSpace& space, const ExperimentConfig& config,
                                 const std::string& label, RunReport& report)
{
    const double h = ops.element_size;
    PerturbationParams params;
    params.f = config.f;
    params.c = config.c;
    switch (config.perturbation) {
    case PerturbationMode::none:
        return params;
    case PerturbationMode::algorithm1:
        if (config.alpha && config.beta) {
            params.alpha = *config.alpha;
            params.beta = *config.beta;
            return params;
        }
        return pragmatic(ops, config, label, report);
    case PerturbationMode::exact_target: {
        if (!has_interface_energy(ops)) {
            report.notes.push_back(label + ": no interface penalty (no interior outliers), left unperturbed");
            return params;
        }
        // Targets: the highest analytic frequencies, one per active level.
        const AnalyticModeSet analytic(config.problem, space.dimension());
        std::vector<double> targets(ops.penalties.size(), 0.0);
        std::size_t k = 0;
        for (std::size_t l = 0; l < ops.penalties.size(); ++l) {
            if (!ops.penalties[l].is_zero()) {
                targets[l] = analytic.omega(analytic.size() - 1 - k);
                ++k;
            }
        }
        return estimate_exact_target_1d(ops, config.f, targets);
    }
    case PerturbationMode::penalty_only_f0:
        params.f = 0.0;
        params.alpha = config.alpha.value_or(1.0 / h);
        return params;
    case PerturbationMode::mass_only:
        params.f = 0.0;
        params.beta = config.beta.value_or(h * h * h);
        return params;
    }
    return params;
}

void write_spectrum(const std::filesystem::path& path, const ExperimentConfig& config, const MatchedSpectrum& m,
                    RunReport& report)
{
    CsvFile csv(path, config, {"n", "omega_exact", "omega_h", "ratio", "l2_mode_err", "outlier_flag"}, report);
    const std::vector<double> ratio = normalized_frequencies(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        csv->cell(i + 1).cell(m.omega_exact[i]).cell(m.omega_h[i]).cell(ratio[i]).cell(m.l2_error[i]).cell(
            static_cast<bool>(m.outlier[i]));
        csv->end_row();
    }
}

void write_trace(const std::filesystem::path& path, const ExperimentConfig& config, const PerturbationParams& params,
                 RunReport& report)
{
    CsvFile csv(path, config, {"iteration", "alpha", "beta", "omega_max", "target"}, report);
    for (const IterationRecord& r : params.trace) {
        csv->cell(r.iteration).cell(r.alpha).cell(r.beta).cell(r.omega_max).cell(r.target);
        csv->end_row();
    }
}

std::size_t expected_interior_outliers(const ExperimentConfig& config, const MultipatchSpace& space, int p)
{
    const auto o1 = static_cast<std::size_t>(count_interior_outliers(problem_kind(config.problem), p, config.patches));
    if (space.spatial_dimension() == 1) {
        return o1;
    }
    const std::size_t n1 = modes_per_direction(space);
    return 2 * o1 * n1 - o1 * o1;
}

void run_spectrum(const ExperimentConfig& config, const std::filesystem::path& dir, RunReport& report)
{
    CsvFile summary(dir / "summary.csv", config,
                    {"p", "dofs", "outliers_flagged", "outliers_expected", "alpha", "beta", "omega_max_standard",
                     "omega_max_perturbed"},
                    report);
    std::ostringstream plot;
    plot << "set key autotitle columnhead\nset xlabel 'n / N'\nset ylabel 'omega_h / omega'\nplot ";
    bool first = true;
    for (int p : config.degrees) {
        const std::string label = "p=" + std::to_string(p);
        const MultipatchSpace space = build(config, p, config.elements);
        const OperatorSet ops = assemble_operators(space);
        const AnalyticModeSet analytic(config.problem, modes_per_direction(space));

        const Spectrum standard = solve_gevp(ops.stiffness, ops.mass);
        const std::vector<bool> flags = flag_outliers(standard, ops);
        const MatchedSpectrum m0 = match_modes(standard, analytic, space, ops.mass, flags);
        const PerturbationParams params = choose_params(ops, space, config, label, report);

        MatchedSpectrum m1 = m0;
        double top = standard.max_frequency();
        if (is_perturbed(params)) {
            const PerturbedOperators pair = perturb(ops, params);
            const Spectrum perturbed = solve_gevp(pair.stiffness, pair.mass);
            m1 = match_modes(perturbed, analytic, space, ops.mass);
            // Flags belong to the analytic slot: the perturbed spectrum no longer
            // separates outliers by interface energy.
            m1.outlier = m0.outlier;
            top = perturbed.max_frequency();
            write_spectrum(dir / suffixed("spectrum_standard", config.degrees, p), config, m0, report);
        }
        const std::string name = suffixed("spectrum", config.degrees, p);
        write_spectrum(dir / name, config, m1, report);
        if (!params.trace.empty()) {
            write_trace(dir / suffixed("trace", config.degrees, p), config, params, report);
        }

        const auto flagged = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
        summary->cell(p).cell(space.dimension()).cell(flagged).cell(expected_interior_outliers(config, space, p));
        if (params.per_level()) {
            summary->cell("per-level").cell("per-level");
        } else {
            summary->cell(params.alpha).cell(params.beta);
        }
        summary->cell(standard.max_frequency()).cell(top);
        summary->end_row();

        plot << (first ? "" : ", \\\n     ") << "'" << name << "' using ($1/" << m1.size()
             << "):4 with points pt 7 ps 0.4 title '" << label << "'";
        first = false;
    }
    plot << "\n";
    write_script(dir / "spectrum.gp", plot.str(), report);
}

void run_regimes(const ExperimentConfig& config, const std::filesystem::path& dir, RunReport& report)
{
    CsvFile table(dir / "regimes.csv", config, {"p", "case", "f", "alpha", "beta", "omega_max"}, report);
    CsvFile spectra(dir / "regime_spectra.csv", config, {"p", "case", "n", "omega_exact", "omega_h", "ratio"}, report);
    const double f_high = config.f > 1.0 ? config.f : 2.0;
    for (int p : config.degrees) {
        const MultipatchSpace space = build(config, p, config.elements);
        const OperatorSet ops = assemble_operators(space);
        const AnalyticModeSet analytic(config.problem, space.dimension());
        const double h = ops.element_size;

        struct Case {
            std::string name;
            std::optional<RegimeSpec> spec;
        };
        const std::vector<Case> cases = {
            {"standard", std::nullopt},
            {"f0_alpha_1/h", RegimeSpec{Regime::f_zero, 0.0, 1.0 / h, 0.0, std::nullopt}},
            {"f0_alpha_10/h", RegimeSpec{Regime::f_zero, 0.0, 10.0 / h, 0.0, std::nullopt}},
            {"f0_alpha_100/h", RegimeSpec{Regime::f_zero, 0.0, 100.0 / h, 0.0, std::nullopt}},
            {"f0.5_alpha_h", RegimeSpec{Regime::f_in_0_1, 0.5, h, 0.0, std::nullopt}},
            {"f_gt_1_first_order", RegimeSpec{Regime::f_gt_1, f_high, 0.0, 0.0, std::nullopt}},
            {"mass_only_beta_h3", RegimeSpec{Regime::mass_only, 0.0, 0.0, h * h * h, std::nullopt}},
        };
        for (const Case& c : cases) {
            PerturbationParams params;
            Spectrum spectrum;
            if (c.spec) {
                RegimeResult r = regime_probe(ops, *c.spec);
                params = r.params;
                spectrum = std::move(r.spectrum);
            } else {
                spectrum = solve_gevp(ops.stiffness, ops.mass, false);
            }
            table->cell(p).cell(c.name).cell(params.f).cell(params.alpha).cell(params.beta).cell(
                spectrum.max_frequency());
            table->end_row();
            for (Eigen::Index i = 0; i < spectrum.frequencies.size(); ++i) {
                const double exact = analytic.omega(static_cast<std::size_t>(i));
                const double ratio = exact == 0.0 ? std::nan("") : spectrum.frequencies[i] / exact;
                spectra->cell(p).cell(c.name).cell(static_cast<std::size_t>(i + 1)).cell(exact).cell(spectrum.frequencies[i]).cell(ratio);
                spectra->end_row();
            }
        }
    }
    write_script(dir / "regimes.gp",
                 "set key autotitle columnhead\nset xlabel 'n'\nset ylabel 'omega_h / omega (sorted)'\n"
                 "plot for [c in 'standard f0_alpha_1/h f0.5_alpha_h f_gt_1_first_order mass_only_beta_h3'] "
                 "'regime_spectra.csv' using (strcol(2) eq c ? $3 : NaN):6 with points title c\n",
                 report);
}

void run_trace(const ExperimentConfig& config, const std::filesystem::path& dir, RunReport& report)
{
    CsvFile trace(dir / "trace.csv", config, {"p", "iteration", "alpha", "beta", "omega_max", "target", "accepted"},
                  report);
    CsvFile iterations(dir / "iterations.csv", config, {"p", "iteration", "n", "omega_exact", "omega_h", "ratio"},
                       report);
    for (int p : config.degrees) {
        const MultipatchSpace space = build(config, p, config.elements);
        const OperatorSet ops = assemble_operators(space);
        Algorithm1Options options;
        options.max_outer = config.max_outer;
        const PerturbationParams params = algorithm1_estimate(ops, config.f, config.c, options);

        const AnalyticModeSet analytic(config.problem, modes_per_direction(space));
        auto emit_spectrum = [&](int iteration, const PerturbedOperators& pair) {
            const Spectrum s = solve_gevp(pair.stiffness, pair.mass, false);
            for (Eigen::Index i = 0; i < s.frequencies.size(); ++i) {
                const double exact = analytic.omega(static_cast<std::size_t>(i));
                iterations->cell(p).cell(iteration).cell(static_cast<std::size_t>(i + 1)).cell(exact).cell(s.frequencies[i]).cell(
                    s.frequencies[i] / exact);
                iterations->end_row();
            }
        };
        emit_spectrum(0, PerturbedOperators{ops.stiffness, ops.mass});
        double previous = params.omega_max_unperturbed;
        for (const IterationRecord& r : params.trace) {
            const bool accepted = r.omega_max <= previous;
            trace->cell(p).cell(r.iteration).cell(r.alpha).cell(r.beta).cell(r.omega_max).cell(r.target).cell(accepted);
            trace->end_row();
            PerturbationParams step;
            step.alpha = r.alpha;
            step.beta = r.beta;
            emit_spectrum(r.iteration, perturb(ops, step));
            previous = r.omega_max;
        }
    }
    write_script(dir / "iterations.gp",
                 "set key autotitle columnhead\nset xlabel 'n'\nset ylabel 'omega_h / omega (sorted)'\n"
                 "stats 'iterations.csv' using 2 nooutput\n"
                 "plot for [it=0:int(STATS_max)] 'iterations.csv' using ($2 == it ? $3 : NaN):6 "
                 "with lines title sprintf('iteration %d', it)\n",
                 report);
}

struct Variant {
    std::string name;
    bool perturbed;
};

std::vector<Variant> variants(const ExperimentConfig& config)
{
    std::vector<Variant> v{{"standard", false}};
    if (config.perturbation != PerturbationMode::none) {
        v.push_back({"perturbed", true});
    }
    return v;
}

void run_convergence(const ExperimentConfig& config, const std::filesystem::path& dir, RunReport& report)
{
    CsvFile errors(dir / "errors.csv", config, {"p", "variant", "elements", "h", "freq_err", "mode_l2_err"}, report);
    CsvFile slopes(dir / "slopes.csv", config,
                   {"p", "variant", "freq_slope", "freq_expected", "mode_slope", "mode_expected"}, report);
    const bool fourth = problem_kind(config.problem).order == OperatorOrder::fourth;
    const auto index = static_cast<std::size_t>(config.mode - 1);
    for (int p : config.degrees) {
        for (const Variant& variant : variants(config)) {
            std::vector<double> hs;
            std::vector<double> fe;
            std::vector<double> le;
            for (int e : config.mesh_levels()) {
                const std::string label = "p=" + std::to_string(p) + ", " + std::to_string(e) + " elements";
                const MultipatchSpace space = build(config, p, e);
                const OperatorSet ops = assemble_operators(space);
                if (index >= space.dimension()) {
                    throw ArgumentError("mode " + std::to_string(config.mode) + " exceeds the " +
                                        std::to_string(space.dimension()) + " unknowns of " + label);
                }
                const PerturbationParams params =
                    variant.perturbed ? choose_params(ops, space, config, label, report) : PerturbationParams{};
                const PerturbedOperators pair = perturb(ops, params);
                const Spectrum spectrum = solve_gevp(pair.stiffness, pair.mass);
                const AnalyticModeSet analytic(config.problem, space.dimension());
                const MatchedSpectrum m = match_modes(spectrum, analytic, space, ops.mass);
                const Eigenpair polished =
                    refine_eigenpair(pair.stiffness, pair.mass, m.modes.col(static_cast<Eigen::Index>(index)));
                const double freq = frequency_error_1d(polished.vector, analytic, index, space, ops, params);
                const double mode = mode_l2_distance_1d(polished.vector, analytic, index, space);
                errors->cell(p).cell(variant.name).cell(e).cell(ops.element_size).cell(freq).cell(mode);
                errors->end_row();
                hs.push_back(ops.element_size);
                fe.push_back(std::abs(freq));
                le.push_back(mode);
            }
            const int freq_expected = fourth ? 2 * (p - 1) : 2 * p;
            slopes->cell(p).cell(variant.name).cell(convergence_order(hs, fe)).cell(freq_expected).cell(
                convergence_order(hs, le)).cell(p + 1);
            slopes->end_row();
        }
    }
    write_script(dir / "convergence.gp",
                 "set logscale xy\nset xlabel 'h'\nset ylabel 'relative error'\nset key left top\n"
                 "plot 'errors.csv' using 4:(abs($5)) every ::1 with linespoints title 'frequency', \\\n"
                 "     'errors.csv' using 4:6 every ::1 with linespoints title 'mode (L2)'\n",
                 report);
}

void run_dynamics(const ExperimentConfig& config, const std::filesystem::path& dir, RunReport& report)
{
    CsvFile errors(dir / "dynamics_errors.csv", config,
                   {"p", "variant", "elements", "h", "dt", "steps", "l2_error"}, report);
    CsvFile slopes(dir / "slopes.csv", config, {"p", "variant", "slope", "expected"}, report);
    const double pi = std::numbers::pi;
    const double omega = std::sqrt(2.0) * pi;
    const double t_end = config.periods * 2.0 * pi / omega;
    const std::vector<int> levels = config.mesh_levels();
    std::ostringstream plot;
    plot << "set key autotitle columnhead\nset xlabel 't'\nset ylabel 'relative L2 error'\nplot ";
    bool first = true;

    for (int p : config.degrees) {
        for (const Variant& variant : variants(config)) {
            std::vector<double> hs;
            std::vector<double> errs;
            for (std::size_t level = 0; level < levels.size(); ++level) {
                const int e = levels[level];
                const std::string label = "p=" + std::to_string(p) + ", " + std::to_string(e) + " elements";
                const MultipatchSpace space = build(config, p, e);
                const OperatorSet ops = assemble_operators(space);
                const PerturbationParams params =
                    variant.perturbed ? choose_params(ops, space, config, label, report) : PerturbationParams{};
                const AnalyticModeSet lowest(config.problem, 1);
                const Eigen::VectorXd u0 = project_mode(lowest, 0, space, ops.mass);
                const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(u0.size());
                const double dt = std::pow(p / (2.0 * e), p);

                const bool finest = level + 1 == levels.size();
                IntegrateOptions options;
                options.error = [&](double t, const Eigen::VectorXd& u) {
                    const double ct = std::cos(omega * t);
                    return l2_distance(space, u,
                                       [&](double x, double y) { return std::sin(pi * x) * std::sin(pi * y) * ct; }) /
                           0.5;
                };
                if (finest) {
                    options.sample_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt)) / 200);
                }
                const Trajectory tr = integrate(ops, params, u0, v0, dt, t_end, options);
                const double err = tr.samples.back().error;
                errors->cell(p).cell(variant.name).cell(e).cell(ops.element_size).cell(tr.dt).cell(tr.steps).cell(err);
                errors->end_row();
                hs.push_back(ops.element_size);
                errs.push_back(err);

                if (finest) {
                    const std::string name = "trajectory_p" + std::to_string(p) + "_" + variant.name + ".csv";
                    CsvFile traj(dir / name, config, {"t", "l2_error", "total_energy"}, report);
                    for (const Sample& s : tr.samples) {
                        traj->cell(s.t).cell(s.error).cell(s.energy.total);
                        traj->end_row();
                    }
                    plot << (first ? "" : ", \\\n     ") << "'" << name << "' using 1:2 with lines title '"
                         << "p=" << p << " " << variant.name << "'";
                    first = false;
                }
            }
            slopes->cell(p).cell(variant.name).cell(convergence_order(hs, errs)).cell(p + 1);
            slopes->end_row();
        }
    }
    plot << "\n";
    write_script(dir / "dynamics.gp", plot.str(), report);
}

void run_timesteps(const ExperimentConfig& config, const std::filesystem::path& dir, RunReport& report)
{
    CsvFile table(dir / "dtcrit.csv", config, {"p", "elements", "variant", "omega_max", "dt_crit", "alpha", "beta"},
                  report);
    for (int p : config.degrees) {
        for (int e : config.mesh_levels()) {
            const std::string label = "p=" + std::to_string(p) + ", " + std::to_string(e) + " elements";
            const MultipatchSpace space = build(config, p, e);
            const OperatorSet ops = assemble_operators(space);
            const double standard = top_eigenpair(ops.stiffness, ops.mass).omega;
            table->cell(p).cell(e).cell("standard").cell(standard).cell(critical_timestep(standard)).cell(0.0).cell(0.0);
            table->end_row();
            if (config.perturbation == PerturbationMode::none) {
                continue;
            }
            const PerturbationParams params = choose_params(ops, space, config, label, report);
            double improved = standard;
            if (is_perturbed(params)) {
                const PerturbedOperators pair = perturb(ops, params);
                improved = top_eigenpair(pair.stiffness, pair.mass).omega;
            }
            table->cell(p).cell(e).cell("improved").cell(improved).cell(critical_timestep(improved));
            if (params.per_level()) {
                table->cell("per-level").cell("per-level");
            } else {
                table->cell(params.alpha).cell(params.beta);
            }
            table->end_row();
        }
    }
    write_script(dir / "dtcrit.gp",
                 "set key autotitle columnhead\nset logscale y\nset xlabel 'elements per patch'\n"
                 "set ylabel 'critical time step'\n"
                 "plot 'dtcrit.csv' using (strcol(3) eq 'standard' ? $2 : NaN):5 with points pt 7 title 'standard', \\\n"
                 "     'dtcrit.csv' using (strcol(3) eq 'improved' ? $2 : NaN):5 with points pt 6 title 'improved'\n",
                 report);
}

} // namespace

const std::vector<ExperimentInfo>& experiment_registry()
{
    return kRegistry;
}

const ExperimentInfo& experiment_info(ExperimentKind kind)
{
    for (const ExperimentInfo& info : kRegistry) {
        if (info.kind == kind) {
            return info;
        }
    }
    throw ArgumentError("no registry entry for experiment kind");
}

void write_registry(std::ostream& os, bool machine_readable)
{
    auto join = [](const std::vector<std::string>& v, const char* sep) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? sep : "") + v[i];
        }
        return s;
    };
    for (const ExperimentInfo& info : kRegistry) {
        if (machine_readable) {
            os << "name=" << to_string(info.kind) << ";summary=" << info.summary << ";reproduces=" << info.reproduces
               << ";keys=" << join(info.keys, ",") << ";outputs=" << join(info.outputs, ",") << '\n';
        } else {
            os << to_string(info.kind) << "\n"
               << "  " << info.summary << "\n"
               << "  reproduces: " << info.reproduces << "\n"
               << "  keys:       " << join(info.keys, ", ") << "\n"
               << "  outputs:    " << join(info.outputs, ", ") << "\n";
        }
    }
}

RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir)
{
    validate(config);
    std::filesystem::create_directories(out_dir);
    RunReport report;
    switch (config.experiment) {
    case ExperimentKind::spectrum_1d:
    case ExperimentKind::spectrum_2d:
        run_spectrum(config, out_dir, report);
        break;
    case ExperimentKind::regime_probe:
        run_regimes(config, out_dir, report);
        break;
    case ExperimentKind::algorithm1_trace:
        run_trace(config, out_dir, report);
        break;
    case ExperimentKind::convergence:
        run_convergence(config, out_dir, report);
        break;
    case ExperimentKind::dynamics:
        run_dynamics(config, out_dir, report);
        break;
    case ExperimentKind::timestep_sweep:
        run_timesteps(config, out_dir, report);
        break;
    }
    return report;
}

} // namespace mpspec
