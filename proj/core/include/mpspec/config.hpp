#pragma once

#include "mpspec/analytic.hpp"
#include "mpspec/errors.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mpspec {

/// Unparseable or out-of-range configuration (line 0 = command-line override).
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line, std::string field)
        : Error(what)
        , line_(line)
        , field_(std::move(field))
    {
    }
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

enum class ExperimentKind {
    spectrum_1d,
    spectrum_2d,
    regime_probe,
    algorithm1_trace,
    convergence,
    dynamics,
    timestep_sweep,
};

enum class PerturbationMode { none, exact_target, algorithm1, penalty_only_f0, mass_only };

std::string to_string(ExperimentKind kind);
std::string to_string(PerturbationMode mode);
/// Throws ArgumentError listing the valid names.
ExperimentKind parse_experiment_kind(const std::string& name);
PerturbationMode parse_perturbation_mode(const std::string& name);
const std::vector<ExperimentKind>& all_experiment_kinds();

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::spectrum_1d;
    ModelProblem problem = ModelProblem::fixed_bar;
    std::vector<int> degrees{2};
    int patches = 2;          ///< per direction
    int elements = 25;        ///< per patch and direction
    int refinements = 3;      ///< convergence and dynamics levels (elements doubled each time)
    /// Explicit elements-per-patch sequence; replaces elements/refinements when set.
    std::vector<int> levels;
    int mode = 18;            ///< analytic mode index tracked by the convergence study
    PerturbationMode perturbation = PerturbationMode::algorithm1;
    double f = 2.0;
    double c = 0.9;
    std::optional<double> alpha;
    std::optional<double> beta;
    int max_outer = 50;
    double periods = 1.0;     ///< dynamics run length in periods of the lowest mode
    std::string output = "out";
    std::uint64_t seed = 0;

    /// Elements per patch of every refinement level.
    [[nodiscard]] std::vector<int> mesh_levels() const;

    /// "key = value" lines in a fixed order, used for CSV headers.
    [[nodiscard]] std::vector<std::string> resolved_lines() const;
};

/// Applies one "key=value" assignment; line is reported in diagnostics.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value, std::size_t line = 0);

/// Reads "key = value" lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Applies "key=value" overrides after the file.
void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides);

/// Cross-field checks (degrees versus problem, patches >= 1, ...).
void validate(const ExperimentConfig& config);

} // namespace mpspec
