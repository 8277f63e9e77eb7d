#include "mpspec/config.hpp"

#include "mpspec/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace mpspec {

namespace {

struct Named {
    ExperimentKind kind;
    const char* name;
};

constexpr Named kKinds[] = {
    {ExperimentKind::spectrum_1d, "spectrum_1d"},       {ExperimentKind::spectrum_2d, "spectrum_2d"},
    {ExperimentKind::regime_probe, "regime_probe"},     {ExperimentKind::algorithm1_trace, "algorithm1_trace"},
    {ExperimentKind::convergence, "convergence"},       {ExperimentKind::dynamics, "dynamics"},
    {ExperimentKind::timestep_sweep, "timestep_sweep"},
};

struct NamedMode {
    PerturbationMode mode;
    const char* name;
};

constexpr NamedMode kModes[] = {
    {PerturbationMode::none, "none"},
    {PerturbationMode::exact_target, "exact_target"},
    {PerturbationMode::algorithm1, "algorithm1"},
    {PerturbationMode::penalty_only_f0, "penalty_only_f0"},
    {PerturbationMode::mass_only, "mass_only"},
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& msg, std::size_t line, const std::string& key)
{
    std::string where = line == 0 ? "override" : "line " + std::to_string(line);
    throw ConfigError(where + ", field '" + key + "': " + msg, line, key);
}

long long parse_int(const std::string& v, std::size_t line, const std::string& key)
{
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) {
        fail("expected an integer, got '" + v + "'", line, key);
    }
    return out;
}

double parse_real(const std::string& v, std::size_t line, const std::string& key)
{
    std::istringstream is(v);
    is.imbue(std::locale::classic());
    double out = 0.0;
    is >> out;
    if (is.fail() || !is.eof()) {
        fail("expected a real number, got '" + v + "'", line, key);
    }
    return out;
}

// "2", "2,3,4" or "2-5".
std::vector<int> parse_int_list(const std::string& v, std::size_t line, const std::string& key)
{
    std::vector<int> out;
    const auto dash = v.find('-');
    if (dash != std::string::npos && v.find(',') == std::string::npos) {
        const long long lo = parse_int(trim(v.substr(0, dash)), line, key);
        const long long hi = parse_int(trim(v.substr(dash + 1)), line, key);
        if (hi < lo) {
            fail("empty range '" + v + "'", line, key);
        }
        for (long long i = lo; i <= hi; ++i) {
            out.push_back(static_cast<int>(i));
        }
        return out;
    }
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
        out.push_back(static_cast<int>(parse_int(trim(item), line, key)));
    }
    if (out.empty()) {
        fail("empty list", line, key);
    }
    return out;
}

int positive_int(const std::string& v, std::size_t line, const std::string& key)
{
    const long long x = parse_int(v, line, key);
    if (x < 1 || x > 100000) {
        fail("must be a positive integer", line, key);
    }
    return static_cast<int>(x);
}

std::string join(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s;
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    for (const Named& n : kKinds) {
        if (n.kind == kind) {
            return n.name;
        }
    }
    return "unknown";
}

std::string to_string(PerturbationMode mode)
{
    for (const NamedMode& n : kModes) {
        if (n.mode == mode) {
            return n.name;
        }
    }
    return "unknown";
}

const std::vector<ExperimentKind>& all_experiment_kinds()
{
    static const std::vector<ExperimentKind> kinds = [] {
        std::vector<ExperimentKind> v;
        for (const Named& n : kKinds) {
            v.push_back(n.kind);
        }
        return v;
    }();
    return kinds;
}

ExperimentKind parse_experiment_kind(const std::string& name)
{
    std::string valid;
    for (const Named& n : kKinds) {
        if (name == n.name) {
            return n.kind;
        }
        valid += (valid.empty() ? "" : ", ") + std::string(n.name);
    }
    throw ArgumentError("unknown experiment '" + name + "'; valid: " + valid);
}

PerturbationMode parse_perturbation_mode(const std::string& name)
{
    std::string valid;
    for (const NamedMode& n : kModes) {
        if (name == n.name) {
            return n.mode;
        }
        valid += (valid.empty() ? "" : ", ") + std::string(n.name);
    }
    throw ArgumentError("unknown perturbation mode '" + name + "'; valid: " + valid);
}

std::vector<int> ExperimentConfig::mesh_levels() const
{
    if (!levels.empty()) {
        return levels;
    }
    std::vector<int> out;
    for (int k = 0; k < refinements; ++k) {
        out.push_back(elements << k);
    }
    return out;
}

std::vector<std::string> ExperimentConfig::resolved_lines() const
{
    std::vector<std::string> l;
    l.push_back("experiment = " + to_string(experiment));
    l.push_back("problem = " + to_string(problem));
    l.push_back("p = " + join(degrees));
    l.push_back("patches = " + std::to_string(patches));
    l.push_back("elements = " + std::to_string(elements));
    l.push_back("refinements = " + std::to_string(refinements));
    l.push_back("levels = " + (levels.empty() ? std::string("auto") : join(levels)));
    l.push_back("mode = " + std::to_string(mode));
    l.push_back("perturbation = " + to_string(perturbation));
    l.push_back("f = " + format_real(f));
    l.push_back("c = " + format_real(c));
    l.push_back("alpha = " + (alpha ? format_real(*alpha) : std::string("auto")));
    l.push_back("beta = " + (beta ? format_real(*beta) : std::string("auto")));
    l.push_back("max_outer = " + std::to_string(max_outer));
    l.push_back("periods = " + format_real(periods));
    l.push_back("output = " + output);
    l.push_back("seed = " + std::to_string(seed));
    return l;
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value, std::size_t line)
{
    try {
        if (key == "experiment") {
            config.experiment = parse_experiment_kind(value);
        } else if (key == "problem") {
            config.problem = parse_model_problem(value);
        } else if (key == "p") {
            config.degrees = parse_int_list(value, line, key);
        } else if (key == "patches") {
            config.patches = positive_int(value, line, key);
        } else if (key == "elements") {
            config.elements = positive_int(value, line, key);
        } else if (key == "refinements") {
            config.refinements = positive_int(value, line, key);
        } else if (key == "levels") {
            config.levels.clear();
            if (value != "auto") {
                for (int e : parse_int_list(value, line, key)) {
                    if (e < 1) {
                        fail("levels must be positive", line, key);
                    }
                    config.levels.push_back(e);
                }
            }
        } else if (key == "mode") {
            config.mode = positive_int(value, line, key);
        } else if (key == "perturbation") {
            config.perturbation = parse_perturbation_mode(value);
        } else if (key == "f") {
            config.f = parse_real(value, line, key);
        } else if (key == "c") {
            config.c = parse_real(value, line, key);
        } else if (key == "alpha") {
            config.alpha = value == "auto" ? std::nullopt : std::optional(parse_real(value, line, key));
        } else if (key == "beta") {
            config.beta = value == "auto" ? std::nullopt : std::optional(parse_real(value, line, key));
        } else if (key == "max_outer") {
            config.max_outer = positive_int(value, line, key);
        } else if (key == "periods") {
            config.periods = parse_real(value, line, key);
        } else if (key == "output") {
            config.output = value;
        } else if (key == "seed") {
            const long long s = parse_int(value, line, key);
            if (s < 0) {
                fail("must be nonnegative", line, key);
            }
            config.seed = static_cast<std::uint64_t>(s);
        } else {
            fail("unknown key", line, key);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(e.what(), line, key);
    }
}

ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig config;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected key = value", line, "");
        }
        apply_setting(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line);
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'", 0, "");
    }
    return parse_config(in);
}

void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides)
{
    for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override '" + o + "' is not key=value", 0, o);
        }
        apply_setting(config, trim(o.substr(0, eq)), trim(o.substr(eq + 1)), 0);
    }
}

void validate(const ExperimentConfig& config)
{
    const ProblemKind kind = problem_kind(config.problem);
    const int min_p = kind.order == OperatorOrder::second ? 1 : 2;
    for (int p : config.degrees) {
        if (p < min_p || p > 10) {
            throw ConfigError("degree " + std::to_string(p) + " outside [" + std::to_string(min_p) + ", 10] for " +
                                  to_string(config.problem),
                              0, "p");
        }
    }
    const bool two_d = spatial_dimension(config.problem) == 2;
    switch (config.experiment) {
    case ExperimentKind::spectrum_1d:
    case ExperimentKind::regime_probe:
    case ExperimentKind::convergence:
        if (two_d) {
            throw ConfigError(to_string(config.experiment) + " needs a 1D problem", 0, "problem");
        }
        break;
    case ExperimentKind::spectrum_2d:
    case ExperimentKind::dynamics:
        if (!two_d) {
            throw ConfigError(to_string(config.experiment) + " needs a 2D problem", 0, "problem");
        }
        break;
    case ExperimentKind::algorithm1_trace:
    case ExperimentKind::timestep_sweep:
        break;
    }
    if (config.experiment == ExperimentKind::dynamics && config.problem != ModelProblem::fixed_membrane) {
        throw ConfigError("dynamics runs the fixed membrane standing wave", 0, "problem");
    }
    if (config.experiment == ExperimentKind::regime_probe && config.problem != ModelProblem::fixed_bar &&
        config.problem != ModelProblem::free_bar) {
        throw ConfigError("regime_probe needs a second-order bar", 0, "problem");
    }
    if (!(config.f >= 0.0)) {
        throw ConfigError("f must be nonnegative", 0, "f");
    }
    if (config.perturbation == PerturbationMode::algorithm1 || config.perturbation == PerturbationMode::exact_target) {
        if (!(config.f > 1.0)) {
            throw ConfigError("estimation needs f > 1", 0, "f");
        }
    }
    if (!(config.c > 0.0 && config.c < 1.0)) {
        throw ConfigError("c must lie in (0, 1)", 0, "c");
    }
    if (config.alpha && !(*config.alpha >= 0.0)) {
        throw ConfigError("alpha must be nonnegative", 0, "alpha");
    }
    if (config.beta && !(*config.beta >= 0.0)) {
        throw ConfigError("beta must be nonnegative", 0, "beta");
    }
    if (!(config.periods > 0.0)) {
        throw ConfigError("periods must be positive", 0, "periods");
    }
    const bool refined = config.experiment == ExperimentKind::convergence || config.experiment == ExperimentKind::dynamics;
    if (refined && config.mesh_levels().size() < 3) {
        throw ConfigError("a convergence study needs at least 3 refinement levels", 0,
                          config.levels.empty() ? "refinements" : "levels");
    }
    if (config.refinements > 12) {
        throw ConfigError("at most 12 refinement levels", 0, "refinements");
    }
    if (config.perturbation == PerturbationMode::exact_target && spatial_dimension(config.problem) != 1) {
        throw ConfigError("exact_target estimation is one-dimensional", 0, "perturbation");
    }

}

} // namespace mpspec
