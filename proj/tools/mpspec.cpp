#include "mpspec/config.hpp"
#include "mpspec/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed,
        const std::vector<std::string>& overrides)
{
    mpspec::ExperimentConfig config;
    try {
        config = mpspec::parse_config_file(config_path);
        mpspec::apply_overrides(config, overrides);
        if (seed) {
            config.seed = *seed;
        }
        if (!out.empty()) {
            config.output = out;
        }
        mpspec::validate(config);
    } catch (const mpspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const mpspec::ArgumentError& e) {
        // Unknown experiment or perturbation names surface here with the valid list.
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const mpspec::RunReport report = mpspec::run_experiment(config, config.output);
        for (const auto& note : report.notes) {
            std::cerr << "note: " << note << '\n';
        }
        for (const auto& file : report.files) {
            std::cout << file.string() << '\n';
        }
    } catch (const mpspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const mpspec::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra, outlier removal and explicit dynamics of multipatch spline discretizations"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::uint64_t seed_value = 0;
    std::vector<std::string> overrides;
    CLI::App* run_cmd = app.add_subcommand("run", "run one experiment from a key=value config file");
    run_cmd->add_option("-c,--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--out", out, "output directory (overrides the 'output' key)");
    CLI::Option* seed_opt = run_cmd->add_option("--seed", seed_value, "seed recorded with the outputs");
    run_cmd->add_option("--override", overrides, "key=value assignment applied after the file")->take_all();

    bool machine = false;
    CLI::App* list_cmd = app.add_subcommand("list", "list the available experiments");
    list_cmd->add_flag("--machine", machine, "one key=value record per line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (list_cmd->parsed()) {
        mpspec::write_registry(std::cout, machine);
        return 0;
    }
    std::optional<std::uint64_t> seed;
    if (*seed_opt) {
        seed = seed_value;
    }
    return run(config_path, out, seed, overrides);
}
