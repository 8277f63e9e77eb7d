#pragma once

#include "mpspec/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mpspec {

struct ExperimentInfo {
    ExperimentKind kind;
    std::string summary;
    /// The published study the experiment regenerates.
    std::string reproduces;
    /// Config keys the experiment reads.
    std::vector<std::string> keys;
    std::vector<std::string> outputs;
};

const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo& experiment_info(ExperimentKind kind);

/// Human-readable listing, or one "key=value;..." record per experiment when
/// machine_readable is set.
void write_registry(std::ostream& os, bool machine_readable);

struct RunReport {
    std::vector<std::filesystem::path> files;
    /// Non-fatal remarks, e.g. a degree without interface outliers.
    std::vector<std::string> notes;
};

/// Runs one configured experiment and writes its CSV files and gnuplot
/// scripts into out_dir (created if missing). Every CSV starts with the
/// resolved configuration as '#' comments. Validates the config first.
RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

} // namespace mpspec
