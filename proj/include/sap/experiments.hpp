#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sap/config.hpp"
#include "sap/table.hpp"

namespace sap {

struct CommandResult {
    std::vector<std::pair<std::string, Table>> files;  // file stem -> table
    nlohmann::json diagnostics = nlohmann::json::object();
};

CommandResult cmd_op_curve(const ExperimentConfig& cfg);
CommandResult cmd_ase_sweep(const ExperimentConfig& cfg);
CommandResult cmd_compare_macs(const ExperimentConfig& cfg);
CommandResult cmd_fit_l(const ExperimentConfig& cfg);
CommandResult cmd_census(const ExperimentConfig& cfg);

/// Every resolved input of a run, in both config and SI units.
nlohmann::json resolved_parameters(const ExperimentConfig& cfg);

/// Writes <stem>.csv for every table plus <command>.json holding the
/// metadata, diagnostics and a creation timestamp. Timestamps never enter
/// the CSV files.
void write_outputs(const std::filesystem::path& dir, const std::string& command, const CommandResult& result,
                   const nlohmann::json& metadata);

}  // namespace sap
