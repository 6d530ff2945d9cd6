#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sap/simulator.hpp"

namespace sap {

/// Schema violation. what() starts with the JSON path of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Evenly spaced values, linear or logarithmic, endpoints included.
struct Sweep {
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log = false;

    std::vector<double> values() const;
};

struct OpCurveConfig {
    double beta = 1.0;
    Sweep interference_dbm;            // analytic curve against sensed power
    std::optional<double> radius;      // set: curve against beta at this empty-ball radius
    Sweep beta_db;                     // used with radius
    double radius_band = 0.05;         // relative band for the radius-conditioned MC
    bool monte_carlo = true;
    OracleSpec oracle;
};

struct AseSweepConfig {
    Sweep beta_db;
};

struct CompareMacsConfig {
    std::vector<double> beta_over_beta_min;  // grid in units of beta_min
    std::vector<std::string> macs;
    CompareSpec spec;
};

struct FitLConfig {
    std::vector<double> xi;
    Sweep axis_length_m;
    double beta = 1.0;
    OracleSpec oracle;
};

struct CensusConfig {
    std::vector<double> beamwidths;  // rad
    CensusSpec spec;
};

struct ValidateConfig {
    double budget_scale = 1.0;
};

struct ExperimentConfig {
    std::string name;
    NetworkParams network;
    NumericsConfig numerics;
    std::uint64_t seed = 1;
    int workers = 1;
    std::optional<OpCurveConfig> op_curve;
    std::optional<AseSweepConfig> ase_sweep;
    std::optional<CompareMacsConfig> compare_macs;
    std::optional<FitLConfig> fit_l;
    std::optional<CensusConfig> census;
    ValidateConfig validate;
};

ExperimentConfig parse_config(const nlohmann::json& j);
/// Reads and parses a file; unreadable files and JSON syntax errors are ConfigErrors at path "$".
ExperimentConfig load_config(const std::string& path);

/// Network parameters in the config's human units.
nlohmann::json network_to_json(const NetworkParams& p);
NetworkParams network_from_json(const nlohmann::json& j, const std::string& path = "$.network");

/// Builds a MAC from its config name: sap, no_prediction, tx_threshold,
/// genie_rx or no_blockage_op (SaP driven by the blockage-free OP).
MacSpec mac_from_name(const std::string& name, const NetworkParams& p);

}  // namespace sap
