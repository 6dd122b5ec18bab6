#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace thermolat {

/// Run configuration shared by all CLI subcommands. Parsed from a flat
/// "key = value" file with [section] headers; flags and THERMOLAT_*
/// environment variables override file values.
struct RunConfig {
    std::string potential_id = "P2";
    std::vector<double> potential_params;
    std::string density_id = "gaussian";
    std::size_t grid_size = 200;
    double solver_tol = 1e-12;
    double quad_tol = 1e-8;
    double stat_sigmas = 3.0;
    std::vector<double> betas = {1, 2, 4, 8, 16, 32, 64};
    std::vector<std::size_t> volumes = {1, 2, 3};
    std::uint64_t seed = 12345;
    std::size_t sweeps = 100000;
    double budget_bits = 32.0;
    std::string out_dir = "out";
    bool deterministic = false;
    bool grid_doubling = false;
    std::vector<double> boundary = {0.5};

    void validate() const;  // throws ConfigurationError
    /// Canonical "section.key=value" lines, sorted by key.
    std::map<std::string, std::string> canonical() const;
};

/// Parses a config file into `cfg` (missing file -> ConfigurationError).
void load_config_file(const std::string& path, RunConfig& cfg);

/// Applies THERMOLAT_<UPPER_KEY> environment overrides.
void apply_env_overrides(RunConfig& cfg);

/// Stable FNV-1a hash of the canonicalized config, as a hex string.
std::string config_digest(const RunConfig& cfg);

}  // namespace thermolat
