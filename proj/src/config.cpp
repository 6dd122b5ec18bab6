#include "thermolat/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "thermolat/errors.hpp"

namespace thermolat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

}  // namespace

void RunConfig::validate() const {
    if (grid_size < 2) throw ConfigurationError("grid_size must be >= 2");
    if (!(solver_tol > 0.0)) throw ConfigurationError("solver_tol must be positive");
    if (!(quad_tol > 0.0)) throw ConfigurationError("quad_tol must be positive");
    if (!(stat_sigmas > 0.0)) throw ConfigurationError("stat_sigmas must be positive");
    if (!(budget_bits > 0.0)) throw ConfigurationError("budget_bits must be positive");
    for (std::size_t i = 1; i < betas.size(); ++i)
        if (!(betas[i] > betas[i - 1]))
            throw ConfigurationError("betas must be strictly increasing");
    for (double b : betas)
        if (!(b > 0.0)) throw ConfigurationError("betas must be positive");
    if (boundary.empty()) throw ConfigurationError("boundary prefix must not be empty");
}

std::map<std::string, std::string> RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["run.potential"] = potential_id;
    kv["run.potential_params"] = format_list(potential_params);
    kv["run.density"] = density_id;
    kv["grid.size"] = std::to_string(grid_size);
    kv["tol.solver"] = format_double(solver_tol);
    kv["tol.quadrature"] = format_double(quad_tol);
    kv["tol.stat_sigmas"] = format_double(stat_sigmas);
    kv["zerotemp.betas"] = format_list(betas);
    {
        std::string s;
        for (std::size_t i = 0; i < volumes.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(volumes[i]);
        }
        kv["spec.volumes"] = s;
    }
    kv["mc.seed"] = std::to_string(seed);
    kv["mc.sweeps"] = std::to_string(sweeps);
    kv["spec.budget_bits"] = format_double(budget_bits);
    kv["spec.boundary"] = format_list(boundary);
    kv["run.deterministic"] = deterministic ? "1" : "0";
    kv["zerotemp.grid_doubling"] = grid_doubling ? "1" : "0";
    return kv;
}

namespace {

void assign_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "run.potential" || key == "potential") {
        cfg.potential_id = value;
    } else if (key == "run.potential_params" || key == "potential_params") {
        cfg.potential_params = parse_list(value);
    } else if (key == "run.density" || key == "density") {
        cfg.density_id = value;
    } else if (key == "grid.size" || key == "grid_size") {
        cfg.grid_size = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "tol.solver" || key == "solver_tol" || key == "tol") {
        cfg.solver_tol = std::stod(value);
    } else if (key == "tol.quadrature" || key == "quad_tol") {
        cfg.quad_tol = std::stod(value);
    } else if (key == "tol.stat_sigmas" || key == "stat_sigmas") {
        cfg.stat_sigmas = std::stod(value);
    } else if (key == "zerotemp.betas" || key == "betas") {
        cfg.betas = parse_list(value);
    } else if (key == "spec.volumes" || key == "volumes") {
        cfg.volumes.clear();
        for (double v : parse_list(value))
            cfg.volumes.push_back(static_cast<std::size_t>(v));
    } else if (key == "mc.seed" || key == "seed") {
        cfg.seed = std::stoull(value);
    } else if (key == "mc.sweeps" || key == "sweeps") {
        cfg.sweeps = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "spec.budget_bits" || key == "budget_bits") {
        cfg.budget_bits = std::stod(value);
    } else if (key == "spec.boundary" || key == "boundary") {
        cfg.boundary = parse_list(value);
    } else if (key == "run.deterministic" || key == "deterministic") {
        cfg.deterministic = value == "1" || value == "true";
    } else if (key == "zerotemp.grid_doubling" || key == "grid_doubling") {
        cfg.grid_doubling = value == "1" || value == "true";
    } else if (key == "run.out_dir" || key == "out_dir" || key == "out") {
        cfg.out_dir = value;
    } else {
        throw ConfigurationError("unknown config key: " + key);
    }
}

}  // namespace

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file: " + path);
    std::string line, section;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("malformed config line: " + line);
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        assign_key(cfg, key, value);
    }
}

void apply_env_overrides(RunConfig& cfg) {
    // Environment names mirror flat keys: THERMOLAT_GRID_SIZE, THERMOLAT_SEED, ...
    static const std::pair<const char*, const char*> vars[] = {
        {"THERMOLAT_POTENTIAL", "potential"},
        {"THERMOLAT_POTENTIAL_PARAMS", "potential_params"},
        {"THERMOLAT_DENSITY", "density"},
        {"THERMOLAT_GRID_SIZE", "grid_size"},
        {"THERMOLAT_TOL", "tol"},
        {"THERMOLAT_QUAD_TOL", "quad_tol"},
        {"THERMOLAT_BETAS", "betas"},
        {"THERMOLAT_VOLUMES", "volumes"},
        {"THERMOLAT_SEED", "seed"},
        {"THERMOLAT_SWEEPS", "sweeps"},
        {"THERMOLAT_BUDGET_BITS", "budget_bits"},
        {"THERMOLAT_BOUNDARY", "boundary"},
        {"THERMOLAT_DETERMINISTIC", "deterministic"},
        {"THERMOLAT_OUT_DIR", "out_dir"},
    };
    for (const auto& [env, key] : vars) {
        if (const char* v = std::getenv(env)) assign_key(cfg, key, v);
    }
}

std::string config_digest(const RunConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [k, v] : cfg.canonical()) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace thermolat
