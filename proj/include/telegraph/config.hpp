#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "telegraph/acceptance.hpp"
#include "telegraph/ilt.hpp"
#include "telegraph/model.hpp"
#include "telegraph/pde_solver.hpp"

namespace telegraph {

struct SimBlock {
    std::size_t paths = 100000;
    std::uint64_t seed = 42;
    unsigned workers = 1;
    double t_max = 2.0;
};

struct PdeBlock {
    int nx = 1000;
    double cfl = 1.0;
    double t_max = 2.0;
};

struct TransformBlock {
    IltConfig ilt{IltMethod::Euler, 32, 64, std::nullopt, 18};
    std::vector<double> m_values{0.5, 1.0, 2.0, 5.0};
    std::vector<double> xi_values{-5.0, -1.0, 0.0, 1.0, 5.0};
    int reconstruct_terms = 256;
};

struct OutputBlock {
    std::string dir = "out";
    std::vector<double> times{0.5, 1.0, 2.0};
    int grid_points = 101;
    double series_step = 0.01;
    bool svg = true;
};

/// Parsed configuration file: `block.key = value` lines, `#` comments.
struct RunConfig {
    ProcessParams params;
    std::vector<Atom> atoms;
    SimBlock sim;
    PdeBlock pde;
    TransformBlock transform;
    OutputBlock output;
    AcceptanceConfig acceptance;

    InitialCondition initial_condition() const { return InitialCondition(atoms, params.B); }
    PdeConfig pde_config() const;
    /// Acceptance settings with model, init, seed, workers and inversion filled in.
    AcceptanceConfig acceptance_config() const;
};

/// Parses and validates. Unknown keys, duplicate keys, malformed values and a
/// missing model or init block are ConfigError; block contents are checked by
/// their owning modules.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text form (every key, fixed order, shortest round-trip numbers).
std::string normalized(const RunConfig& cfg);

/// FNV-1a 64 of the normalized text with output.dir left out, so the same
/// run written to two places carries the same hash.
std::uint64_t config_hash(const RunConfig& cfg);

/// Shortest decimal form that round-trips, independent of the C locale.
std::string format_number(double v);

}  // namespace telegraph
