/// @file config.hpp
/// @brief Run configuration in a line-oriented `section.key = value` format.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "couette/grid.hpp"
#include "couette/params.hpp"
#include "couette/solver.hpp"

namespace couette {

enum class ExperimentKind { sweep, stiffness };

struct RunConfig {
    double gamma = 1.4;
    double mach = 0.1 / std::sqrt(1.4);  // eps = 0.1
    std::optional<double> eps;                // when set, takes precedence over mach
    double reynolds = 1.0;
    double prandtl = 0.72;
    double visc_ratio = 1.0 / 3.0;
    double chi = 1.0;

    int n1 = 64;
    int n2 = 64;

    SolverConfig solver;
    Amplitudes initial;

    ExperimentKind experiment = ExperimentKind::sweep;
    std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> stiffness_eps_list = {2e-4, 1e-4, 5e-5};
    bool parallel = true;

    std::string output_dir = "out";

    PhysicalParams params() const;
    Grid grid() const;
    bool operator==(const RunConfig&) const = default;
};

struct ParsedConfig {
    RunConfig config;
    /// One line per defaulted key, per key set in the text and per override.
    std::vector<std::string> log;
};

/// Parses and validates. `overrides` are `key=value` strings applied after the text.
/// Throws ConfigError naming the key and line (0 for defaults, -1 for overrides).
ParsedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Text that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace couette
