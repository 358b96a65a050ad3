/// @file experiments.hpp
/// @brief Multi-run studies: the low-Mach eps sweep, the decay study and the stiffness
/// benchmark.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "couette/diagnostics.hpp"
#include "couette/solver.hpp"

namespace couette {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    bool valid = false;
    bool operator==(const SlopeFit&) const = default;
};

/// Ordinary least squares on (ln x, ln y). Needs >= 2 points, all coordinates > 0.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

struct SweepRow {
    double eps = 0.0;
    double sup_gap_rho = 0.0;
    double sup_gap_u = 0.0;
    double sup_gap_temp = 0.0;
    FieldTriple sup_l2;
    double runtime_s = 0.0;
    bool ok = true;
    std::string failure;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    /// Fits are valid only when every row succeeded and the column is positive.
    SlopeFit slope_rho, slope_u, slope_temp;
    bool poisoned = false;
    std::string failure;

    double max_residual() const;
    /// Equal in every cell except wall-clock time.
    bool same_results(const SweepTable& o) const;
};

/// Runs one simulation per eps (chi must be 1; >= 3 strictly decreasing values in (0, 0.5])
/// and fits log-log slopes of the sup-in-time gaps. Runs execute concurrently when
/// `parallel`; the table order is the declared order either way.
SweepTable epsilon_sweep(const std::vector<double>& eps_list, const PhysicalParams& params_template,
                         const Grid& grid, const SolverConfig& config, const Amplitudes& amplitudes,
                         bool parallel = true);

void write_sweep_csv(std::ostream& os, const SweepTable& table);
void write_sweep_summary(std::ostream& os, const SweepTable& table);

struct DecaySummary {
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double ratio = 0.0;           ///< final / initial (0 for zero data)
    double time_to_10pct = -1.0;  ///< first record at or below 10% of initial; -1 if never
    double monotonicity = 1.0;    ///< entropy monotonicity after the 10th record
    double linf_initial = 0.0;
    double linf_final = 0.0;
    double mass_drift = 0.0;      ///< max |mass - mass_0| over records
    std::vector<EnergyReport> reports;
};

/// sqrt(eps^-2 |phi|^2 + |psi|^2 + eps^-2 |theta|^2)
double weighted_norm(const FieldTriple& l2, double eps);

DecaySummary decay_study(const PhysicalParams& params, const Grid& grid,
                         const SolverConfig& config, const Amplitudes& amplitudes);

struct StabilityProbe {
    bool stable = true;
    double max_growth = 1.0;  ///< max over steps of the energy norm relative to the start
    double seconds_per_step = 0.0;
    std::string failure;
};

/// Energy norm sqrt(|phi|^2 + eps^2 |psi|^2 + |theta|^2 / (gamma - 1)).
double energy_norm(const PerturbationState& state, const PhysicalParams& params);

/// Seeded random state with homogeneous wall values for psi and theta.
PerturbationState random_state(const Grid& grid, double amplitude, std::uint64_t seed);

/// Runs `steps` steps of the given scheme from `initial`; unstable means the energy norm
/// grows beyond `growth_limit` times its start value, or a step fails.
StabilityProbe stability_probe(const PerturbationState& initial, const PhysicalParams& params,
                               const Grid& grid, Scheme scheme, double dt, int steps,
                               TendencyOptions options, double growth_limit = 10.0);

struct StiffnessOptions {
    int steps = 200;
    double growth_limit = 10.0;
    int bisections = 14;
    double imex_factor = 10.0;  ///< imex probe at dt = imex_factor * eps * dx2
    std::uint64_t seed = 20240611;
};

struct StiffnessRow {
    double eps = 0.0;
    double dt_star = 0.0;  ///< largest stable RK4 step found by bisection
    double imex_dt = 0.0;
    StabilityProbe imex;
};

struct StiffnessTable {
    std::vector<StiffnessRow> rows;
    SlopeFit exponent;  ///< dt_star ~ eps^exponent
};

/// Bisects the largest stable RK4 step on a linear run for each eps and probes imex_cnab at
/// imex_factor * eps * dx2 from the same data.
StiffnessTable stiffness_benchmark(const PhysicalParams& params_template, const Grid& grid,
                                   const std::vector<double>& eps_list,
                                   const StiffnessOptions& options = {});

void write_stiffness_csv(std::ostream& os, const StiffnessTable& table);

}  // namespace couette
