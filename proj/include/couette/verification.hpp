/// @file verification.hpp
/// @brief Numerical self-checks shared by the `check` subcommand and the test suites.
#pragma once

#include <string>
#include <vector>

#include "couette/baseflow.hpp"
#include "couette/solver.hpp"

namespace couette {

/// Max error of ddx2 on sin(pi x2) at n2 and 2 n2; returns err(n2) / err(2 n2).
double ddx2_error_ratio(int n2, int n1 = 8);

/// Max error of ddx1 over every resolved mode sin(k x1), cos(k x1), 1 <= k < n1/2.
double ddx1_resolved_error(int n1, int n2 = 8);

/// |integrate(f d2 g) + integrate(g d2 f) - boundary term| for smooth non-periodic f, g.
double ibp_defect(int n2, int n1 = 8);

/// Observed order log2(defect(n2) / defect(2 n2)).
double ibp_order(int n2);

/// Relative entropy over its quadratic form Q for a state whose fields have sup-size
/// `amplitude`; `shape` 0 uses the smooth initial-data profiles, others a seeded random
/// field.
double entropy_ratio(const PhysicalParams& params, const Grid& grid, double amplitude, int shape = 0);

/// Max |wall row| / max |interior row| of the psi and theta tendencies of the initial data.
double compatibility_ratio(const PhysicalParams& params, const Grid& grid,
                           const Amplitudes& amplitudes = {});

/// Differences between one fresh imex step and one rk4 step for dt, dt/2, ...
/// (`levels` values), in the max norm over all fields.
std::vector<double> cross_integrator_differences(const PerturbationState& state,
                                                 const BaseFlow& base, const PhysicalParams& params,
                                                 const Grid& grid, double dt, int levels = 4);

/// Observed orders between successive entries of a halving sequence.
std::vector<double> observed_orders(const std::vector<double>& errors);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

}  // namespace couette
