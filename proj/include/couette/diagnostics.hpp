/// @file diagnostics.hpp
/// @brief Norms, relative entropy, the accumulated energy functionals and the limit gaps.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "couette/baseflow.hpp"
#include "couette/solver.hpp"

namespace couette {

/// One value per field; psi combines both components.
struct FieldTriple {
    double phi = 0.0;
    double psi = 0.0;
    double theta = 0.0;
    bool operator==(const FieldTriple&) const = default;
};

struct EnergyReport {
    double time = 0.0;
    long step = 0;
    FieldTriple l2, h1, h2, h3, linf;
    double entropy = 0.0;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
    /// The two density addends of the A2 time integral, eps^-4 |phi|_H1^2 and eps^-2 |phi_t|^2.
    double a2_phi_h1 = 0.0;
    double a2_phi_t = 0.0;
    double n_func = 0.0;
    double mass = 0.0;
    /// (|rho - 1|, |u - u_t|, |T - 1|) in L2.
    FieldTriple limit_gap;
    /// Running sup of the gaps over records.
    FieldTriple sup_gap;
    /// Running sup of eps^-1|phi| + |psi| + eps^-1|theta| and of its gradient analogue.
    double sup_weighted_l2 = 0.0;
    double sup_weighted_h1 = 0.0;
    /// Time integral of eps^2 |psi|_H1^2 + |theta|_H1^2 (entropy dissipation proxy).
    double dissipation = 0.0;
    bool operator==(const EnergyReport&) const = default;
};

/// eps^-2 A0 + A1 + A2 + eps^2 A3 + eps^2 A4 + eps^4 A5.
double n_functional(const EnergyReport& r, double eps);

/// f(z) = z - ln(1 + z), accurate for small |z|. Requires z > -1.
double entropy_kernel(double z);

/// Integral of eta = eps^2 rho |psi|^2 / (2 T_t) + rho/(gamma-1) f(theta/T_t) + rho f(-phi/rho).
/// Throws PositivityError naming the offending term.
double relative_entropy(const PerturbationState& state, const BaseFlow& base,
                        const PhysicalParams& params, const Grid& grid);

/// 1/2 |phi|^2 + 1/2 eps^2 |psi|^2 + |theta|^2 / (2 (gamma-1)).
double quadratic_entropy(const PerturbationState& state, const PhysicalParams& params);

/// Running state of the sup/integral parts of A0..A5.
class EnergyAccumulator {
public:
    explicit EnergyAccumulator(TendencyOptions options = {}) : options_(options) {}

    const TendencyOptions& options() const { return options_; }
    long records() const { return records_; }

private:
    friend EnergyReport report(const PerturbationState&, const Tendency&, const BaseFlow&,
                               const PhysicalParams&, const Grid&, EnergyAccumulator&, long);

    static constexpr int kSup = 6;
    static constexpr int kInt = 9;
    TendencyOptions options_;
    long records_ = 0;
    double last_time_ = 0.0;
    double sup_[kSup] = {};
    double integral_[kInt] = {};
    double last_integrand_[kInt] = {};
    FieldTriple sup_gap_;
    double sup_weighted_l2_ = 0.0;
    double sup_weighted_h1_ = 0.0;
};

/// Full report at one record; updates the accumulator. `tendency` must belong to `state`;
/// its wall rows are masked before use. Second time derivatives come from a central
/// directional difference of the tendency along itself.
EnergyReport report(const PerturbationState& state, const Tendency& tendency,
                    const BaseFlow& base, const PhysicalParams& params, const Grid& grid,
                    EnergyAccumulator& accumulator, long step = 0);

struct UniformBoundThresholds {
    double c_l2 = 10.0;  ///< bound on sup(eps^-1|phi| + |psi| + eps^-1|theta|) / eps
    double c_h1 = 10.0;  ///< bound on sup(eps^-1|phi|_1 + |psi|_1 + eps^-1|theta|_1)
};

struct UniformBoundCheck {
    bool pass = true;
    double measured_l2 = 0.0;
    double measured_h1 = 0.0;
    std::string detail;
};

UniformBoundCheck check_uniform_bounds(const EnergyReport& report, const PhysicalParams& params,
                                       const UniformBoundThresholds& thresholds = {});

/// Fraction of consecutive entropy records (after the first `skip`) that do not increase by
/// more than `tolerance` relative to the previous value. 1 when there is nothing to compare.
double entropy_monotonicity(const std::vector<EnergyReport>& reports, std::size_t skip = 10,
                            double tolerance = 0.0);

/// Largest c for which entropy_k + c * dissipation_k is non-increasing up to a relative
/// tolerance. Returns a negative value when no positive constant works.
double best_dissipation_constant(const std::vector<EnergyReport>& reports,
                                 double tolerance = 0.02);

/// CSV time series, one row per record, full round-trip precision.
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const EnergyReport& r);
std::string csv_header();

/// Diagnostic sink that keeps every report and optionally streams CSV rows.
class DiagnosticsRecorder {
public:
    DiagnosticsRecorder(const BaseFlow& base, const PhysicalParams& params, const Grid& grid,
                        TendencyOptions options = {}, std::ostream* csv = nullptr);

    void operator()(const PerturbationState& state, const Tendency& tendency, long step);
    DiagnosticSink sink();

    const std::vector<EnergyReport>& reports() const { return reports_; }

private:
    BaseFlow base_;
    PhysicalParams params_;
    Grid grid_;
    EnergyAccumulator accumulator_;
    std::ostream* csv_;
    std::vector<EnergyReport> reports_;
};

/// Recompute the reports of a trajectory from saved states (e.g. checkpoints).
std::vector<EnergyReport> replay(const std::vector<PerturbationState>& states,
                                 const std::vector<long>& steps, const BaseFlow& base,
                                 const PhysicalParams& params, const Grid& grid,
                                 TendencyOptions options = {});

}  // namespace couette
