/// @file solver.hpp
/// @brief Right-hand side of the perturbation system and its time integrators.
///
/// The IMEX splitting puts the whole linearisation about the base flow (acoustic coupling,
/// diffusion, advection by the base shear, lift-up and the linear heating term) into a
/// Crank-Nicolson solve. Its coefficients depend on x2 only, so it decouples over x1 Fourier
/// modes. Everything at least quadratic in the perturbation goes into second-order
/// Adams-Bashforth.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "couette/baseflow.hpp"
#include "couette/grid.hpp"
#include "couette/params.hpp"
#include "couette/state.hpp"

namespace couette {

enum class Scheme { imex_cnab, explicit_rk4 };

struct TendencyOptions {
    bool dealias = true;
    /// Drop every term that is at least quadratic in the perturbation.
    bool linear = false;
};

struct SolverConfig {
    double dt = 2e-3;
    double t_end = 5.0;
    Scheme scheme = Scheme::imex_cnab;
    bool dealias_on = true;
    int diag_stride = 10;
    double cfl_acoustic = 0.5;  ///< c_a in dt <= c_a eps dx2
    double cfl_viscous = 0.2;   ///< c_v in dt <= c_v Re dx2^2
    bool linear = false;

    TendencyOptions tendency_options() const { return {dealias_on, linear}; }
    bool operator==(const SolverConfig&) const = default;
};

/// Throws Error on dt <= 0, t_end < 0, 0 < t_end < dt, diag_stride < 1, and for explicit_rk4
/// a CflError when dt violates either bound.
void validate(const SolverConfig& config, const PhysicalParams& params, const Grid& grid);

double acoustic_dt_bound(const PhysicalParams& params, const Grid& grid, double c_a = 0.5);
double viscous_dt_bound(const PhysicalParams& params, const Grid& grid, double c_v = 0.2);

/// Throws PositivityError naming the first node (i outer, j inner) where rho or T is not
/// positive.
void check_positivity(const PerturbationState& state, const BaseFlow& base);

/// Full right-hand side. Wall rows of dpsi/dtheta hold the discrete trace of the equations
/// (not zero), which is what the compatibility check inspects.
Tendency tendency(const PerturbationState& state, const BaseFlow& base,
                  const PhysicalParams& params, const Grid& grid, TendencyOptions options = {});

/// Tendency split as implicit (linearisation about the base flow) plus explicit remainder.
struct SplitTendency {
    Tendency implicit_part;
    Tendency explicit_part;
};
SplitTendency split_tendency(const PerturbationState& state, const BaseFlow& base,
                             const PhysicalParams& params, const Grid& grid,
                             TendencyOptions options = {});

/// Implicit operator applied in physical space.
Tendency implicit_operator(const PerturbationState& state, const BaseFlow& base,
                           const PhysicalParams& params, const Grid& grid);

namespace detail {
class ModeSolver;
}

/// Crank-Nicolson / Adams-Bashforth-2 integrator. Keeps the explicit history between calls;
/// the first step (and any step after reset() or a change of dt) uses an implicit-Euler /
/// explicit-Euler predictor.
class ImexIntegrator {
public:
    ImexIntegrator(const BaseFlow& base, const PhysicalParams& params, const Grid& grid,
                   TendencyOptions options = {});
    ~ImexIntegrator();
    ImexIntegrator(ImexIntegrator&&) noexcept;
    ImexIntegrator& operator=(ImexIntegrator&&) noexcept;

    PerturbationState step(const PerturbationState& state, double dt);
    void reset();
    bool has_history() const { return previous_explicit_.has_value(); }

    /// Solve (I - coeff L) x = rhs with Dirichlet psi/theta rows; exposed for testing.
    PerturbationState solve_implicit(const PerturbationState& rhs, double coeff);

private:
    const detail::ModeSolver& solver_for(double coeff);

    BaseFlow base_;
    PhysicalParams params_;
    Grid grid_;
    TendencyOptions options_;
    std::optional<Tendency> previous_explicit_;
    double previous_dt_ = 0.0;
    std::map<double, std::unique_ptr<detail::ModeSolver>> solvers_;
};

/// One IMEX step from a fresh integrator (bootstrap predictor).
PerturbationState step_imex(const PerturbationState& state, const BaseFlow& base,
                            const PhysicalParams& params, const Grid& grid, double dt,
                            TendencyOptions options = {});

/// Classical RK4 on the wall-masked tendency. With enforce_cfl the step is refused (CflError)
/// when dt exceeds either bound.
PerturbationState step_explicit_rk4(const PerturbationState& state, const BaseFlow& base,
                                    const PhysicalParams& params, const Grid& grid, double dt,
                                    TendencyOptions options = {}, bool enforce_cfl = true,
                                    double c_a = 0.5, double c_v = 0.2);

struct Amplitudes {
    double a_phi = 1.0;
    double a_psi = 1.0;
    double a_theta = 1.0;
    bool operator==(const Amplitudes&) const = default;
};

/// Mean-zero, divergence-free, wall-compatible initial perturbation scaled as
/// phi ~ eps^2, psi ~ eps, theta ~ eps^2.
PerturbationState make_initial_data(const PhysicalParams& params, const Grid& grid,
                                    const Amplitudes& amplitudes);

/// Receives the state and its tendency at every diagnostic record.
using DiagnosticSink =
    std::function<void(const PerturbationState& state, const Tendency& tendency, long step)>;

/// Number of uniform steps and their size: the smallest count whose step does not exceed
/// config.dt and lands exactly on t_end.
std::pair<long, double> step_plan(const SolverConfig& config);

/// Advance `initial` to config.t_end. The sink fires at step 0, every diag_stride steps and at
/// the final step. Failures are rethrown as RunAborted carrying the time and step index.
PerturbationState run(const SolverConfig& config, const PhysicalParams& params, const Grid& grid,
                      const PerturbationState& initial, const DiagnosticSink& sink);

}  // namespace couette
