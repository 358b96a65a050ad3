#include "couette/solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "couette/error.hpp"
#include "fft.hpp"
#include "mode_solver.hpp"

namespace couette {

namespace {

ScalarField profile(const Grid& g, const Eigen::ArrayXd& p) { return ScalarField::from_profile(g, p); }

ScalarField reciprocal(const ScalarField& f) { return ScalarField(f.grid(), f.values().inverse()); }

Tendency difference(const Tendency& a, const Tendency& b) {
    return {a.dphi - b.dphi, a.dpsi1 - b.dpsi1, a.dpsi2 - b.dpsi2, a.dtheta - b.dtheta};
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

double acoustic_dt_bound(const PhysicalParams& params, const Grid& grid, double c_a) {
    return c_a * params.eps * grid.dx2;
}

double viscous_dt_bound(const PhysicalParams& params, const Grid& grid, double c_v) {
    return c_v * params.reynolds * grid.dx2 * grid.dx2;
}

void validate(const SolverConfig& c, const PhysicalParams& params, const Grid& grid) {
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw Error("solver.dt must be positive");
    if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw Error("solver.t_end must be >= 0");
    if (c.t_end > 0.0 && c.t_end < c.dt) throw Error("solver.t_end must be 0 or >= solver.dt");
    if (c.diag_stride < 1) throw Error("solver.diag_stride must be >= 1");
    if (!(c.cfl_acoustic > 0.0) || !(c.cfl_viscous > 0.0))
        throw Error("CFL constants must be positive");
    if (c.scheme == Scheme::explicit_rk4) {
        const double a = acoustic_dt_bound(params, grid, c.cfl_acoustic);
        const double v = viscous_dt_bound(params, grid, c.cfl_viscous);
        if (c.dt > a || c.dt > v) {
            std::ostringstream os;
            os.precision(6);
            os << "explicit_rk4 refuses dt = " << c.dt << ": acoustic bound " << a
               << ", viscous bound " << v;
            throw CflError(os.str(), a, v);
        }
    }
}

std::pair<long, double> step_plan(const SolverConfig& c) {
    if (c.t_end <= 0.0) return {0, c.dt};
    const long n = static_cast<long>(std::ceil(c.t_end / c.dt - 1e-9));
    return {n, c.t_end / static_cast<double>(n)};
}

// ---------------------------------------------------------------------------
// Right-hand side

void check_positivity(const PerturbationState& s, const BaseFlow& base) {
    const Grid& g = s.grid();
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j <= g.n2; ++j) {
            const double rho = base.rho_t(j) + s.phi(i, j);
            const double temp = base.temp_t(j) + s.theta(i, j);
            if (!(rho > 0.0) || !(temp > 0.0)) {
                std::ostringstream os;
                os << "positivity violated at node (i=" << i << ", j=" << j << "): rho = " << rho
                   << ", T = " << temp;
                throw PositivityError(os.str(), i, j);
            }
        }
    }
}

Tendency implicit_operator(const PerturbationState& s, const BaseFlow& base,
                           const PhysicalParams& p, const Grid& g) {
    const ScalarField rho_t = profile(g, base.rho_t);
    const ScalarField temp_t = profile(g, base.temp_t);
    const ScalarField u1_t = profile(g, base.u1_t);
    const Eigen::ArrayXd inv_rho = base.rho_t.inverse();
    const double inv_eps2 = 1.0 / (p.eps * p.eps);
    const double mu = p.mu, mu_l = p.mu + p.mu_prime;

    Tendency out;
    out.dphi = -1.0 * (ddx1(rho_t * s.psi1 + u1_t * s.phi) + ddx2_flux(rho_t * s.psi2));

    const ScalarField q = temp_t * s.phi + rho_t * s.theta;
    const ScalarField d1psi1 = ddx1(s.psi1);
    const ScalarField d2psi2 = ddx2(s.psi2);
    const ScalarField d1psi2 = ddx1(s.psi2);
    const ScalarField div = d1psi1 + d2psi2;

    ScalarField m1 = -inv_eps2 * ddx1(q) + mu * (ddx1(d1psi1) + d2x2(s.psi1)) +
                     mu_l * (ddx1(d1psi1) + ddx1(d2psi2));
    ScalarField m2 = -inv_eps2 * ddx2(q) + mu * (ddx1(d1psi2) + d2x2(s.psi2)) +
                     mu_l * (ddx2(d1psi1) + d2x2(s.psi2));
    ScalarField e = -1.0 * div + p.kappa * (ddx1(ddx1(s.theta)) + d2x2(s.theta)) +
                    (p.eps * p.eps * 2.0 * mu) * (ddx2(s.psi1) + d1psi2);

    out.dpsi1 = scale_by_profile(m1, inv_rho) - u1_t * d1psi1 -
                scale_by_profile(s.psi2, base.du1_t);
    out.dpsi2 = scale_by_profile(m2, inv_rho) - u1_t * d1psi2;
    out.dtheta = (p.gamma - 1.0) * scale_by_profile(e, inv_rho) - u1_t * ddx1(s.theta) -
                 scale_by_profile(s.psi2, base.dtemp_t);
    return out;
}

namespace {

/// Full right-hand side before dealiasing.
Tendency raw_tendency(const PerturbationState& s, const BaseFlow& base, const PhysicalParams& p,
                      const Grid& g, bool linear) {
    const double nl = linear ? 0.0 : 1.0;
    const ScalarField rho_t = profile(g, base.rho_t);
    const ScalarField temp_t = profile(g, base.temp_t);
    const ScalarField u1_t = profile(g, base.u1_t);
    const double inv_eps2 = 1.0 / (p.eps * p.eps);
    const double mu = p.mu, mu_l = p.mu + p.mu_prime;

    const ScalarField inv_rho =
        linear ? profile(g, base.rho_t.inverse()) : reciprocal(rho_t + s.phi);

    Tendency out;

    // Continuity in flux form: -div(rho u - rho_t u_t), with u_t = (x2, 0).
    const ScalarField flux1 = rho_t * s.psi1 + s.phi * u1_t + nl * (s.phi * s.psi1);
    const ScalarField flux2 = rho_t * s.psi2 + nl * (s.phi * s.psi2);
    out.dphi = -1.0 * (ddx1(flux1) + ddx2_flux(flux2));

    // Advecting velocity u = u_t + psi (only u_t in the linear model).
    const ScalarField a1 = u1_t + nl * s.psi1;
    const ScalarField a2 = nl * s.psi2;

    const ScalarField d1psi1 = ddx1(s.psi1), d2psi1 = ddx2(s.psi1);
    const ScalarField d1psi2 = ddx1(s.psi2), d2psi2 = ddx2(s.psi2);
    const ScalarField d1theta = ddx1(s.theta), d2theta = ddx2(s.theta);
    const ScalarField div = d1psi1 + d2psi2;

    // Pressure perturbation rho T - 1 = temp_t phi + rho_t theta + phi theta.
    const ScalarField pp = temp_t * s.phi + rho_t * s.theta + nl * (s.phi * s.theta);

    const ScalarField visc1 = mu * (ddx1(d1psi1) + d2x2(s.psi1)) +
                              mu_l * (ddx1(d1psi1) + ddx1(d2psi2));
    const ScalarField visc2 = mu * (ddx1(d1psi2) + d2x2(s.psi2)) +
                              mu_l * (ddx2(d1psi1) + d2x2(s.psi2));

    out.dpsi1 = -1.0 * (a1 * d1psi1 + a2 * d2psi1) - s.psi2 +
                inv_rho * (-inv_eps2 * ddx1(pp) + visc1);
    out.dpsi2 = -1.0 * (a1 * d1psi2 + a2 * d2psi2) + inv_rho * (-inv_eps2 * ddx2(pp) + visc2);

    // Viscous heating eps^2 (2 mu D(psi):D(psi) + 4 mu D(u_t):D(psi) + mu' (div psi)^2),
    // with 4 mu D(u_t):D(psi) = 2 mu (d2 psi1 + d1 psi2).
    const ScalarField shear = d2psi1 + d1psi2;
    const ScalarField heating =
        2.0 * mu * shear +
        nl * (2.0 * mu * (d1psi1 * d1psi1 + d2psi2 * d2psi2 + 0.5 * (shear * shear)) +
              p.mu_prime * (div * div));
    const ScalarField pressure_work = div + nl * (pp * div);
    const ScalarField temp_grad = profile(g, base.dtemp_t);
    const ScalarField energy = -1.0 * pressure_work +
                               p.kappa * (ddx1(d1theta) + d2x2(s.theta)) +
                               (p.eps * p.eps) * heating;
    out.dtheta = -1.0 * (a1 * d1theta + a2 * d2theta) - s.psi2 * temp_grad +
                 (p.gamma - 1.0) * (inv_rho * energy);
    return out;
}

}  // namespace

SplitTendency split_tendency(const PerturbationState& s, const BaseFlow& base,
                             const PhysicalParams& p, const Grid& g, TendencyOptions options) {
    if (!options.linear) check_positivity(s, base);
    SplitTendency out;
    out.implicit_part = implicit_operator(s, base, p, g);
    Tendency full = raw_tendency(s, base, p, g, options.linear);
    out.explicit_part = difference(full, out.implicit_part);
    if (options.dealias) {
        Tendency& e = out.explicit_part;
        e.dphi = dealias(e.dphi);
        e.dpsi1 = dealias(e.dpsi1);
        e.dpsi2 = dealias(e.dpsi2);
        e.dtheta = dealias(e.dtheta);
    }
    return out;
}

Tendency tendency(const PerturbationState& s, const BaseFlow& base, const PhysicalParams& p,
                  const Grid& g, TendencyOptions options) {
    SplitTendency split = split_tendency(s, base, p, g, options);
    split.implicit_part += split.explicit_part;
    return std::move(split.implicit_part);
}

// ---------------------------------------------------------------------------
// IMEX integrator

ImexIntegrator::ImexIntegrator(const BaseFlow& base, const PhysicalParams& params,
                               const Grid& grid, TendencyOptions options)
    : base_(base), params_(params), grid_(grid), options_(options) {}

ImexIntegrator::~ImexIntegrator() = default;
ImexIntegrator::ImexIntegrator(ImexIntegrator&&) noexcept = default;
ImexIntegrator& ImexIntegrator::operator=(ImexIntegrator&&) noexcept = default;

void ImexIntegrator::reset() {
    previous_explicit_.reset();
    previous_dt_ = 0.0;
}

const detail::ModeSolver& ImexIntegrator::solver_for(double coeff) {
    auto it = solvers_.find(coeff);
    if (it == solvers_.end())
        it = solvers_.emplace(coeff, std::make_unique<detail::ModeSolver>(base_, params_, grid_,
                                                                           coeff))
                 .first;
    return *it->second;
}

PerturbationState ImexIntegrator::solve_implicit(const PerturbationState& rhs, double coeff) {
    const detail::ModeSolver& solver = solver_for(coeff);
    PerturbationState r = rhs;
    r.psi1.set_walls_zero();
    r.psi2.set_walls_zero();
    r.theta.set_walls_zero();

    detail::Spectrum phi, psi1, psi2, theta;
    detail::forward_x1(r.phi.values(), phi);
    detail::forward_x1(r.psi1.values(), psi1);
    detail::forward_x1(r.psi2.values(), psi2);
    detail::forward_x1(r.theta.values(), theta);
    solver.solve(phi, psi1, psi2, theta);
    detail::inverse_x1(phi, r.phi.values(), grid_.n1);
    detail::inverse_x1(psi1, r.psi1.values(), grid_.n1);
    detail::inverse_x1(psi2, r.psi2.values(), grid_.n1);
    detail::inverse_x1(theta, r.theta.values(), grid_.n1);
    // The Dirichlet rows hold exactly zero in every mode; the inverse transform of zero is
    // zero, but set them explicitly so the invariant does not hinge on FFT round-off.
    r.psi1.set_walls_zero();
    r.psi2.set_walls_zero();
    r.theta.set_walls_zero();
    return r;
}

PerturbationState ImexIntegrator::step(const PerturbationState& state, double dt) {
    if (!(dt > 0.0)) throw Error("IMEX step needs dt > 0");
    if (previous_explicit_ && dt != previous_dt_) reset();

    SplitTendency split = split_tendency(state, base_, params_, grid_, options_);
    PerturbationState next;
    if (!previous_explicit_) {
        // (I - dt L) u1 = u0 + dt N0
        PerturbationState rhs = axpy(state, dt, split.explicit_part);
        next = solve_implicit(rhs, dt);
    } else {
        // (I - dt/2 L) u^{n+1} = u^n + dt/2 L u^n + dt (3/2 N^n - 1/2 N^{n-1})
        PerturbationState rhs = axpy(state, 0.5 * dt, split.implicit_part);
        rhs = axpy(rhs, 1.5 * dt, split.explicit_part);
        rhs = axpy(rhs, -0.5 * dt, *previous_explicit_);
        next = solve_implicit(rhs, 0.5 * dt);
    }
    previous_explicit_ = std::move(split.explicit_part);
    previous_dt_ = dt;
    next.time = state.time + dt;
    if (!next.all_finite()) throw SolveError("non-finite values after IMEX step");
    if (!options_.linear) check_positivity(next, base_);
    return next;
}

PerturbationState step_imex(const PerturbationState& state, const BaseFlow& base,
                            const PhysicalParams& params, const Grid& grid, double dt,
                            TendencyOptions options) {
    ImexIntegrator integrator(base, params, grid, options);
    return integrator.step(state, dt);
}

// ---------------------------------------------------------------------------
// Explicit reference integrator

PerturbationState step_explicit_rk4(const PerturbationState& s, const BaseFlow& base,
                                    const PhysicalParams& p, const Grid& g, double dt,
                                    TendencyOptions options, bool enforce_cfl, double c_a,
                                    double c_v) {
    if (enforce_cfl) {
        SolverConfig c;
        c.dt = dt;
        c.t_end = dt;
        c.scheme = Scheme::explicit_rk4;
        c.cfl_acoustic = c_a;
        c.cfl_viscous = c_v;
        validate(c, p, g);
    }
    auto rhs = [&](const PerturbationState& u) {
        Tendency k = tendency(u, base, p, g, options);
        k.mask_walls();
        return k;
    };
    const Tendency k1 = rhs(s);
    const Tendency k2 = rhs(axpy(s, 0.5 * dt, k1));
    const Tendency k3 = rhs(axpy(s, 0.5 * dt, k2));
    const Tendency k4 = rhs(axpy(s, dt, k3));
    PerturbationState next = axpy(s, dt / 6.0, k1);
    next = axpy(next, dt / 3.0, k2);
    next = axpy(next, dt / 3.0, k3);
    next = axpy(next, dt / 6.0, k4);
    next.time = s.time + dt;
    if (!next.all_finite()) throw SolveError("non-finite values after RK4 step");
    if (!options.linear) check_positivity(next, base);
    return next;
}

// ---------------------------------------------------------------------------
// Initial data

PerturbationState make_initial_data(const PhysicalParams& params, const Grid& grid,
                                    const Amplitudes& a) {
    using std::cos, std::sin;
    constexpr double pi = std::numbers::pi;
    const double eps = params.eps;
    const double eps2 = eps * eps;

    PerturbationState s = PerturbationState::zero(grid);
    for (int i = 0; i < grid.n1; ++i) {
        const double x1 = grid.x1(i);
        for (int j = 0; j <= grid.n2; ++j) {
            const double x2 = grid.x2(j);
            const double sn = sin(pi * x2), cs = cos(pi * x2);
            const double sn2 = sn * sn, sn3 = sn2 * sn, sn4 = sn2 * sn2;
            s.phi(i, j) = eps2 * a.a_phi * cos(x1) * sn2;
            // Stream function sin(x1) sin^4(pi x2); psi = eps a_psi (-d2, d1) of it.
            s.psi1(i, j) = -eps * a.a_psi * sin(x1) * 4.0 * pi * sn3 * cs;
            s.psi2(i, j) = eps * a.a_psi * cos(x1) * sn4;
            s.theta(i, j) = eps2 * a.a_theta * sin(x1) * sn4;
        }
    }
    s.psi1.set_walls_zero();
    s.psi2.set_walls_zero();
    s.theta.set_walls_zero();
    return s;
}

// ---------------------------------------------------------------------------
// Run loop

PerturbationState run(const SolverConfig& config, const PhysicalParams& params, const Grid& grid,
                      const PerturbationState& initial, const DiagnosticSink& sink) {
    validate(config, params, grid);
    if (!(initial.grid() == grid)) throw GridError("initial state grid does not match run grid");
    const BaseFlow base = build_base_flow(params, grid);
    const TendencyOptions options = config.tendency_options();
    const auto [steps, dt] = step_plan(config);

    auto emit = [&](const PerturbationState& s, long step) {
        if (!sink) return;
        sink(s, tendency(s, base, params, grid, options), step);
    };

    PerturbationState state = initial;
    ImexIntegrator imex(base, params, grid, options);
    long step = 0;
    try {
        emit(state, 0);
        for (step = 1; step <= steps; ++step) {
            if (config.scheme == Scheme::imex_cnab) {
                state = imex.step(state, dt);
            } else {
                state = step_explicit_rk4(state, base, params, grid, dt, options, true,
                                          config.cfl_acoustic, config.cfl_viscous);
            }
            if (step % config.diag_stride == 0 || step == steps) emit(state, step);
        }
    } catch (const RunAborted&) {
        throw;
    } catch (const Error& e) {
        std::ostringstream os;
        os << "run aborted at step " << step << " (t = " << state.time << "): " << e.what();
        throw RunAborted(os.str(), state.time, step);
    }
    return state;
}

}  // namespace couette
