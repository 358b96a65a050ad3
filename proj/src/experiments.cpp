#include "couette/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "couette/error.hpp"

namespace couette {

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw Error("log-log fit needs at least 2 points");
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw Error("log-log fit rejects non-positive data");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (!(sxx > 0.0)) throw Error("log-log fit needs at least two distinct x values");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (const auto& [x, y] : points)
        f.max_residual =
            std::max(f.max_residual, std::abs(std::log(y) - f.intercept - f.slope * std::log(x)));
    f.valid = true;
    return f;
}

// ---------------------------------------------------------------------------
// eps sweep

double SweepTable::max_residual() const {
    double m = 0.0;
    for (const SlopeFit* f : {&slope_rho, &slope_u, &slope_temp})
        if (f->valid) m = std::max(m, f->max_residual);
    return m;
}

bool SweepTable::same_results(const SweepTable& o) const {
    if (rows.size() != o.rows.size() || poisoned != o.poisoned || failure != o.failure)
        return false;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const SweepRow &a = rows[k], &b = o.rows[k];
        if (a.eps != b.eps || a.sup_gap_rho != b.sup_gap_rho || a.sup_gap_u != b.sup_gap_u ||
            a.sup_gap_temp != b.sup_gap_temp || !(a.sup_l2 == b.sup_l2) || a.ok != b.ok ||
            a.failure != b.failure)
            return false;
    }
    return slope_rho == o.slope_rho && slope_u == o.slope_u && slope_temp == o.slope_temp;
}

namespace {

SweepRow sweep_run(double eps, const PhysicalParams& tmpl, const Grid& grid,
                   const SolverConfig& config, const Amplitudes& amplitudes) {
    SweepRow row;
    row.eps = eps;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const PhysicalParams p = with_eps(tmpl, eps);
        const BaseFlow base = build_base_flow(p, grid);
        DiagnosticsRecorder rec(base, p, grid, config.tendency_options());
        run(config, p, grid, make_initial_data(p, grid, amplitudes), rec.sink());
        const EnergyReport& last = rec.reports().back();
        row.sup_gap_rho = last.sup_gap.phi;
        row.sup_gap_u = last.sup_gap.psi;
        row.sup_gap_temp = last.sup_gap.theta;
        for (const EnergyReport& r : rec.reports()) {
            row.sup_l2.phi = std::max(row.sup_l2.phi, r.l2.phi);
            row.sup_l2.psi = std::max(row.sup_l2.psi, r.l2.psi);
            row.sup_l2.theta = std::max(row.sup_l2.theta, r.l2.theta);
        }
    } catch (const std::exception& e) {
        row.ok = false;
        row.failure = e.what();
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

SlopeFit fit_column(const std::vector<SweepRow>& rows, double SweepRow::*column) {
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow& r : rows) {
        if (!(r.*column > 0.0)) return {};
        pts.emplace_back(r.eps, r.*column);
    }
    return fit_loglog_slope(pts);
}

}  // namespace

SweepTable epsilon_sweep(const std::vector<double>& eps_list, const PhysicalParams& tmpl,
                         const Grid& grid, const SolverConfig& config, const Amplitudes& amplitudes,
                         bool parallel) {
    if (tmpl.chi != 1.0) throw ParamError("chi", "eps sweep requires chi = 1 (equal wall temperatures)");
    if (eps_list.size() < 3) throw Error("eps sweep needs at least 3 eps values");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0 && eps_list[k] <= 0.5))
            throw Error("eps sweep values must lie in (0, 0.5]");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
            throw Error("eps sweep values must be strictly decreasing");
    }
    validate(config, with_eps(tmpl, eps_list.back()), grid);

    SweepTable table;
    if (parallel) {
        std::vector<std::future<SweepRow>> jobs;
        for (double eps : eps_list)
            jobs.push_back(std::async(std::launch::async, sweep_run, eps, std::cref(tmpl),
                                      std::cref(grid), std::cref(config), std::cref(amplitudes)));
        for (auto& j : jobs) table.rows.push_back(j.get());
    } else {
        for (double eps : eps_list) table.rows.push_back(sweep_run(eps, tmpl, grid, config, amplitudes));
    }

    for (const SweepRow& r : table.rows) {
        if (!r.ok) {
            table.poisoned = true;
            std::ostringstream os;
            os << "run at eps = " << r.eps << " failed: " << r.failure;
            table.failure = os.str();
            return table;
        }
    }
    table.slope_rho = fit_column(table.rows, &SweepRow::sup_gap_rho);
    table.slope_u = fit_column(table.rows, &SweepRow::sup_gap_u);
    table.slope_temp = fit_column(table.rows, &SweepRow::sup_gap_temp);
    return table;
}

namespace {
std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

void write_sweep_csv(std::ostream& os, const SweepTable& t) {
    os << "eps,sup_gap_rho,sup_gap_u,sup_gap_temp,runtime_s\n";
    for (const SweepRow& r : t.rows)
        os << g17(r.eps) << ',' << g17(r.sup_gap_rho) << ',' << g17(r.sup_gap_u) << ','
           << g17(r.sup_gap_temp) << ',' << g17(r.runtime_s) << '\n';
}

void write_sweep_summary(std::ostream& os, const SweepTable& t) {
    if (t.poisoned) {
        os << "poisoned: " << t.failure << '\n';
        return;
    }
    auto s = [](const SlopeFit& f) { return f.valid ? g17(f.slope) : std::string("nan"); };
    auto r = [](const SlopeFit& f) { return f.valid ? g17(f.max_residual) : std::string("nan"); };
    os << "slope_rho=" << s(t.slope_rho) << " slope_u=" << s(t.slope_u)
       << " slope_temp=" << s(t.slope_temp) << " residual_rho=" << r(t.slope_rho)
       << " residual_u=" << r(t.slope_u) << " residual_temp=" << r(t.slope_temp) << '\n';
}

// ---------------------------------------------------------------------------
// Decay study

double weighted_norm(const FieldTriple& l2, double eps) {
    const double ie = 1.0 / eps;
    return std::sqrt(ie * ie * l2.phi * l2.phi + l2.psi * l2.psi + ie * ie * l2.theta * l2.theta);
}

DecaySummary decay_study(const PhysicalParams& params, const Grid& grid,
                         const SolverConfig& config, const Amplitudes& amplitudes) {
    const BaseFlow base = build_base_flow(params, grid);
    DiagnosticsRecorder rec(base, params, grid, config.tendency_options());
    run(config, params, grid, make_initial_data(params, grid, amplitudes), rec.sink());

    DecaySummary d;
    d.reports = rec.reports();
    const EnergyReport& first = d.reports.front();
    const EnergyReport& last = d.reports.back();
    d.initial_norm = weighted_norm(first.l2, params.eps);
    d.final_norm = weighted_norm(last.l2, params.eps);
    d.ratio = d.initial_norm > 0.0 ? d.final_norm / d.initial_norm : 0.0;
    for (const EnergyReport& r : d.reports) {
        if (weighted_norm(r.l2, params.eps) <= 0.1 * d.initial_norm) {
            d.time_to_10pct = r.time;
            break;
        }
    }
    d.monotonicity = entropy_monotonicity(d.reports, 10);
    d.linf_initial = std::max({first.linf.phi, first.linf.psi, first.linf.theta});
    d.linf_final = std::max({last.linf.phi, last.linf.psi, last.linf.theta});
    for (const EnergyReport& r : d.reports)
        d.mass_drift = std::max(d.mass_drift, std::abs(r.mass - first.mass));
    return d;
}

// ---------------------------------------------------------------------------
// Stiffness benchmark

double energy_norm(const PerturbationState& s, const PhysicalParams& p) {
    const double phi = l2_norm(s.phi), psi1 = l2_norm(s.psi1), psi2 = l2_norm(s.psi2),
                 theta = l2_norm(s.theta);
    return std::sqrt(phi * phi + p.eps * p.eps * (psi1 * psi1 + psi2 * psi2) +
                     theta * theta / (p.gamma - 1.0));
}

PerturbationState random_state(const Grid& grid, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PerturbationState s = PerturbationState::zero(grid);
    for (ScalarField* f : {&s.phi, &s.psi1, &s.psi2, &s.theta})
        for (Eigen::Index n = 0; n < f->values().size(); ++n)
            f->values().data()[n] = amplitude * u(rng);
    s.psi1.set_walls_zero();
    s.psi2.set_walls_zero();
    s.theta.set_walls_zero();
    return s;
}

StabilityProbe stability_probe(const PerturbationState& initial, const PhysicalParams& params,
                               const Grid& grid, Scheme scheme, double dt, int steps,
                               TendencyOptions options, double growth_limit) {
    StabilityProbe probe;
    const BaseFlow base = build_base_flow(params, grid);
    const double e0 = energy_norm(initial, params);
    PerturbationState s = initial;
    ImexIntegrator imex(base, params, grid, options);
    const auto t0 = std::chrono::steady_clock::now();
    int done = 0;
    try {
        for (; done < steps; ++done) {
            s = scheme == Scheme::imex_cnab
                    ? imex.step(s, dt)
                    : step_explicit_rk4(s, base, params, grid, dt, options, false);
            const double g = e0 > 0.0 ? energy_norm(s, params) / e0 : 0.0;
            if (!std::isfinite(g)) {
                probe.max_growth = std::numeric_limits<double>::infinity();
                probe.stable = false;
                ++done;
                break;
            }
            probe.max_growth = std::max(probe.max_growth, g);
            if (g > growth_limit) {
                probe.stable = false;
                ++done;
                break;
            }
        }
    } catch (const Error& e) {
        probe.stable = false;
        probe.failure = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    probe.seconds_per_step = done > 0 ? secs / done : 0.0;
    return probe;
}

StiffnessTable stiffness_benchmark(const PhysicalParams& tmpl, const Grid& grid,
                                   const std::vector<double>& eps_list,
                                   const StiffnessOptions& opt) {
    if (eps_list.size() < 3) throw Error("stiffness benchmark needs at least 3 eps values");
    const TendencyOptions linear{true, true};
    const PerturbationState data = random_state(grid, 1e-3, opt.seed);

    StiffnessTable table;
    std::vector<std::pair<double, double>> pts;
    for (double eps : eps_list) {
        const PhysicalParams p = with_eps(tmpl, eps);
        auto stable = [&](double dt) {
            return stability_probe(data, p, grid, Scheme::explicit_rk4, dt, opt.steps, linear,
                                   opt.growth_limit)
                .stable;
        };
        // Bracket from the acoustic estimate, then bisect in log space.
        double lo = acoustic_dt_bound(p, grid, 0.5), hi = lo;
        if (stable(lo)) {
            do { lo = hi; hi *= 2.0; } while (stable(hi));
        } else {
            do { hi = lo; lo *= 0.5; } while (!stable(lo));
        }
        for (int k = 0; k < opt.bisections; ++k) {
            const double mid = std::sqrt(lo * hi);
            (stable(mid) ? lo : hi) = mid;
        }
        StiffnessRow row;
        row.eps = eps;
        row.dt_star = lo;
        row.imex_dt = opt.imex_factor * eps * grid.dx2;
        row.imex = stability_probe(data, p, grid, Scheme::imex_cnab, row.imex_dt, opt.steps, linear,
                                   opt.growth_limit);
        table.rows.push_back(row);
        pts.emplace_back(eps, row.dt_star);
    }
    table.exponent = fit_loglog_slope(pts);
    return table;
}

void write_stiffness_csv(std::ostream& os, const StiffnessTable& t) {
    os << "eps,dt_star,imex_dt,imex_stable,imex_max_growth,imex_seconds_per_step\n";
    for (const StiffnessRow& r : t.rows)
        os << g17(r.eps) << ',' << g17(r.dt_star) << ',' << g17(r.imex_dt) << ','
           << (r.imex.stable ? 1 : 0) << ',' << g17(r.imex.max_growth) << ','
           << g17(r.imex.seconds_per_step) << '\n';
}

}  // namespace couette
