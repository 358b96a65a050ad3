#include "couette/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "couette/checkpoint.hpp"
#include "couette/diagnostics.hpp"
#include "couette/error.hpp"
#include "couette/experiments.hpp"

namespace couette {

namespace {

std::string fmt(double x, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

CheckResult make_check(std::string name, bool pass, std::string detail) {
    return {std::move(name), pass, std::move(detail)};
}

ParsedConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw ConfigError("", 0, "cannot read config file " + path);
        std::ostringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }
    return parse_config(text, overrides);
}

std::filesystem::path prepare_output(const RunConfig& c, const ParsedConfig& parsed) {
    std::filesystem::path dir(c.output_dir);
    std::filesystem::create_directories(dir);
    std::ofstream log(dir / "run.log");
    for (const auto& line : parsed.log) log << line << '\n';
    return dir;
}

int cmd_run(const ParsedConfig& parsed, std::ostream& out, std::ostream& err) {
    const RunConfig& c = parsed.config;
    for (const auto& line : parsed.log) out << "# " << line << '\n';
    const auto dir = prepare_output(c, parsed);
    const PhysicalParams p = c.params();
    const Grid g = c.grid();
    const BaseFlow base = build_base_flow(p, g);

    std::ofstream csv(dir / "diagnostics.csv");
    DiagnosticsRecorder rec(base, p, g, c.solver.tendency_options(), &csv);
    PerturbationState final_state;
    try {
        final_state = run(c.solver, p, g, make_initial_data(p, g, c.initial), rec.sink());
    } catch (const RunAborted& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    write_checkpoint(final_state, (dir / "final.clmc").string());

    const auto& reps = rec.reports();
    const EnergyReport &first = reps.front(), &last = reps.back();
    const double w0 = weighted_norm(first.l2, p.eps), w1 = weighted_norm(last.l2, p.eps);
    const UniformBoundCheck ub = check_uniform_bounds(last, p);
    out << "records          " << reps.size() << '\n'
        << "time             " << fmt(last.time) << '\n'
        << "weighted norm    " << fmt(w0) << " -> " << fmt(w1)
        << " (ratio " << fmt(w0 > 0 ? w1 / w0 : 0.0) << ")\n"
        << "entropy          " << fmt(first.entropy) << " -> " << fmt(last.entropy) << '\n'
        << "mass drift       " << fmt(std::abs(last.mass - first.mass)) << '\n'
        << "N(t)             " << fmt(last.n_func) << '\n'
        << "bound constants  " << fmt(ub.measured_l2) << ", " << fmt(ub.measured_h1) << '\n'
        << "output           " << (dir / "diagnostics.csv").string() << '\n';
    return 0;
}

int cmd_sweep(const ParsedConfig& parsed, std::ostream& out, std::ostream& err) {
    const RunConfig& c = parsed.config;
    for (const auto& line : parsed.log) out << "# " << line << '\n';
    const auto dir = prepare_output(c, parsed);
    const PhysicalParams p = c.params();
    const Grid g = c.grid();

    if (c.experiment == ExperimentKind::stiffness) {
        const StiffnessTable t = stiffness_benchmark(p, g, c.stiffness_eps_list);
        std::ofstream csv(dir / "stiffness.csv");
        write_stiffness_csv(csv, t);
        write_stiffness_csv(out, t);
        out << "exponent " << fmt(t.exponent.slope) << " (max residual "
            << fmt(t.exponent.max_residual) << ")\n";
        return 0;
    }
    const SweepTable t = epsilon_sweep(c.eps_list, p, g, c.solver, c.initial, c.parallel);
    std::ofstream csv(dir / "sweep.csv");
    write_sweep_csv(csv, t);
    std::ofstream summary(dir / "sweep_summary.txt");
    write_sweep_summary(summary, t);
    write_sweep_csv(out, t);
    write_sweep_summary(out, t);
    if (t.poisoned) {
        err << "error: " << t.failure << '\n';
        return 1;
    }
    return 0;
}

int cmd_baseflow(const ParsedConfig& parsed, std::ostream& out) {
    const RunConfig& c = parsed.config;
    const Grid g = c.grid();
    const BaseFlow b = build_base_flow(c.params(), g);
    out << "x2,rho_t,u1_t,temp_t,dtemp_t\n";
    for (int j = 0; j <= g.n2; ++j)
        out << fmt(g.x2(j), "%.17g") << ',' << fmt(b.rho_t(j), "%.17g") << ','
            << fmt(b.u1_t(j), "%.17g") << ',' << fmt(b.temp_t(j), "%.17g") << ','
            << fmt(b.dtemp_t(j), "%.17g") << '\n';
    return 0;
}

int cmd_check(const ParsedConfig& parsed, std::ostream& out) {
    bool ok = true;
    for (const CheckResult& r : run_checks(parsed.config)) {
        out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

std::vector<CheckResult> run_checks(const RunConfig& c) {
    std::vector<CheckResult> out;
    const PhysicalParams p = c.params();
    const Grid g = c.grid();
    const BaseFlow base = build_base_flow(p, g);

    double worst = 0.0;
    for (int n2 : {16, c.n2}) {
        const Grid gg = Grid::make(c.n1, n2);
        const SteadyResidual r = steady_residual(build_base_flow(p, gg), p, gg);
        worst = std::max({worst, r.mass, r.mom1, r.mom2, r.energy});
    }
    out.push_back(make_check("steady residual", worst <= 1e-11, "max component " + fmt(worst)));

    {
        ImexIntegrator imex(base, p, g, c.solver.tendency_options());
        PerturbationState s = PerturbationState::zero(g);
        for (int k = 0; k < 100; ++k) s = imex.step(s, c.solver.dt);
        const double n = energy_norm(s, p);
        out.push_back(make_check("zero state fixed point", n <= 1e-10,
                                 "norm after 100 steps " + fmt(n)));
    }

    const double r2 = ddx2_error_ratio(32);
    out.push_back(make_check("ddx2 second order", std::abs(r2 - 4.0) <= 0.5,
                             "error ratio " + fmt(r2)));
    const double e1 = ddx1_resolved_error(c.n1);
    out.push_back(make_check("ddx1 spectral exactness", e1 <= 1e-12, "max error " + fmt(e1)));
    const double ibp = ibp_order(32);
    out.push_back(make_check("integration by parts defect", std::abs(ibp - 2.0) <= 0.5,
                             "observed order " + fmt(ibp)));

    const double small = entropy_ratio(p, g, 1e-3);
    const double medium = entropy_ratio(p, g, 1e-2);
    out.push_back(make_check("entropy comparability",
                             std::abs(small - 1.0) <= 0.05 && medium >= 0.5 && medium <= 2.0,
                             "ratio " + fmt(small) + " at 1e-3, " + fmt(medium) + " at 1e-2"));

    try {
        ImexIntegrator imex(base, p, g, c.solver.tendency_options());
        PerturbationState s = make_initial_data(p, g, c.initial);
        const double m0 = integrate(s.phi), scale = l2_norm(s.phi);
        double drift = 0.0;
        for (int k = 0; k < 100; ++k) {
            s = imex.step(s, c.solver.dt);
            drift = std::max(drift, std::abs(integrate(s.phi) - m0));
        }
        const double rel = scale > 0.0 ? drift / scale : drift;
        out.push_back(make_check("mass conservation", rel <= 1e-6,
                                 "relative drift over 100 steps " + fmt(rel)));
    } catch (const Error& e) {
        out.push_back(make_check("mass conservation", false, e.what()));
    }

    {
        const PerturbationState s = make_initial_data(p, g, c.initial);
        const PerturbationState back = decode_checkpoint(encode_checkpoint(s));
        out.push_back(make_check("checkpoint round trip", back.identical(s), "bitwise comparison"));
    }
    return out;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compressible Couette perturbation solver"};
    app.name(argc > 0 ? std::filesystem::path(argv[0]).filename().string() : "couette_cli");
    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--set", overrides, "override one key (key=value), repeatable")
        ->allow_extra_args(false);
    app.require_subcommand(1, 1);
    auto* run_cmd = app.add_subcommand("run", "one simulation with CSV diagnostics");
    auto* sweep_cmd = app.add_subcommand("sweep", "eps sweep or stiffness benchmark");
    auto* base_cmd = app.add_subcommand("baseflow", "dump base-flow profiles as CSV");
    auto* check_cmd = app.add_subcommand("check", "built-in verification suite");
    for (auto* s : {run_cmd, sweep_cmd, base_cmd, check_cmd}) s->fallthrough();

    try {
        std::vector<std::string> args;
        for (int k = argc - 1; k > 0; --k) args.emplace_back(argv[k]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        const ParsedConfig parsed = load_config(config_path, overrides);
        if (run_cmd->parsed()) return cmd_run(parsed, out, err);
        if (sweep_cmd->parsed()) return cmd_sweep(parsed, out, err);
        if (base_cmd->parsed()) return cmd_baseflow(parsed, out);
        return cmd_check(parsed, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace couette
