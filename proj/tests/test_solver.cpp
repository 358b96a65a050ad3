#include <doctest.h>

#include <cmath>
#include <numbers>

#include "couette/error.hpp"
#include "couette/experiments.hpp"
#include "couette/solver.hpp"
#include "couette/verification.hpp"

using namespace couette;
using std::numbers::pi;

namespace {
PhysicalParams params_at(double eps, double chi = 1.0) {
    return with_eps(build_params(1.4, 0.1, 1.0, 0.72, 1.0 / 3.0, chi), eps);
}
double max_abs(const ScalarField& f) { return f.values().abs().maxCoeff(); }
double tendency_norm(const Tendency& k) {
    return std::max({l2_norm(k.dphi), l2_norm(k.dpsi1), l2_norm(k.dpsi2), l2_norm(k.dtheta)});
}
double state_diff(const PerturbationState& a, const PerturbationState& b) {
    return std::max({max_abs(a.phi - b.phi), max_abs(a.psi1 - b.psi1), max_abs(a.psi2 - b.psi2),
                     max_abs(a.theta - b.theta)});
}
}  // namespace

TEST_CASE("zero perturbation has zero tendency") {
    for (double chi : {1.0, 0.9}) {
        const PhysicalParams p = params_at(0.1, chi);
        for (int n2 : {16, 64}) {
            const Grid g = Grid::make(64, n2);
            const BaseFlow b = build_base_flow(p, g);
            CHECK(tendency_norm(tendency(PerturbationState::zero(g), b, p, g)) <= 1e-11);
        }
    }
}

TEST_CASE("temperature alone does not force density") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(32, 32);
    const BaseFlow b = build_base_flow(p, g);
    PerturbationState s = PerturbationState::zero(g);
    s.theta = ScalarField::from_function(g, [](double x, double y) {
        return 1e-3 * std::sin(x) * std::pow(std::sin(pi * y), 2);
    });
    CHECK(max_abs(tendency(s, b, p, g).dphi) == 0.0);
}

TEST_CASE("density-only state: momentum tendency matches the analytic pressure force") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(32, 64);
    const BaseFlow b = build_base_flow(p, g);
    const double a = 1e-3;
    PerturbationState s = PerturbationState::zero(g);
    s.phi = ScalarField::from_function(g, [a](double x, double y) { return a * std::cos(x) * std::pow(std::sin(pi * y), 2); });
    const Tendency k = tendency(s, b, p, g);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 1; j < g.n2; ++j) {
            const double x = g.x1(i), y = g.x2(j);
            const double phi = a * std::cos(x) * std::pow(std::sin(pi * y), 2);
            const double d1phi = -a * std::sin(x) * std::pow(std::sin(pi * y), 2);
            // -eps^-2 T_t d1 phi / rho
            const double exact = -b.temp_t(j) * d1phi / (p.eps * p.eps) / (b.rho_t(j) + phi);
            worst = std::max(worst, std::abs(k.dpsi1(i, j) - exact));
            scale = std::max(scale, std::abs(exact));
        }
    CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("implicit solve inverts I - c L") {
    const PhysicalParams p = params_at(0.05);
    const Grid g = Grid::make(32, 32);
    const BaseFlow b = build_base_flow(p, g);
    ImexIntegrator imex(b, p, g);
    PerturbationState rhs = random_state(g, 1.0, 3);
    // Remove the Nyquist content, which the x1 derivative ignores.
    for (ScalarField* f : {&rhs.phi, &rhs.psi1, &rhs.psi2, &rhs.theta}) *f = dealias(*f);
    const double c = 0.02;
    const PerturbationState x = imex.solve_implicit(rhs, c);
    const PerturbationState back = axpy(x, -c, implicit_operator(x, b, p, g));
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 1; j < g.n2; ++j)
            worst = std::max({worst, std::abs(back.phi(i, j) - rhs.phi(i, j)),
                              std::abs(back.psi1(i, j) - rhs.psi1(i, j)),
                              std::abs(back.psi2(i, j) - rhs.psi2(i, j)),
                              std::abs(back.theta(i, j) - rhs.theta(i, j))});
    CHECK(worst <= 1e-10);
    for (int i = 0; i < g.n1; ++i)
        for (int j : {0, g.n2}) {
            CHECK(std::abs(back.phi(i, j) - rhs.phi(i, j)) <= 1e-10);
            CHECK(x.psi1(i, j) == 0.0);
            CHECK(x.theta(i, j) == 0.0);
        }
}

TEST_CASE("zero state is a fixed point of both integrators") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(32, 32);
    const BaseFlow b = build_base_flow(p, g);
    const PerturbationState z = PerturbationState::zero(g);
    const PerturbationState a = step_imex(z, b, p, g, 2e-3);
    CHECK(a.time == doctest::Approx(2e-3));
    CHECK(energy_norm(a, p) <= 1e-11);
    const PerturbationState r = step_explicit_rk4(z, b, p, g, 1e-5);
    CHECK(energy_norm(r, p) <= 1e-11);
}

TEST_CASE("walls stay exactly zero and mass is conserved under imex") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(32, 32);
    const BaseFlow b = build_base_flow(p, g);
    ImexIntegrator imex(b, p, g);
    PerturbationState s = make_initial_data(p, g, {});
    const double m0 = integrate(s.phi), n0 = l2_norm(s.phi);
    for (int k = 0; k < 200; ++k) {
        s = imex.step(s, 2e-3);
        for (int i = 0; i < g.n1; ++i)
            for (int j : {0, g.n2}) {
                REQUIRE(s.psi1(i, j) == 0.0);
                REQUIRE(s.psi2(i, j) == 0.0);
                REQUIRE(s.theta(i, j) == 0.0);
            }
        REQUIRE(std::abs(integrate(s.phi) - m0) <= 1e-6 * (1.0 + s.time) * n0);
    }
    CHECK(imex.has_history());
    imex.reset();
    CHECK_FALSE(imex.has_history());
}

TEST_CASE("linear acoustics at dt = 10 eps dx2 is energy stable and matches a fine rk4 run") {
    const PhysicalParams p = params_at(0.01);
    const Grid g = Grid::make(16, 16);
    const BaseFlow b = build_base_flow(p, g);
    const TendencyOptions lin{true, true};
    const double dt = 10.0 * p.eps * g.dx2;
    PerturbationState s = make_initial_data(p, g, {});
    const PerturbationState s0 = s;
    ImexIntegrator imex(b, p, g, lin);
    double e = energy_norm(s, p);
    for (int k = 0; k < 1000; ++k) {
        s = imex.step(s, dt);
        const double en = energy_norm(s, p);
        REQUIRE(en <= e * (1.0 + 1e-12));
        e = en;
    }
    // Reference: rk4 far below both stability limits up to the same final time.
    const double t_end = s.time;
    const double cap = std::min(acoustic_dt_bound(p, g), viscous_dt_bound(p, g));
    const long n = static_cast<long>(std::ceil(t_end / cap));
    PerturbationState r = s0;
    for (long k = 0; k < n; ++k) r = step_explicit_rk4(r, b, p, g, t_end / n, lin);
    const double scale = energy_norm(s0, p);
    PerturbationState d = r;
    d.phi -= s.phi;
    d.psi1 -= s.psi1;
    d.psi2 -= s.psi2;
    d.theta -= s.theta;
    CHECK(energy_norm(d, p) <= 1e-4 * scale);
}

TEST_CASE("one imex step agrees with rk4 to second order") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(32, 32);
    const BaseFlow b = build_base_flow(p, g);
    const auto diffs = cross_integrator_differences(make_initial_data(p, g, {}), b, p, g, 1e-4, 4);
    for (double o : observed_orders(diffs)) CHECK(o >= 1.8);
}

TEST_CASE("rk4 global error is fourth order") {
    const PhysicalParams p = params_at(0.2);
    const Grid g = Grid::make(16, 16);
    const BaseFlow b = build_base_flow(p, g);
    const PerturbationState s0 = make_initial_data(p, g, {});
    const double t_end = 2e-3;
    auto solve = [&](int steps) {
        PerturbationState s = s0;
        for (int k = 0; k < steps; ++k) s = step_explicit_rk4(s, b, p, g, t_end / steps);
        return s;
    };
    const PerturbationState ref = solve(64);
    const double e1 = state_diff(solve(8), ref), e2 = state_diff(solve(16), ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("rk4 refuses steps above either bound and blows up beyond the acoustic limit") {
    const PhysicalParams p = params_at(0.01);
    const Grid g = Grid::make(32, 32);
    const BaseFlow b = build_base_flow(p, g);
    const double a = acoustic_dt_bound(p, g), v = viscous_dt_bound(p, g);
    CHECK(a == doctest::Approx(0.5 * 0.01 / 32));
    CHECK(v == doctest::Approx(0.2 / (32.0 * 32.0)));
    const PerturbationState s = make_initial_data(p, g, {});
    try {
        step_explicit_rk4(s, b, p, g, 2.0 * std::max(a, v));
        FAIL("expected a CFL refusal");
    } catch (const CflError& e) {
        CHECK(e.acoustic_bound() == doctest::Approx(a));
        CHECK(e.viscous_bound() == doctest::Approx(v));
        CHECK(std::string(e.what()).find("acoustic") != std::string::npos);
    }
    const StabilityProbe probe = stability_probe(random_state(g, 1e-3, 9), p, g,
                                                 Scheme::explicit_rk4, 2.0 * a, 200, {true, true});
    CHECK_FALSE(probe.stable);
}

TEST_CASE("initial data: zero mass, eps scaling, wall values") {
    const Grid g = Grid::make(64, 64);
    const PerturbationState a = make_initial_data(params_at(0.1), g, {});
    const PerturbationState b = make_initial_data(params_at(0.05), g, {});
    CHECK(std::abs(integrate(a.phi)) <= 1e-13);
    const double ratio = std::hypot(l2_norm(a.psi1), l2_norm(a.psi2)) /
                         std::hypot(l2_norm(b.psi1), l2_norm(b.psi2));
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(l2_norm(a.phi) / l2_norm(b.phi) == doctest::Approx(4.0).epsilon(1e-14));
    for (int i = 0; i < g.n1; ++i)
        for (int j : {0, g.n2}) {
            CHECK(a.psi1(i, j) == 0.0);
            CHECK(a.psi2(i, j) == 0.0);
            CHECK(a.theta(i, j) == 0.0);
        }
    // Divergence-free up to the x2 truncation error.
    const double div = max_abs(ddx1(a.psi1) + ddx2(a.psi2));
    CHECK(div <= 0.05 * max_abs(ddx2(a.psi2)));
}

TEST_CASE("wall traces of the initial tendency shrink under refinement") {
    // The analytic traces vanish; the discrete ones are truncation error of the one-sided
    // wall stencils.
    const PhysicalParams p = params_at(0.1);
    const double r1 = compatibility_ratio(p, Grid::make(32, 64));
    const double r2 = compatibility_ratio(p, Grid::make(32, 128));
    const double r3 = compatibility_ratio(p, Grid::make(32, 256));
    CHECK(std::log2(r1 / r2) >= 1.8);
    CHECK(std::log2(r2 / r3) >= 1.8);
}

TEST_CASE("step plan lands on t_end") {
    SolverConfig c;
    c.dt = 2e-3;
    c.t_end = 5.0;
    CHECK(step_plan(c).first == 2500);
    CHECK(step_plan(c).second == doctest::Approx(2e-3));
    c.t_end = 0.0105;
    CHECK(step_plan(c).first == 6);
    CHECK(step_plan(c).second * 6 == doctest::Approx(0.0105));
    c.t_end = 0.0;
    CHECK(step_plan(c).first == 0);
}

TEST_CASE("run emits records at the stride and at the end") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(16, 16);
    SolverConfig c;
    c.t_end = 0.0;
    std::vector<long> steps;
    auto sink = [&](const PerturbationState&, const Tendency&, long k) { steps.push_back(k); };
    const PerturbationState s0 = make_initial_data(p, g, {});
    CHECK(run(c, p, g, s0, sink).identical(s0));
    CHECK(steps == std::vector<long>{0});

    steps.clear();
    c.t_end = 0.05;
    c.diag_stride = 10;
    run(c, p, g, s0, sink);
    CHECK(steps == std::vector<long>{0, 10, 20, 25});

    steps.clear();
    const PerturbationState z = run(c, p, g, PerturbationState::zero(g), sink);
    CHECK(energy_norm(z, p) <= 1e-11);
}

TEST_CASE("run rejects bad configurations and reports aborts with time and step") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(16, 16);
    SolverConfig c;
    c.dt = -1.0;
    CHECK_THROWS_AS(run(c, p, g, PerturbationState::zero(g), {}), Error);
    c = SolverConfig{};
    c.t_end = 1e-3;
    CHECK_THROWS_AS(run(c, p, g, PerturbationState::zero(g), {}), Error);
    c = SolverConfig{};
    c.scheme = Scheme::explicit_rk4;
    CHECK_THROWS_AS(run(c, p, g, PerturbationState::zero(g), {}), CflError);

    c = SolverConfig{};
    c.t_end = 0.1;
    PerturbationState s = make_initial_data(p, g, {});
    // Density amplitude large enough that the pressure wave drives rho negative.
    s.phi *= 1500.0;
    try {
        run(c, p, g, s, {});
        FAIL("expected an abort");
    } catch (const RunAborted& e) {
        CHECK(e.step() >= 1);
        CHECK(e.time() >= 0.0);
        CHECK(std::string(e.what()).find("positivity") != std::string::npos);
    }
}

TEST_CASE("positivity violation names the node") {
    const PhysicalParams p = params_at(0.1);
    const Grid g = Grid::make(16, 16);
    const BaseFlow b = build_base_flow(p, g);
    PerturbationState s = PerturbationState::zero(g);
    s.phi(3, 5) = -2.0;
    try {
        check_positivity(s, b);
        FAIL("expected PositivityError");
    } catch (const PositivityError& e) {
        CHECK(e.i() == 3);
        CHECK(e.j() == 5);
    }
    CHECK_THROWS_AS(tendency(s, b, p, g), PositivityError);
}
