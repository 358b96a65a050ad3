// Randomised invariants over seeded inputs.
#include <doctest.h>

#include <cmath>
#include <random>

#include "couette/checkpoint.hpp"
#include "couette/config.hpp"
#include "couette/diagnostics.hpp"
#include "couette/experiments.hpp"

using namespace couette;

namespace {
ScalarField random_field(const Grid& g, std::mt19937_64& rng, double amp = 1.0) {
    std::uniform_real_distribution<double> u(-amp, amp);
    ScalarField f(g);
    for (Eigen::Index n = 0; n < f.values().size(); ++n) f.values().data()[n] = u(rng);
    return f;
}
double max_abs(const ScalarField& f) { return f.values().abs().maxCoeff(); }
}  // namespace

TEST_CASE("dealias is idempotent bitwise") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid g = Grid::make(8 + 2 * (trial % 12), 8 + trial);
        const ScalarField once = dealias(random_field(g, rng));
        CHECK(dealias(once).identical(once));
    }
}

TEST_CASE("derivatives are linear and kill constants") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid g = Grid::make(16, 12);
        const ScalarField f = random_field(g, rng), h = random_field(g, rng);
        const double a = u(rng);
        CHECK(max_abs(ddx1(f + a * h) - ddx1(f) - a * ddx1(h)) <= 1e-12);
        CHECK(max_abs(ddx2(f + a * h) - ddx2(f) - a * ddx2(h)) <= 1e-11);
        const ScalarField c = ScalarField::from_function(g, [&](double, double) { return a; });
        CHECK(max_abs(ddx1(c)) == 0.0);
        CHECK(max_abs(ddx2(c)) == 0.0);
        CHECK(max_abs(ddx2_flux(c)) == 0.0);
    }
}

TEST_CASE("flux derivative integrates to the wall difference for any field") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Grid g = Grid::make(16, 10 + trial);
        const ScalarField f = random_field(g, rng);
        double walls = 0.0;
        for (int i = 0; i < g.n1; ++i) walls += (f(i, g.n2) - f(i, 0)) * g.dx1;
        CHECK(integrate(ddx2_flux(f)) == doctest::Approx(walls).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("relative entropy is non-negative and comparable to Q for small states") {
    const PhysicalParams p = with_eps(build_params(1.4, 0.1, 1, 0.72, 1.0 / 3.0, 1.0), 0.1);
    const Grid g = Grid::make(16, 16);
    const BaseFlow b = build_base_flow(p, g);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double amp = std::pow(10.0, -1.0 - static_cast<double>(seed % 5));
        const PerturbationState s = random_state(g, amp, seed);
        const double eta = relative_entropy(s, b, p, g), q = quadratic_entropy(s, p);
        CHECK(eta > 0.0);
        if (amp <= 1e-2) {
            CHECK(eta >= 0.5 * q);
            CHECK(eta <= 2.0 * q);
        }
    }
}

TEST_CASE("checkpoint round trip is bitwise for random states") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Grid g = Grid::make(8 + 2 * trial, 8 + 3 * trial);
        PerturbationState s = random_state(g, std::pow(10.0, -trial), 100 + trial);
        s.time = std::uniform_real_distribution<double>(0, 100)(rng);
        const PerturbationState back = decode_checkpoint(encode_checkpoint(s));
        CHECK(back.identical(s));
        CHECK(back.time == s.time);
    }
}

TEST_CASE("config round trip for random valid configurations") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        RunConfig c;
        c.gamma = 1.05 + u(rng);
        if (trial % 2) c.eps = 0.01 + 0.4 * u(rng);
        else c.mach = 0.01 + 0.3 * u(rng);
        c.reynolds = 0.1 + 10 * u(rng);
        c.prandtl = 0.1 + u(rng);
        c.visc_ratio = -0.5 + u(rng);
        c.chi = 0.8 + 0.4 * u(rng);
        c.n1 = 8 + 2 * (trial % 30);
        c.n2 = 8 + trial;
        c.solver.dt = 1e-4 + 1e-3 * u(rng);
        c.solver.t_end = trial % 3 == 0 ? 0.0 : 1.0 + u(rng);
        c.solver.diag_stride = 1 + trial;
        c.solver.dealias_on = trial % 4 != 0;
        c.solver.linear = trial % 5 == 0;
        c.initial = {u(rng), -u(rng), u(rng)};
        c.parallel = trial % 2 == 0;
        c.output_dir = "out/" + std::to_string(trial);
        CHECK(parse_config(serialize_config(c)).config == c);
    }
}

TEST_CASE("imex keeps the walls and the mass for random smooth data") {
    const PhysicalParams p = with_eps(build_params(1.4, 0.1, 1, 0.72, 1.0 / 3.0, 1.0), 0.1);
    const Grid g = Grid::make(16, 16);
    const BaseFlow b = build_base_flow(p, g);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 5; ++trial) {
        PerturbationState s = make_initial_data(p, g, {u(rng), u(rng), u(rng)});
        ImexIntegrator imex(b, p, g);
        const double m0 = integrate(s.phi), n0 = l2_norm(s.phi);
        for (int k = 0; k < 50; ++k) s = imex.step(s, 2e-3);
        CHECK(std::abs(integrate(s.phi) - m0) <= 1e-6 * n0);
        CHECK(s.psi1.values().row(0).abs().maxCoeff() == 0.0);
        CHECK(s.theta.values().row(g.n2).abs().maxCoeff() == 0.0);
    }
}
