#include <doctest.h>

#include <cmath>

#include "couette/baseflow.hpp"

using namespace couette;

namespace {
PhysicalParams params_with(double eps, double chi) {
    return with_eps(build_params(1.4, 0.1, 1.0, 0.72, 1.0 / 3.0, chi), eps);
}
}  // namespace

TEST_CASE("midpoint temperature at chi = 1") {
    const PhysicalParams p = params_with(0.1, 1.0);
    const Grid g = Grid::make(8, 16);
    const BaseFlow b = build_base_flow(p, g);
    // 1 + eps^2 Pr / (8 Cp) at eps = 0.1
    CHECK(b.temp_t(8) == doctest::Approx(1.000257142857142857).epsilon(1e-15));
}

TEST_CASE("wall temperatures and unit pressure are exact") {
    for (double chi : {0.5, 1.0, 1.3}) {
        const PhysicalParams p = params_with(0.2, chi);
        const Grid g = Grid::make(8, 24);
        const BaseFlow b = build_base_flow(p, g);
        CHECK(b.temp_t(0) == chi);
        CHECK(b.temp_t(g.n2) == 1.0);
        CHECK(b.temp_dev(g.n2) == 0.0);
        for (int j = 0; j <= g.n2; ++j) {
            CHECK(std::abs(b.rho_t(j) * b.temp_t(j) - 1.0) <= 2.3e-16);
            CHECK(b.temp_t(j) == doctest::Approx(1.0 + b.temp_dev(j)).epsilon(1e-15));
            CHECK(b.rho_t(j) == doctest::Approx(1.0 + b.rho_dev(j)).epsilon(1e-15));
            CHECK(b.u1_t(j) == g.x2(j));
        }
    }
}

TEST_CASE("stored derivatives are the analytic ones") {
    const PhysicalParams p = params_with(0.3, 0.8);
    const Grid g = Grid::make(8, 10);
    const BaseFlow b = build_base_flow(p, g);
    const double q = p.eps * p.eps * p.prandtl / (2.0 * p.cp);
    for (int j = 0; j <= g.n2; ++j) {
        const double x = g.x2(j);
        CHECK(b.dtemp_t(j) == doctest::Approx((1.0 - 0.8) - q * (2.0 * x - 1.0)));
        CHECK(b.d2temp_t(j) == doctest::Approx(-p.eps * p.eps * p.prandtl / p.cp));
        CHECK(b.du1_t(j) == 1.0);
    }
}

TEST_CASE("base flow is a discrete steady state") {
    const PhysicalParams p = params_with(0.1, 1.0);
    for (int n2 : {8, 16, 64, 128}) {
        const Grid g = Grid::make(64, n2);
        const SteadyResidual r = steady_residual(build_base_flow(p, g), p, g);
        CHECK(r.mass <= 1e-12);
        CHECK(r.mom1 <= 1e-12);
        CHECK(r.mom2 <= 1e-12);
        CHECK(r.energy <= 1e-12);
    }
}

TEST_CASE("temperature deviation obeys the elementary bound") {
    for (double eps : {0.025, 0.1, 0.2})
        for (double chi : {0.9, 1.0, 1.1}) {
            const PhysicalParams p = params_with(eps, chi);
            const Grid g = Grid::make(8, 64);
            const BaseFlow b = build_base_flow(p, g);
            const double bound = std::abs(1.0 - chi) + eps * eps * p.prandtl / (8.0 * p.cp);
            CHECK((b.temp_t - 1.0).abs().maxCoeff() <= bound + 1e-15);
            CHECK(b.temp_t.minCoeff() > 0.75);
            CHECK(b.rho_t.minCoeff() > 0.75);
        }
}
