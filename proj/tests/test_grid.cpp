#include <doctest.h>

#include <cmath>
#include <numbers>

#include "couette/error.hpp"
#include "couette/grid.hpp"
#include "couette/verification.hpp"

using namespace couette;
using std::numbers::pi;

namespace {
double max_abs(const ScalarField& f) { return f.values().abs().maxCoeff(); }
}  // namespace

TEST_CASE("grid construction") {
    const Grid g = Grid::make(16, 10);
    CHECK(g.rows() == 11);
    CHECK(g.size() == 176);
    CHECK(g.dx1 == doctest::Approx(2.0 * pi / 16));
    CHECK(g.x2(10) == 1.0);
    CHECK(g.x2_weights().sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(Grid::make(7, 16), GridError);
    CHECK_THROWS_AS(Grid::make(6, 16), GridError);
    CHECK_THROWS_AS(Grid::make(16, 4), GridError);
}

TEST_CASE("field storage is i outer, j inner") {
    const Grid g = Grid::make(8, 8);
    ScalarField f(g);
    f(2, 3) = 5.0;
    CHECK(f.values().data()[2 * g.rows() + 3] == 5.0);
}

TEST_CASE("ddx1 is exact on resolved modes") {
    CHECK(ddx1_resolved_error(64) <= 1e-12);
    CHECK(ddx1_resolved_error(16) <= 1e-13);
}

TEST_CASE("ddx1 maps x1-constant fields to exact zeros") {
    const Grid g = Grid::make(32, 16);
    const ScalarField f = ScalarField::from_function(g, [](double, double y) { return 1.0 + y * y; });
    CHECK(max_abs(ddx1(f)) == 0.0);
}

TEST_CASE("ddx2 is second order on sin(pi x2)") {
    CHECK(ddx2_error_ratio(32) == doctest::Approx(4.0).epsilon(0.125));
    CHECK(ddx2_error_ratio(64) == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("x2 stencils are exact on quadratics, walls included") {
    const Grid g = Grid::make(8, 12);
    const ScalarField f = ScalarField::from_function(g, [](double, double y) { return 3.0 * y * y - y + 2.0; });
    const ScalarField df = ScalarField::from_function(g, [](double, double y) { return 6.0 * y - 1.0; });
    CHECK(max_abs(ddx2(f) - df) <= 1e-12);
    CHECK(max_abs(d2x2(f) - 6.0 * ScalarField::from_function(g, [](double, double) { return 1.0; })) <= 1e-10);
    const ScalarField c = ScalarField::from_function(g, [](double, double) { return 7.25; });
    CHECK(max_abs(ddx2(c)) == 0.0);
    CHECK(max_abs(d2x2(c)) == 0.0);
}

TEST_CASE("flux derivative telescopes under integration") {
    const Grid g = Grid::make(16, 20);
    const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return std::exp(y) * (1.5 + std::sin(x)); });
    // integrate over x1 of f(x1, 1) - f(x1, 0) = 2 pi * 1.5 * (e - 1) by the rectangle rule.
    CHECK(integrate(ddx2_flux(f)) == doctest::Approx(2.0 * pi * 1.5 * (std::exp(1.0) - 1.0)).epsilon(1e-13));
}

TEST_CASE("integration: rectangle rule in x1, trapezoid in x2") {
    const Grid g = Grid::make(16, 8);
    const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return (1.0 + y) * std::cos(x) * std::cos(x); });
    CHECK(integrate(f) == doctest::Approx(1.5 * pi).epsilon(1e-14));
    const ScalarField y2 = ScalarField::from_function(g, [](double, double y) { return y * y; });
    // trapezoid on y^2 overestimates by h^2 / 6
    CHECK(integrate(y2) == doctest::Approx(2.0 * pi * (1.0 / 3.0 + g.dx2 * g.dx2 / 6.0)).epsilon(1e-14));
}

TEST_CASE("Sobolev norms of sin(x1)") {
    const Grid g = Grid::make(16, 8);
    const ScalarField f = ScalarField::from_function(g, [](double x, double) { return std::sin(x); });
    CHECK(l2_norm(f) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(sobolev_seminorm(f, 1) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(sobolev_norm(f, 1) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-14));
    CHECK(sobolev_norm(f, 3) == doctest::Approx(std::sqrt(4.0 * pi)).epsilon(1e-14));
    CHECK(linf_norm(f) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sobolev_norm(f, 4), GridError);
    CHECK_THROWS_AS(sobolev_seminorm(f, -1), GridError);
}

TEST_CASE("mixed derivative applies both directions") {
    const Grid g = Grid::make(16, 16);
    const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return std::sin(x) * y * y; });
    const ScalarField d = ScalarField::from_function(g, [](double x, double y) { return std::cos(x) * 2.0 * y; });
    CHECK(max_abs(derivative(f, 1, 1) - d) <= 1e-13);
}

TEST_CASE("dealias keeps resolved modes and drops the upper third") {
    const Grid g = Grid::make(64, 8);
    const ScalarField low = ScalarField::from_function(g, [](double x, double) { return std::cos(21.0 * x); });
    const ScalarField high = ScalarField::from_function(g, [](double x, double) { return std::sin(22.0 * x); });
    CHECK(dealias(low).identical(low));
    CHECK(max_abs(dealias(high)) <= 1e-13);
    CHECK(max_abs(dealias(low + high) - low) <= 1e-13);
}

TEST_CASE("discrete integration by parts defect is second order") {
    CHECK(ibp_order(32) == doctest::Approx(2.0).epsilon(0.25));
    CHECK(ibp_defect(64) < ibp_defect(32));
}
