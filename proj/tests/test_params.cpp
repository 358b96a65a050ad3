#include <doctest.h>

#include <cmath>

#include "couette/error.hpp"
#include "couette/params.hpp"

using namespace couette;

namespace {
PhysicalParams defaults() { return build_params(1.4, 0.1, 1.0, 0.72, 1.0 / 3.0, 1.0); }

std::string violation_of(double gamma, double mach, double re, double pr, double ratio, double chi) {
    try {
        build_params(gamma, mach, re, pr, ratio, chi);
    } catch (const ParamError& e) {
        return e.violation();
    }
    return "";
}
}  // namespace

TEST_CASE("derived coefficients at the reference parameters") {
    const PhysicalParams p = defaults();
    // Extended-precision values of sqrt(1.4) * 0.1 and 3.5 / 0.72.
    CHECK(p.eps == doctest::Approx(0.118321595661992320851).epsilon(1e-15));
    CHECK(p.mu == 1.0);
    CHECK(p.mu_prime == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p.cp == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(p.kappa == doctest::Approx(4.86111111111111111111).epsilon(1e-15));
}

TEST_CASE("kappa Pr / Cp reproduces mu") {
    for (double re : {0.5, 1.0, 7.0, 300.0})
        for (double pr : {0.1, 0.72, 5.0}) {
            const PhysicalParams p = build_params(1.4, 0.05, re, pr, 0.0, 1.0);
            CHECK(std::abs(p.kappa * p.prandtl / p.cp - p.mu) <= 4e-16 * p.mu);
        }
}

TEST_CASE("eps squared equals gamma Ma squared") {
    for (double g : {1.1, 1.4, 5.0 / 3.0})
        for (double m : {1e-4, 0.01, 0.3}) {
            const PhysicalParams p = build_params(g, m, 1.0, 0.72, 1.0 / 3.0, 1.0);
            CHECK(p.eps * p.eps == doctest::Approx(g * m * m).epsilon(1e-14));
        }
}

TEST_CASE("each constraint is rejected with its own name") {
    CHECK(violation_of(1.0, 0.1, 1, 0.72, 0.3, 1) == "gamma");
    CHECK(violation_of(0.9, 0.1, 1, 0.72, 0.3, 1) == "gamma");
    CHECK(violation_of(1.4, 0.0, 1, 0.72, 0.3, 1) == "mach");
    CHECK(violation_of(1.4, 0.1, -1, 0.72, 0.3, 1) == "reynolds");
    CHECK(violation_of(1.4, 0.1, 1, 0.0, 0.3, 1) == "prandtl");
    CHECK(violation_of(1.4, 0.1, 1, 0.72, 0.3, 0.0) == "chi");
    CHECK(violation_of(1.4, 0.1, 1, 0.72, -1.0, 1) == "viscosity");
    CHECK(violation_of(1.4, NAN, 1, 0.72, 0.3, 1) != "");
    CHECK(violation_of(1.4, 0.1, 1, 0.72, -0.5, 1) == "");
}

TEST_CASE("with_eps pins eps and keeps the rest") {
    const PhysicalParams p = defaults();
    const PhysicalParams q = with_eps(p, 0.025);
    CHECK(q.eps == 0.025);
    CHECK(q.mach == doctest::Approx(0.025 / std::sqrt(1.4)));
    CHECK(q.kappa == p.kappa);
    CHECK(q.mu_prime == p.mu_prime);
    CHECK(mach_for_eps(0.1, 1.4) * std::sqrt(1.4) == doctest::Approx(0.1));
}
