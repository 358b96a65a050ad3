#include "couette/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "couette/diagnostics.hpp"
#include "couette/experiments.hpp"

namespace couette {

namespace {
constexpr double pi = std::numbers::pi;

double max_abs(const ScalarField& f) { return f.values().abs().maxCoeff(); }

double state_max_diff(const PerturbationState& a, const PerturbationState& b) {
    return std::max({max_abs(a.phi - b.phi), max_abs(a.psi1 - b.psi1), max_abs(a.psi2 - b.psi2),
                     max_abs(a.theta - b.theta)});
}
}  // namespace

double ddx2_error_ratio(int n2, int n1) {
    auto err = [n1](int n) {
        const Grid g = Grid::make(n1, n);
        const ScalarField f = ScalarField::from_function(g, [](double, double y) { return std::sin(pi * y); });
        const ScalarField exact =
            ScalarField::from_function(g, [](double, double y) { return pi * std::cos(pi * y); });
        return max_abs(ddx2(f) - exact);
    };
    return err(n2) / err(2 * n2);
}

double ddx1_resolved_error(int n1, int n2) {
    const Grid g = Grid::make(n1, n2);
    double worst = 0.0;
    for (int k = 1; k < n1 / 2; ++k) {
        const ScalarField s = ScalarField::from_function(g, [k](double x, double y) { return std::sin(k * x) * (0.5 + 0.5 * y); });
        const ScalarField c = ScalarField::from_function(g, [k](double x, double y) { return std::cos(k * x) * (0.5 + 0.5 * y); });
        worst = std::max(worst, max_abs(ddx1(s) - static_cast<double>(k) * c));
        worst = std::max(worst, max_abs(ddx1(c) + static_cast<double>(k) * s));
    }
    return worst;
}

double ibp_defect(int n2, int n1) {
    const Grid g = Grid::make(n1, n2);
    auto f = ScalarField::from_function(g, [](double x, double y) { return std::exp(y) * (2.0 + std::cos(x)); });
    auto h = ScalarField::from_function(g, [](double x, double y) { return std::cos(2.0 * y) + std::sin(x); });
    // Boundary term: integral over x1 of f h at x2 = 1 minus at x2 = 0.
    double boundary = 0.0;
    for (int i = 0; i < g.n1; ++i) boundary += (f(i, g.n2) * h(i, g.n2) - f(i, 0) * h(i, 0)) * g.dx1;
    return std::abs(integrate(f * ddx2(h)) + integrate(h * ddx2(f)) - boundary);
}

double ibp_order(int n2) { return std::log2(ibp_defect(n2) / ibp_defect(2 * n2)); }

double entropy_ratio(const PhysicalParams& p, const Grid& g, double amplitude, int shape) {
    PerturbationState s = PerturbationState::zero(g);
    if (shape == 0) {
        s = make_initial_data(p, g, {1.0 / (p.eps * p.eps), 1.0 / p.eps, 1.0 / (p.eps * p.eps)});
        // Peak of 4 pi sin^3 cos is 3 sqrt(3) pi / 4.
        const double psi_peak = 3.0 * std::sqrt(3.0) * pi / 4.0;
        s.phi *= amplitude;
        s.psi1 *= amplitude / psi_peak;
        s.psi2 *= amplitude / psi_peak;
        s.theta *= amplitude;
    } else {
        s = random_state(g, amplitude, static_cast<std::uint64_t>(shape));
    }
    const BaseFlow base = build_base_flow(p, g);
    return relative_entropy(s, base, p, g) / quadratic_entropy(s, p);
}

double compatibility_ratio(const PhysicalParams& p, const Grid& g, const Amplitudes& a) {
    const BaseFlow base = build_base_flow(p, g);
    const PerturbationState s = make_initial_data(p, g, a);
    const Tendency k = tendency(s, base, p, g);
    double wall = 0.0, interior = 0.0;
    for (const ScalarField* f : {&k.dpsi1, &k.dpsi2, &k.dtheta}) {
        const auto& v = f->values();
        wall = std::max({wall, v.row(0).abs().maxCoeff(), v.row(g.n2).abs().maxCoeff()});
        interior = std::max(interior, v.middleRows(1, g.n2 - 1).abs().maxCoeff());
    }
    return interior > 0.0 ? wall / interior : 0.0;
}

std::vector<double> cross_integrator_differences(const PerturbationState& s, const BaseFlow& base,
                                                 const PhysicalParams& p, const Grid& g, double dt,
                                                 int levels) {
    std::vector<double> out;
    for (int l = 0; l < levels; ++l, dt *= 0.5) {
        const PerturbationState a = step_imex(s, base, p, g, dt);
        const PerturbationState b = step_explicit_rk4(s, base, p, g, dt);
        out.push_back(state_max_diff(a, b));
    }
    return out;
}

std::vector<double> observed_orders(const std::vector<double>& e) {
    std::vector<double> out;
    for (std::size_t k = 1; k < e.size(); ++k) out.push_back(std::log2(e[k - 1] / e[k]));
    return out;
}

}  // namespace couette
