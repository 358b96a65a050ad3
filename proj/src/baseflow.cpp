#include "couette/baseflow.hpp"

#include <string>

#include "couette/error.hpp"

namespace couette {

BaseFlow build_base_flow(const PhysicalParams& params, const Grid& grid) {
    const Eigen::ArrayXd x = grid.x2_nodes();
    const double heating = params.eps * params.eps * params.prandtl / (2.0 * params.cp);
    const double chi = params.chi;

    BaseFlow b;
    b.temp_dev = (chi - 1.0) * (1.0 - x) - heating * (x * x - x);
    b.temp_t = chi + (1.0 - chi) * x - heating * (x * x - x);
    // Endpoints are exact by construction: T(0) = chi, T(1) = 1.
    b.temp_t(0) = chi;
    b.temp_t(grid.n2) = 1.0;
    b.temp_dev(grid.n2) = 0.0;

    const double t_min = b.temp_t.minCoeff();
    if (!(t_min > 0.0))
        throw ParamError("base_temperature",
                         "base temperature profile is not positive (min " +
                             std::to_string(t_min) + ")");

    b.rho_t = 1.0 / b.temp_t;
    b.rho_dev = -b.temp_dev / b.temp_t;
    b.u1_t = x;
    b.du1_t = Eigen::ArrayXd::Ones(grid.rows());
    b.dtemp_t = (1.0 - chi) - heating * (2.0 * x - 1.0);
    b.d2temp_t = Eigen::ArrayXd::Constant(grid.rows(), -2.0 * heating);
    b.drho_t = -b.dtemp_t / (b.temp_t * b.temp_t);
    return b;
}

SteadyResidual steady_residual(const BaseFlow& base, const PhysicalParams& params,
                               const Grid& grid) {
    const ScalarField rho = ScalarField::from_profile(grid, base.rho_t);
    const ScalarField u1 = ScalarField::from_profile(grid, base.u1_t);
    const ScalarField u2(grid);
    const ScalarField temp = ScalarField::from_profile(grid, base.temp_t);
    const double inv_eps2 = 1.0 / (params.eps * params.eps);
    const double mu = params.mu;
    const double mu_p = params.mu_prime;

    // Stationary form: every time derivative is zero.
    const ScalarField mass = ddx1(rho * u1) + ddx2(rho * u2);

    const ScalarField p = rho * temp;
    const ScalarField d1u1 = ddx1(u1), d2u1 = ddx2(u1), d1u2 = ddx1(u2), d2u2 = ddx2(u2);
    const ScalarField div = d1u1 + d2u2;
    const ScalarField lap_u1 = ddx1(d1u1) + d2x2(u1);
    const ScalarField lap_u2 = ddx1(d1u2) + d2x2(u2);

    const ScalarField mom1 = rho * (u1 * d1u1 + u2 * d2u1) + inv_eps2 * ddx1(p) -
                             mu * lap_u1 - (mu + mu_p) * ddx1(div);
    const ScalarField mom2 = rho * (u1 * d1u2 + u2 * d2u2) + inv_eps2 * ddx2(p) -
                             mu * lap_u2 - (mu + mu_p) * ddx2(div);

    const ScalarField d1t = ddx1(temp), d2t = ddx2(temp);
    // T = 1 + temp_dev and the stencil annihilates constants exactly; differencing the small
    // deviation keeps the 1/dx2^2 round-off amplification at the size of the deviation.
    const ScalarField lap_t =
        ddx1(d1t) + d2x2(ScalarField::from_profile(grid, base.temp_dev));
    const ScalarField shear = d2u1 + d1u2;
    // 2 mu |D(u)|^2 + mu' (div u)^2
    const ScalarField heat = 2.0 * mu * (d1u1 * d1u1 + d2u2 * d2u2 + 0.5 * (shear * shear)) +
                             mu_p * (div * div);
    const ScalarField energy = (1.0 / (params.gamma - 1.0)) * (rho * (u1 * d1t + u2 * d2t)) +
                               p * div - params.kappa * lap_t -
                               (params.eps * params.eps) * heat;

    SteadyResidual r;
    r.mass = l2_norm(mass);
    r.mom1 = l2_norm(mom1);
    r.mom2 = l2_norm(mom2);
    r.energy = l2_norm(energy);
    return r;
}

}  // namespace couette
