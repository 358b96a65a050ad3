/// @file baseflow.hpp
/// @brief Nondimensional plane Couette state and its discrete steady residual.
#pragma once

#include <Eigen/Core>

#include "couette/grid.hpp"
#include "couette/params.hpp"

namespace couette {

/// x2 profiles of the Couette state, sampled at the grid's x2 nodes. Derivatives are the
/// analytic ones, not stencil approximations.
struct BaseFlow {
    Eigen::ArrayXd rho_t;     ///< 1 / temp_t
    Eigen::ArrayXd u1_t;      ///< x2
    Eigen::ArrayXd temp_t;    ///< chi + (1-chi) x2 - eps^2 Pr/(2 cp) (x2^2 - x2)
    Eigen::ArrayXd du1_t;     ///< 1
    Eigen::ArrayXd dtemp_t;   ///< d temp_t / dx2
    Eigen::ArrayXd d2temp_t;  ///< -eps^2 Pr / cp
    Eigen::ArrayXd drho_t;    ///< d rho_t / dx2 = -dtemp_t / temp_t^2
    Eigen::ArrayXd temp_dev;  ///< temp_t - 1, evaluated without cancellation
    Eigen::ArrayXd rho_dev;   ///< rho_t - 1, evaluated without cancellation
};

/// Throws ParamError if the profile is not strictly positive.
BaseFlow build_base_flow(const PhysicalParams& params, const Grid& grid);

struct SteadyResidual {
    double mass = 0;
    double mom1 = 0;
    double mom2 = 0;
    double energy = 0;
};

/// L2 norms of the four discrete equations of the full nondimensional system with the base
/// flow substituted. The energy balance closes because kappa * d2temp + eps^2 * mu * (du1)^2
/// vanishes identically when kappa * Pr / cp == mu.
SteadyResidual steady_residual(const BaseFlow& base, const PhysicalParams& params,
                               const Grid& grid);

}  // namespace couette
