/// @file state.hpp
/// @brief Perturbation fields around the Couette state and their time derivatives.
#pragma once

#include "couette/grid.hpp"

namespace couette {

/// (phi, psi, theta) = (rho - rho_t, u - u_t, T - T_t) at one time level.
struct PerturbationState {
    ScalarField phi;
    ScalarField psi1;
    ScalarField psi2;
    ScalarField theta;
    double time = 0.0;

    static PerturbationState zero(const Grid& grid, double time = 0.0);
    const Grid& grid() const { return phi.grid(); }
    bool all_finite() const;
    bool identical(const PerturbationState& o) const;
};

struct Tendency {
    ScalarField dphi;
    ScalarField dpsi1;
    ScalarField dpsi2;
    ScalarField dtheta;

    static Tendency zero(const Grid& grid);
    bool all_finite() const;
    /// Zero the psi/theta wall rows, where the values are held by the boundary condition.
    void mask_walls();
    Tendency& operator+=(const Tendency& o);
    Tendency& operator*=(double s);
};

/// u + a * k, time untouched.
PerturbationState axpy(const PerturbationState& u, double a, const Tendency& k);
/// Tendency-shaped view of a state (used to perturb states along a direction).
Tendency as_tendency(const PerturbationState& u);

}  // namespace couette
