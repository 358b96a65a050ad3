#include "couette/state.hpp"

#include <cstring>

namespace couette {

PerturbationState PerturbationState::zero(const Grid& grid, double time) {
    return {ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid), time};
}

bool PerturbationState::all_finite() const {
    return phi.all_finite() && psi1.all_finite() && psi2.all_finite() && theta.all_finite();
}

bool PerturbationState::identical(const PerturbationState& o) const {
    return phi.identical(o.phi) && psi1.identical(o.psi1) && psi2.identical(o.psi2) &&
           theta.identical(o.theta) && std::memcmp(&time, &o.time, sizeof(double)) == 0;
}

Tendency Tendency::zero(const Grid& grid) {
    return {ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid)};
}

bool Tendency::all_finite() const {
    return dphi.all_finite() && dpsi1.all_finite() && dpsi2.all_finite() && dtheta.all_finite();
}

void Tendency::mask_walls() {
    dpsi1.set_walls_zero();
    dpsi2.set_walls_zero();
    dtheta.set_walls_zero();
}

Tendency& Tendency::operator+=(const Tendency& o) {
    dphi += o.dphi;
    dpsi1 += o.dpsi1;
    dpsi2 += o.dpsi2;
    dtheta += o.dtheta;
    return *this;
}

Tendency& Tendency::operator*=(double s) {
    dphi *= s;
    dpsi1 *= s;
    dpsi2 *= s;
    dtheta *= s;
    return *this;
}

PerturbationState axpy(const PerturbationState& u, double a, const Tendency& k) {
    PerturbationState out = u;
    out.phi.values() += a * k.dphi.values();
    out.psi1.values() += a * k.dpsi1.values();
    out.psi2.values() += a * k.dpsi2.values();
    out.theta.values() += a * k.dtheta.values();
    return out;
}

Tendency as_tendency(const PerturbationState& u) { return {u.phi, u.psi1, u.psi2, u.theta}; }

}  // namespace couette
