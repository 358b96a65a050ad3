#include "couette/params.hpp"

#include <cmath>
#include <string>

#include "couette/error.hpp"

namespace couette {

namespace {

void require(bool ok, const char* violation, const std::string& message) {
    if (!ok) throw ParamError(violation, message);
}

}  // namespace

PhysicalParams build_params(double gamma, double mach, double reynolds, double prandtl,
                            double visc_ratio, double chi) {
    require(std::isfinite(gamma) && std::isfinite(mach) && std::isfinite(reynolds) &&
                std::isfinite(prandtl) && std::isfinite(visc_ratio) && std::isfinite(chi),
            "finite", "all physical inputs must be finite");
    require(gamma > 1.0, "gamma", "gamma must exceed 1");
    require(mach > 0.0, "mach", "mach must be positive");
    require(reynolds > 0.0, "reynolds", "reynolds must be positive");
    require(prandtl > 0.0, "prandtl", "prandtl must be positive");
    require(chi > 0.0, "chi", "chi must be positive");

    PhysicalParams p;
    p.gamma = gamma;
    p.mach = mach;
    p.reynolds = reynolds;
    p.prandtl = prandtl;
    p.visc_ratio = visc_ratio;
    p.chi = chi;

    p.eps = std::sqrt(gamma) * mach;
    p.mu = 1.0 / reynolds;
    p.mu_prime = visc_ratio * p.mu;
    p.cp = gamma / (gamma - 1.0);
    // kappa = cp * mu / Pr keeps kappa * Pr / cp == mu to rounding.
    p.kappa = p.cp * p.mu / prandtl;

    require(p.mu + p.mu_prime > 0.0, "viscosity", "mu + mu_prime must be positive");
    return p;
}

double mach_for_eps(double eps, double gamma) { return eps / std::sqrt(gamma); }

PhysicalParams with_eps(const PhysicalParams& p, double eps) {
    PhysicalParams out = build_params(p.gamma, mach_for_eps(eps, p.gamma), p.reynolds, p.prandtl,
                                      p.visc_ratio, p.chi);
    // Keep the requested value exactly; sqrt(gamma) * (eps / sqrt(gamma)) can be off by an ulp.
    out.eps = eps;
    return out;
}

}  // namespace couette
