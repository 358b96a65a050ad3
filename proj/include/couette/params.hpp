/// @file params.hpp
/// @brief Physical inputs and the nondimensional coefficients derived from them.
#pragma once

namespace couette {

/// Ideal polytropic gas with R = 1. Construct through build_params() only.
struct PhysicalParams {
    double gamma = 0;       ///< ratio of specific heats
    double mach = 0;        ///< Ma
    double reynolds = 0;    ///< Re
    double prandtl = 0;     ///< Pr
    double visc_ratio = 0;  ///< nu'/nu
    double chi = 0;         ///< lower/top wall temperature ratio

    double eps = 0;       ///< sqrt(gamma) * Ma
    double mu = 0;        ///< 1 / Re
    double mu_prime = 0;  ///< visc_ratio * mu
    double kappa = 0;     ///< cp / (Re Pr)
    double cp = 0;        ///< gamma / (gamma - 1)

    bool operator==(const PhysicalParams&) const = default;
};

/// Throws ParamError naming the violated constraint.
PhysicalParams build_params(double gamma, double mach, double reynolds, double prandtl,
                            double visc_ratio, double chi);

/// Mach number giving a target eps for the given gamma.
double mach_for_eps(double eps, double gamma);

/// Same inputs as `p` but with eps replaced.
PhysicalParams with_eps(const PhysicalParams& p, double eps);

}  // namespace couette
