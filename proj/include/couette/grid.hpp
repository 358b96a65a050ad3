/// @file grid.hpp
/// @brief Periodic-by-wall tensor grid on S^1 x (0,1) and the discrete operators on it.
///
/// Fields are stored as an (n2+1) x n1 column-major array: entry (j, i) sits at
/// x1 = i * 2pi / n1, x2 = j / n2, so memory is row-major in (i, j) with i outer.
/// x1 derivatives are Fourier collocation, x2 derivatives second-order finite
/// differences with one-sided stencils on the walls.
#pragma once

#include <Eigen/Core>
#include <functional>

namespace couette {

struct Grid {
    int n1 = 0;  ///< periodic nodes in x1 over [0, 2pi)
    int n2 = 0;  ///< intervals in x2; nodes j = 0..n2 include both walls
    double dx1 = 0;
    double dx2 = 0;

    /// Throws GridError unless n1 is even and >= 8 and n2 >= 8.
    static Grid make(int n1, int n2);

    int rows() const { return n2 + 1; }
    int size() const { return n1 * (n2 + 1); }
    double x1(int i) const;
    double x2(int j) const;
    Eigen::ArrayXd x2_nodes() const;
    /// Trapezoid weights in x2 (dx2/2 on the walls, dx2 inside).
    Eigen::ArrayXd x2_weights() const;

    bool operator==(const Grid&) const = default;
};

class ScalarField {
public:
    using Array = Eigen::ArrayXXd;

    ScalarField() = default;
    explicit ScalarField(const Grid& grid);
    ScalarField(const Grid& grid, Array values);

    static ScalarField from_function(const Grid& grid,
                                     const std::function<double(double, double)>& f);
    /// Field constant in x1 with the given x2 profile (length n2+1).
    static ScalarField from_profile(const Grid& grid, const Eigen::ArrayXd& profile);

    const Grid& grid() const { return grid_; }
    const Array& values() const { return values_; }
    Array& values() { return values_; }

    double operator()(int i, int j) const { return values_(j, i); }
    double& operator()(int i, int j) { return values_(j, i); }

    bool all_finite() const { return values_.allFinite(); }
    void set_walls_zero();

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

    /// Bitwise equality of samples and grid.
    bool identical(const ScalarField& o) const;

private:
    Grid grid_{};
    Array values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField operator*(const ScalarField& a, const ScalarField& b);
/// Multiply every x1 line by an x2 profile.
ScalarField scale_by_profile(const ScalarField& f, const Eigen::ArrayXd& profile);

/// Fourier-collocation d/dx1. The Nyquist mode is dropped.
ScalarField ddx1(const ScalarField& f);
/// Central differences inside, second-order one-sided differences on the walls.
ScalarField ddx2(const ScalarField& f);
/// Second x2 derivative: three-point inside, four-point one-sided on the walls.
ScalarField d2x2(const ScalarField& f);
/// Flux-difference x2 derivative: central inside, (f1 - f0)/dx2 on the walls.
/// Paired with integrate() it telescopes: integrate(ddx2_flux g) depends only on wall values.
ScalarField ddx2_flux(const ScalarField& f);
/// Mixed derivative d1^a d2^b f, applying ddx1 first.
ScalarField derivative(const ScalarField& f, int a, int b);

/// Rectangle rule in x1 times trapezoid rule in x2.
double integrate(const ScalarField& f);
/// sqrt of sum_{a+b<=k} integrate((d1^a d2^b f)^2); k in 0..3.
double sobolev_norm(const ScalarField& f, int k);
/// sqrt of sum_{a+b==k} integrate((d1^a d2^b f)^2); k in 0..3.
double sobolev_seminorm(const ScalarField& f, int k);
inline double l2_norm(const ScalarField& f) { return sobolev_norm(f, 0); }
double linf_norm(const ScalarField& f);

/// Zero x1 Fourier modes with 3k > n1 (2/3 rule). Returns `f` unchanged when it carries
/// no high-mode content above rounding, so the operation is idempotent bitwise.
ScalarField dealias(const ScalarField& f);

}  // namespace couette
