#include "couette/grid.hpp"

#include <cfloat>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "couette/error.hpp"
#include "fft.hpp"

namespace couette {

using detail::Spectrum;

Grid Grid::make(int n1, int n2) {
    if (n1 < 8 || n1 % 2 != 0)
        throw GridError("n1 must be even and >= 8, got " + std::to_string(n1));
    if (n2 < 8) throw GridError("n2 must be >= 8, got " + std::to_string(n2));
    Grid g;
    g.n1 = n1;
    g.n2 = n2;
    g.dx1 = 2.0 * std::numbers::pi / n1;
    g.dx2 = 1.0 / n2;
    return g;
}

double Grid::x1(int i) const { return 2.0 * std::numbers::pi * i / n1; }

double Grid::x2(int j) const { return static_cast<double>(j) / n2; }

Eigen::ArrayXd Grid::x2_nodes() const {
    Eigen::ArrayXd x(rows());
    for (int j = 0; j <= n2; ++j) x(j) = x2(j);
    return x;
}

Eigen::ArrayXd Grid::x2_weights() const {
    Eigen::ArrayXd w = Eigen::ArrayXd::Constant(rows(), dx2);
    w(0) = 0.5 * dx2;
    w(n2) = 0.5 * dx2;
    return w;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(const Grid& grid)
    : grid_(grid), values_(Array::Zero(grid.rows(), grid.n1)) {}

ScalarField::ScalarField(const Grid& grid, Array values) : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid_.rows() || values_.cols() != grid_.n1)
        throw GridError("field shape does not match grid");
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (int i = 0; i < grid.n1; ++i)
        for (int j = 0; j <= grid.n2; ++j) out(i, j) = f(grid.x1(i), grid.x2(j));
    return out;
}

ScalarField ScalarField::from_profile(const Grid& grid, const Eigen::ArrayXd& profile) {
    if (profile.size() != grid.rows()) throw GridError("profile length does not match grid");
    return ScalarField(grid, profile.replicate(1, grid.n1));
}

void ScalarField::set_walls_zero() {
    values_.row(0).setZero();
    values_.row(grid_.n2).setZero();
}

static void require_same_shape(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid() == b.grid())) throw GridError("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_shape(*this, o);
    values_ += o.values_;
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_shape(*this, o);
    values_ -= o.values_;
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    values_ *= s;
    return *this;
}

bool ScalarField::identical(const ScalarField& o) const {
    if (!(grid_ == o.grid_)) return false;
    if (values_.size() != o.values_.size()) return false;
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
        double a = values_.data()[k];
        double b = o.values_.data()[k];
        if (std::memcmp(&a, &b, sizeof(double)) != 0) return false;
    }
    return true;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    require_same_shape(a, b);
    return ScalarField(a.grid(), a.values() * b.values());
}

ScalarField scale_by_profile(const ScalarField& f, const Eigen::ArrayXd& profile) {
    if (profile.size() != f.grid().rows()) throw GridError("profile length does not match grid");
    return ScalarField(f.grid(), f.values().colwise() * profile);
}

// ---------------------------------------------------------------------------
// x1 operators

ScalarField ddx1(const ScalarField& f) {
    const Grid& g = f.grid();
    // Shifting every line by its first sample leaves the derivative unchanged and makes
    // x1-constant lines exactly zero before the transform.
    Eigen::ArrayXXd shifted = f.values().colwise() - f.values().col(0);
    Spectrum s;
    detail::forward_x1(shifted, s);
    const int nyquist = g.n1 / 2;
    for (int m = 0; m < s.cols(); ++m) {
        if (m == nyquist) {
            s.col(m).setZero();
        } else {
            s.col(m) *= std::complex<double>(0.0, static_cast<double>(m));
        }
    }
    Eigen::ArrayXXd out;
    detail::inverse_x1(s, out, g.n1);
    return ScalarField(g, std::move(out));
}

ScalarField dealias(const ScalarField& f) {
    const Grid& g = f.grid();
    Spectrum s;
    detail::forward_x1(f.values(), s);
    Spectrum high = Spectrum::Zero(s.rows(), s.cols());
    bool any_high = false;
    for (int m = 0; m < s.cols(); ++m) {
        if (3 * m > g.n1) {
            high.col(m) = s.col(m);
            any_high = true;
        }
    }
    if (!any_high) return f;
    Eigen::ArrayXXd high_part;
    detail::inverse_x1(high, high_part, g.n1);
    const double scale = f.values().abs().maxCoeff();
    if (high_part.abs().maxCoeff() <= 64.0 * DBL_EPSILON * scale) return f;
    return ScalarField(g, f.values() - high_part);
}

// ---------------------------------------------------------------------------
// x2 operators

ScalarField ddx2(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n2;
    const auto& v = f.values();
    Eigen::ArrayXXd out(v.rows(), v.cols());
    const double inv2h = 1.0 / (2.0 * g.dx2);
    out.middleRows(1, n - 1) = (v.bottomRows(n - 1) - v.topRows(n - 1)) * inv2h;
    // Written as differences so constants map to exactly zero.
    out.row(0) = (4.0 * (v.row(1) - v.row(0)) - (v.row(2) - v.row(0))) * inv2h;
    out.row(n) = -(4.0 * (v.row(n - 1) - v.row(n)) - (v.row(n - 2) - v.row(n))) * inv2h;
    return ScalarField(g, std::move(out));
}

ScalarField d2x2(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n2;
    const auto& v = f.values();
    Eigen::ArrayXXd out(v.rows(), v.cols());
    const double inv_h2 = 1.0 / (g.dx2 * g.dx2);
    out.middleRows(1, n - 1) =
        ((v.bottomRows(n - 1) - v.middleRows(1, n - 1)) -
         (v.middleRows(1, n - 1) - v.topRows(n - 1))) *
        inv_h2;
    // 2 f0 - 5 f1 + 4 f2 - f3
    out.row(0) = (-5.0 * (v.row(1) - v.row(0)) + 4.0 * (v.row(2) - v.row(0)) -
                  (v.row(3) - v.row(0))) *
                 inv_h2;
    out.row(n) = (-5.0 * (v.row(n - 1) - v.row(n)) + 4.0 * (v.row(n - 2) - v.row(n)) -
                  (v.row(n - 3) - v.row(n))) *
                 inv_h2;
    return ScalarField(g, std::move(out));
}

ScalarField ddx2_flux(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n2;
    const auto& v = f.values();
    Eigen::ArrayXXd out(v.rows(), v.cols());
    out.middleRows(1, n - 1) = (v.bottomRows(n - 1) - v.topRows(n - 1)) / (2.0 * g.dx2);
    out.row(0) = (v.row(1) - v.row(0)) / g.dx2;
    out.row(n) = (v.row(n) - v.row(n - 1)) / g.dx2;
    return ScalarField(g, std::move(out));
}

ScalarField derivative(const ScalarField& f, int a, int b) {
    ScalarField out = f;
    for (int k = 0; k < a; ++k) out = ddx1(out);
    for (int k = 0; k < b; ++k) out = ddx2(out);
    return out;
}

// ---------------------------------------------------------------------------
// Quadrature and norms

double integrate(const ScalarField& f) {
    const Grid& g = f.grid();
    const Eigen::ArrayXd w = g.x2_weights();
    return (f.values().colwise() * w).sum() * g.dx1;
}

double sobolev_seminorm(const ScalarField& f, int k) {
    if (k < 0 || k > 3) throw GridError("Sobolev order must be in 0..3, got " + std::to_string(k));
    double sum = 0.0;
    for (int a = k; a >= 0; --a) {
        ScalarField d = derivative(f, a, k - a);
        sum += integrate(d * d);
    }
    return std::sqrt(sum);
}

double sobolev_norm(const ScalarField& f, int k) {
    if (k < 0 || k > 3) throw GridError("Sobolev order must be in 0..3, got " + std::to_string(k));
    double sum = 0.0;
    for (int m = 0; m <= k; ++m) {
        double s = sobolev_seminorm(f, m);
        sum += s * s;
    }
    return std::sqrt(sum);
}

double linf_norm(const ScalarField& f) {
    if (f.values().size() == 0) return 0.0;
    return f.values().abs().maxCoeff();
}

}  // namespace couette
