#include "mode_solver.hpp"

#include <string>

#include "couette/error.hpp"

namespace couette::detail {

namespace {
constexpr int kPhi = 0, kPsi1 = 1, kPsi2 = 2, kTheta = 3;
}

ModeBlocks assemble_mode(const BaseFlow& base, const PhysicalParams& params, const Grid& grid,
                         int mode, double coeff) {
    using cd = std::complex<double>;
    const int n = grid.n2;
    const double h = grid.dx2;
    // ddx1 drops the Nyquist mode, so its symbol is zero there.
    const double kx = (mode == grid.n1 / 2) ? 0.0 : static_cast<double>(mode);
    const cd ik(0.0, kx);
    const cd ik2 = ik * ik;
    const double inv_eps2 = 1.0 / (params.eps * params.eps);
    const double mu = params.mu, mu_l = params.mu + params.mu_prime;
    const double gm1 = params.gamma - 1.0;
    const double kappa = params.kappa;
    const auto& rho = base.rho_t;
    const auto& temp = base.temp_t;

    ModeBlocks b;
    b.lower.assign(n + 1, Block::Zero());
    b.diag.assign(n + 1, Block::Zero());
    b.upper.assign(n + 1, Block::Zero());

    // L is accumulated into (lower, diag, upper); the system is I - coeff * L.
    std::vector<Block> ll(n + 1, Block::Zero()), ld(n + 1, Block::Zero()), lu(n + 1, Block::Zero());

    const auto& u1 = base.u1_t;
    const auto& dtemp = base.dtemp_t;
    const double eps2 = params.eps * params.eps;

    // Continuity: -(d1(rho_t psi1 + u1_t phi) + D_flux(rho_t psi2)) on every node, walls
    // included.
    for (int j = 0; j <= n; ++j) {
        ld[j](kPhi, kPsi1) += -ik * rho(j);
        ld[j](kPhi, kPhi) += -ik * u1(j);
    }
    for (int j = 1; j < n; ++j) {
        lu[j](kPhi, kPsi2) += -rho(j + 1) / (2.0 * h);
        ll[j](kPhi, kPsi2) += rho(j - 1) / (2.0 * h);
    }
    lu[0](kPhi, kPsi2) += -rho(1) / h;
    ld[0](kPhi, kPsi2) += rho(0) / h;
    ld[n](kPhi, kPsi2) += -rho(n) / h;
    ll[n](kPhi, kPsi2) += rho(n - 1) / h;

    const double inv_h2 = 1.0 / (h * h);
    for (int j = 1; j < n; ++j) {
        const double r = 1.0 / rho(j);
        // Advection by the base shear and the lift-up coupling -psi2 d2 u_t.
        ld[j](kPsi1, kPsi1) += -ik * u1(j);
        ld[j](kPsi2, kPsi2) += -ik * u1(j);
        ld[j](kTheta, kTheta) += -ik * u1(j);
        ld[j](kPsi1, kPsi2) += -base.du1_t(j);
        ld[j](kTheta, kPsi2) += -dtemp(j);
        // Viscous heating linear in psi: eps^2 2 mu (d2 psi1 + d1 psi2) (gamma-1) / rho_t.
        lu[j](kTheta, kPsi1) += gm1 * eps2 * 2.0 * mu / (2.0 * h) * r;
        ll[j](kTheta, kPsi1) += -gm1 * eps2 * 2.0 * mu / (2.0 * h) * r;
        ld[j](kTheta, kPsi2) += gm1 * eps2 * 2.0 * mu * ik * r;
        // Momentum x1: [-eps^-2 d1 q + mu lap psi1 + (mu+mu') d1 div psi] / rho_t,
        // q = temp_t phi + rho_t theta.
        ld[j](kPsi1, kPhi) += -inv_eps2 * ik * temp(j) * r;
        ld[j](kPsi1, kTheta) += -inv_eps2 * ik * rho(j) * r;
        ld[j](kPsi1, kPsi1) += (mu * (ik2 - 2.0 * inv_h2) + mu_l * ik2) * r;
        lu[j](kPsi1, kPsi1) += mu * inv_h2 * r;
        ll[j](kPsi1, kPsi1) += mu * inv_h2 * r;
        lu[j](kPsi1, kPsi2) += mu_l * ik / (2.0 * h) * r;
        ll[j](kPsi1, kPsi2) += -mu_l * ik / (2.0 * h) * r;

        // Momentum x2: [-eps^-2 D q + mu lap psi2 + (mu+mu') (D d1 psi1 + D2 psi2)] / rho_t.
        lu[j](kPsi2, kPhi) += -inv_eps2 * temp(j + 1) / (2.0 * h) * r;
        ll[j](kPsi2, kPhi) += inv_eps2 * temp(j - 1) / (2.0 * h) * r;
        lu[j](kPsi2, kTheta) += -inv_eps2 * rho(j + 1) / (2.0 * h) * r;
        ll[j](kPsi2, kTheta) += inv_eps2 * rho(j - 1) / (2.0 * h) * r;
        ld[j](kPsi2, kPsi2) += (mu * ik2 - 2.0 * (mu + mu_l) * inv_h2) * r;
        lu[j](kPsi2, kPsi2) += (mu + mu_l) * inv_h2 * r;
        ll[j](kPsi2, kPsi2) += (mu + mu_l) * inv_h2 * r;
        lu[j](kPsi2, kPsi1) += mu_l * ik / (2.0 * h) * r;
        ll[j](kPsi2, kPsi1) += -mu_l * ik / (2.0 * h) * r;

        // Energy: (gamma-1) [-div psi + kappa lap theta] / rho_t  (rho_t temp_t = 1).
        ld[j](kTheta, kPsi1) += -gm1 * ik * r;
        lu[j](kTheta, kPsi2) += -gm1 / (2.0 * h) * r;
        ll[j](kTheta, kPsi2) += gm1 / (2.0 * h) * r;
        ld[j](kTheta, kTheta) += gm1 * kappa * (ik2 - 2.0 * inv_h2) * r;
        lu[j](kTheta, kTheta) += gm1 * kappa * inv_h2 * r;
        ll[j](kTheta, kTheta) += gm1 * kappa * inv_h2 * r;
    }

    for (int j = 0; j <= n; ++j) {
        b.diag[j] = Block::Identity() - coeff * ld[j];
        b.lower[j] = -coeff * ll[j];
        b.upper[j] = -coeff * lu[j];
    }
    // Dirichlet rows: psi1 = psi2 = theta = 0 on both walls.
    for (int j : {0, n}) {
        for (int row : {kPsi1, kPsi2, kTheta}) {
            b.diag[j].row(row).setZero();
            b.lower[j].row(row).setZero();
            b.upper[j].row(row).setZero();
            b.diag[j](row, row) = 1.0;
        }
    }
    return b;
}

BlockTridiagonal::BlockTridiagonal(const ModeBlocks& blocks) {
    const size_t n = blocks.diag.size();
    pivots_.reserve(n);
    multipliers_.assign(n, Block::Zero());
    upper_ = blocks.upper;
    Block pivot = blocks.diag[0];
    for (size_t j = 0; j < n; ++j) {
        if (j > 0) {
            multipliers_[j] = pivots_[j - 1].solve(Block::Identity());
            multipliers_[j] = blocks.lower[j] * multipliers_[j];
            pivot = blocks.diag[j] - multipliers_[j] * blocks.upper[j - 1];
        }
        pivots_.emplace_back(pivot);
        const double rc = pivots_.back().rcond();
        if (!(rc > 1e-14))
            throw SolveError("singular pivot block at x2 node " + std::to_string(j) +
                             " (rcond " + std::to_string(rc) + ")");
    }
}

void BlockTridiagonal::solve(std::vector<NodeVector>& rhs) const {
    const size_t n = rhs.size();
    for (size_t j = 1; j < n; ++j) rhs[j] -= multipliers_[j] * rhs[j - 1];
    rhs[n - 1] = pivots_[n - 1].solve(rhs[n - 1]);
    for (size_t j = n - 1; j-- > 0;) rhs[j] = pivots_[j].solve(rhs[j] - upper_[j] * rhs[j + 1]);
}

ModeSolver::ModeSolver(const BaseFlow& base, const PhysicalParams& params, const Grid& grid,
                       double coeff)
    : rows_(grid.rows()) {
    const int modes = grid.n1 / 2 + 1;
    modes_.reserve(modes);
    for (int m = 0; m < modes; ++m)
        modes_.emplace_back(assemble_mode(base, params, grid, m, coeff));
}

void ModeSolver::solve(Spectrum& phi, Spectrum& psi1, Spectrum& psi2, Spectrum& theta) const {
    std::vector<NodeVector> x(rows_);
    for (size_t m = 0; m < modes_.size(); ++m) {
        for (int j = 0; j < rows_; ++j)
            x[j] << phi(j, m), psi1(j, m), psi2(j, m), theta(j, m);
        modes_[m].solve(x);
        for (int j = 0; j < rows_; ++j) {
            phi(j, m) = x[j](0);
            psi1(j, m) = x[j](1);
            psi2(j, m) = x[j](2);
            theta(j, m) = x[j](3);
        }
    }
}

}  // namespace couette::detail
