// Per-Fourier-mode block-tridiagonal solve of (I - c L) x = r.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "couette/baseflow.hpp"
#include "couette/grid.hpp"
#include "couette/params.hpp"
#include "fft.hpp"

namespace couette::detail {

using Block = Eigen::Matrix4cd;
using NodeVector = Eigen::Vector4cd;

/// Banded blocks of I - c L for one x1 mode. Unknowns per x2 node: (phi, psi1, psi2, theta).
struct ModeBlocks {
    std::vector<Block> lower;  ///< couples node j to j-1 (lower[0] unused)
    std::vector<Block> diag;
    std::vector<Block> upper;  ///< couples node j to j+1 (upper[n2] unused)
};

/// Assembles I - coeff * L for x1 wavenumber `mode` (0 ... n1/2). psi/theta wall rows are
/// identity rows.
ModeBlocks assemble_mode(const BaseFlow& base, const PhysicalParams& params, const Grid& grid,
                         int mode, double coeff);

/// Block Thomas factorisation of one mode's system.
class BlockTridiagonal {
public:
    explicit BlockTridiagonal(const ModeBlocks& blocks);
    void solve(std::vector<NodeVector>& rhs) const;

private:
    std::vector<Eigen::PartialPivLU<Block>> pivots_;
    std::vector<Block> multipliers_;
    std::vector<Block> upper_;
};

class ModeSolver {
public:
    ModeSolver(const BaseFlow& base, const PhysicalParams& params, const Grid& grid, double coeff);
    /// Spectra of (phi, psi1, psi2, theta), solved in place.
    void solve(Spectrum& phi, Spectrum& psi1, Spectrum& psi2, Spectrum& theta) const;

private:
    int rows_;
    std::vector<BlockTridiagonal> modes_;
};

}  // namespace couette::detail
