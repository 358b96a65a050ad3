// Batched real FFT along x1 for every x2 line of a field.
#pragma once

#include <Eigen/Core>

namespace couette::detail {

/// Spectrum layout: (n2+1) x (n1/2+1), entry (j, m) is mode m of line j.
using Spectrum = Eigen::ArrayXXcd;

/// Unnormalised forward transform.
void forward_x1(const Eigen::ArrayXXd& values, Spectrum& spectrum);
/// Inverse transform including the 1/n1 factor.
void inverse_x1(const Spectrum& spectrum, Eigen::ArrayXXd& values, int n1);

}  // namespace couette::detail
