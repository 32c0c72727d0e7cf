#pragma once

#include "cylspec/coeffs.hpp"
#include "cylspec/transform.hpp"

namespace cylspec {

// Coefficient-space calculus on CCF tensors. Chebyshev derivatives use the
// O(length) backward recurrence; theta derivatives are diagonal (the
// unpaired Nyquist mode is annihilated, its sine partner not being
// representable on the grid); 1/r factors are applied pointwise in value
// space, which is exact at grid points because the doubled grid carries no
// r = 0 node for even m.

CoeffTensor derivative_r(const CoeffTensor& f);
CoeffTensor derivative_z(const CoeffTensor& f);
CoeffTensor derivative_theta(const CoeffTensor& f);

/// Multiply by r in coefficient space: x T_j = (T_{j-1} + T_{j+1})/2.
CoeffTensor multiply_r(const CoeffTensor& f);

/// Divide by r pointwise in value space (requires even m).
CoeffTensor divide_r(const CoeffTensor& f);

/// Horizontal Laplacian d_rr + r^-1 d_r + r^-2 d_theta,theta.
CoeffTensor horizontal_laplacian(const CoeffTensor& f);

/// Full cylindrical Laplacian.
CoeffTensor laplacian(const CoeffTensor& f);

}  // namespace cylspec
