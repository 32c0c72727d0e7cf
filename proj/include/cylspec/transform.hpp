#pragma once

#include "cylspec/coeffs.hpp"
#include "cylspec/grid.hpp"

namespace cylspec {

/// Value -> coefficient transform (DCT-I in r and z, DFT in theta).
///
/// Normalization: the returned coefficients are exactly the Chebyshev x
/// Chebyshev x Fourier interpolation coefficients, i.e. evaluating
///   sum_{j,k,l} c(j,k,l) T_j(r) T_k(z) e^{i (l - p/2) theta}
/// at the grid points reproduces the samples. Endpoint samples carry
/// weight 1/2 inside the DCT-I and the first/last Chebyshev coefficients
/// are halved accordingly; slice l carries wavenumber l - p/2 (negative
/// wavenumbers at low l).
CoeffTensor analyze(const GridField& field);

/// Coefficient -> value transform; inverse of analyze for real fields
/// (the imaginary part of the synthesis, which vanishes for Hermitian
/// coefficient tensors, is discarded).
GridField synthesize(const CoeffTensor& coeffs);

/// Evaluate the CCF interpolant at an arbitrary point (r, z, theta),
/// Clenshaw in both Chebyshev directions.
Complex evaluate_at(const CoeffTensor& coeffs, double r, double z, double theta);

/// Sample a function f(r, z, theta) on the grid.
template <typename F>
GridField sample(const GridSpec& spec, F&& f) {
    GridField out(spec);
    const auto r = chebyshev_points(spec.m);
    const auto z = chebyshev_points(spec.n);
    const auto th = fourier_points(spec.p);
    for (int l = 0; l < spec.p; ++l)
        for (int k = 0; k < spec.n; ++k)
            for (int j = 0; j < spec.m; ++j) out.at(j, k, l) = f(r[j], z[k], th[l]);
    return out;
}

}  // namespace cylspec
