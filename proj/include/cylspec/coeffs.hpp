#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cylspec/grid.hpp"

namespace cylspec {

using Complex = std::complex<double>;

/// Interpolation coefficients on the doubled CCF grid: p Fourier slices,
/// slice l an m x n (column-major) matrix of Chebyshev(r) x Chebyshev(z)
/// coefficients multiplying T_j(r) T_k(z) e^{i (l - p/2) theta}.
struct CoeffTensor {
    GridSpec spec;
    std::vector<Complex> data;

    CoeffTensor() = default;
    explicit CoeffTensor(const GridSpec& s) : spec(s), data(size_t(s.total_points()), Complex(0)) {}

    Eigen::Map<Eigen::MatrixXcd> slice(int l) {
        return {data.data() + size_t(l) * spec.m * spec.n, spec.m, spec.n};
    }
    Eigen::Map<const Eigen::MatrixXcd> slice(int l) const {
        return {data.data() + size_t(l) * spec.m * spec.n, spec.m, spec.n};
    }
    Complex& at(int j, int k, int l) {
        return data[(size_t(l) * spec.n + size_t(k)) * spec.m + size_t(j)];
    }
    Complex at(int j, int k, int l) const {
        return data[(size_t(l) * spec.n + size_t(k)) * spec.m + size_t(j)];
    }

    double max_abs() const;
    bool all_finite() const;

    CoeffTensor& operator+=(const CoeffTensor& o);
    CoeffTensor& operator-=(const CoeffTensor& o);
    CoeffTensor& operator*=(Complex s);
    friend CoeffTensor operator+(CoeffTensor a, const CoeffTensor& b) { return a += b; }
    friend CoeffTensor operator-(CoeffTensor a, const CoeffTensor& b) { return a -= b; }
    friend CoeffTensor operator*(Complex s, CoeffTensor a) { return a *= s; }
};

/// Largest deviation from the Hermitian pairing about l = p/2 that holds
/// for coefficients of real-valued fields.
double hermitian_symmetry_error(const CoeffTensor& t);

enum class Parity {
    scalar,         // keep j + wavenumber even (physical scalars, z-components)
    azimuthal_flip  // keep j + wavenumber odd (r/theta vector components)
};

/// Zeroes every coefficient whose radial-degree/wavenumber parity violates
/// the doubled-grid identification; all other coefficients are unchanged.
CoeffTensor parity_project(const CoeffTensor& coeffs, Parity parity = Parity::scalar);
void parity_project_in_place(CoeffTensor& coeffs, Parity parity = Parity::scalar);

}  // namespace cylspec
