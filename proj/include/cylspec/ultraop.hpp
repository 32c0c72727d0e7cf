#pragma once

#include "cylspec/banded.hpp"

namespace cylspec {

// Sparse operator matrices of the coefficient-space discretization.
// All are square truncations of the infinite operators; entries come from
// the closed-form recurrences, never from quadrature.

/// T_i -> U_i (= C^(1)_i) conversion: diag(1, 1/2, 1/2, ...), -1/2 on offset +2.
BandedMatrix build_conversion_01(int n);
/// U_i -> C^(2)_i conversion: diag 1/(k+1), -1/(k+3) on offset +2.
BandedMatrix build_conversion_12(int n);
/// T_i -> C^(2)_i conversion, C02 = C12 * C01 (exact banded product).
BandedMatrix build_conversion_02(int n);
/// Multiplication of a C^(2) coefficient vector by x (Gegenbauer recurrence).
BandedMatrix build_multiplication_r(int n);
/// d/dx: T coefficients -> U coefficients (entries 1..n-1 on offset +1).
BandedMatrix build_derivative_1(int n);
/// d^2/dx^2: T coefficients -> C^(2) coefficients (entry 2K at column K, offset +2).
BandedMatrix build_derivative_2(int n);

/// The operator bundle at one size, shared by the modal assemblies.
struct UltraOps {
    int size = 0;
    BandedMatrix c01, c12, c02, r, r2, d1, d2;

    static const UltraOps& get(int n);  // cached per size
};

/// r^2-weighted modal radial operator
///   L_w = R C12 D1 + R^2 D2 - w^2 C02,
/// i.e. r^2 (d_rr + r^-1 d_r - w^2 r^-2) mapped T -> C^(2).
BandedMatrix radial_modal_laplacian(int m, int wavenumber);

/// Sylvester quadruple A X B + C X D (B, D stored pre-transposed) for the
/// modal Helmholtz operator r^2 (1 - scale * Lap_w); scale = 0 degenerates
/// to the mass pair (R2, C02^T, 0, 0).
struct ModalOperator {
    int m = 0, n = 0;
    int wavenumber = 0;
    double scale = 0.0;
    BandedMatrix A, B, C, D;

    /// A X B + C X D applied to dense (complex) X.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const;
};

ModalOperator assemble_modal_helmholtz(int m, int n, int wavenumber, double scale);
/// Poisson quadruple: A = L_w, B = C02^T, C = R2, D = D2^T; right-hand
/// sides follow the convention F = R2 * (rhs coefficients) * C02^T.
ModalOperator assemble_modal_poisson(int m, int n, int wavenumber);

/// Dirichlet basis recombination phi_j = T_j - T_{j+2}: the n x (n-2)
/// map from recombined coefficients to T coefficients.
BandedMatrix dirichlet_recombination(int n);

/// P M S with P the leading-row projector: the (rows-2) x (cols-2)
/// operator acting on recombined coefficients.
BandedMatrix recombine(const BandedMatrix& M);

}  // namespace cylspec
