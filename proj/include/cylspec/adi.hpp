#pragma once

#include <optional>

#include "cylspec/banded.hpp"

namespace cylspec {

/// Sparse Sylvester equation A X B + C X D = E; B and D are stored already
/// transposed, i.e. they right-multiply X as written.
struct SylvesterProblem {
    BandedMatrix A, B, C, D;
    Eigen::MatrixXcd E;

    void check_dimensions() const;
};

/// Real spectral intervals and the optimal shift sequences derived from them.
struct ShiftPlan {
    double a = 0, b = 0;  // enclosure of spec(C^-1 A)
    double c = 0, d = 0;  // enclosure of spec(-D B^-1)
    double gamma_cr = 0;  // cross ratio |c-a||d-b| / (|c-b||d-a|)
    double alpha_z = 0;   // Zolotarev alpha = -1 + 2 gamma + 2 sqrt(gamma^2-gamma)
    double modulus = 0;   // k = sqrt(1 - 1/alpha^2)
    double tol = 0;
    int J = 0;
    std::vector<double> u, v;
};

/// Certified enclosure of the (real) spectrum of C^-1 A via a dense
/// generalized eigensolve. Throws if C is singular or the spectrum has a
/// significant imaginary part.
std::pair<double, double> spectral_bounds(const BandedMatrix& A, const BandedMatrix& C);

/// Looser Gershgorin enclosure of spec(C^-1 A) (columns of C^-1 A formed by
/// banded solves); fallback for sizes where the dense eigensolve is too
/// expensive. A loose enclosure only increases the iteration count.
std::pair<double, double> spectral_bounds_gershgorin(const BandedMatrix& A,
                                                     const BandedMatrix& C);

/// Optimal shifts for the intervals [a,b] and [c,d] (must be disjoint):
/// J = ceil(log(16 gamma) log(4/tol) / pi^2), u_j/v_j from the elliptic
/// function formulas through the Moebius map {-alpha,-1,1,alpha} -> {a,b,c,d}.
ShiftPlan compute_shifts(std::pair<double, double> bounds_ca,
                         std::pair<double, double> bounds_db, double tol);

struct AdiResult {
    Eigen::MatrixXcd X;
    std::vector<double> residual_history;  // relative Frobenius, recorded at checks
    int iterations = 0;
    bool converged = true;
};

/// Precomputed factorizations for repeated ADI solves against the same
/// quadruple (the shifted operators do not depend on the right-hand side).
class AdiWorkspace {
public:
    AdiWorkspace() = default;
    AdiWorkspace(const SylvesterProblem& shape, const ShiftPlan& plan);

    AdiResult solve(const Eigen::MatrixXcd& e) const;
    const ShiftPlan& plan() const { return plan_; }

private:
    ShiftPlan plan_;
    BandedMatrix A_, B_, C_, D_;
    BandedLU luBt_;                      // B^T
    BandedLU luC_;                       // C
    std::vector<BandedLU> lu_shiftA_;    // u_j C - A
    std::vector<BandedLU> lu_shiftBt_;   // (v_j B + D)^T
};

/// One-call ADI solve (Algorithm: X_0 = 0, alternate the shifted half
/// steps for J iterations, extend up to 4J if the residual check fails).
Eigen::MatrixXcd adi_solve(const SylvesterProblem& problem, const ShiftPlan& plan);
AdiResult adi_solve_detailed(const SylvesterProblem& problem, const ShiftPlan& plan);

/// Dense Kronecker oracle: solves (B^T (x) A + D^T (x) C) vec X = vec E by
/// dense LU. Test/reference path only; m*n <= 4096.
Eigen::MatrixXcd dense_sylvester_oracle(const SylvesterProblem& problem);

/// Relative Frobenius residual ||A X B + C X D - E||_F / ||E||_F.
double sylvester_residual(const SylvesterProblem& problem, const Eigen::MatrixXcd& x);

}  // namespace cylspec
