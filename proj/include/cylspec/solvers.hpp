#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>

#include "cylspec/adi.hpp"
#include "cylspec/transform.hpp"
#include "cylspec/ultraop.hpp"

namespace cylspec {

/// Dirichlet data on the cylinder walls (r = +-1 on the doubled grid is the
/// one physical wall) and caps (z = +-1). Inhomogeneous data rides on a
/// low-degree lifting interpolant: solution = lift + homogeneous correction.
struct BoundaryCondition {
    enum class Kind { dirichlet_homogeneous, dirichlet_lifted };
    Kind kind = Kind::dirichlet_homogeneous;
    std::optional<CoeffTensor> lift;

    static BoundaryCondition homogeneous() { return {}; }
    static BoundaryCondition lifted(CoeffTensor lift_tensor) {
        BoundaryCondition bc;
        bc.kind = Kind::dirichlet_lifted;
        bc.lift = std::move(lift_tensor);
        return bc;
    }
};

/// One Fourier mode's Helmholtz/Poisson solver: the Dirichlet-recombined
/// Sylvester quadruple, its shift plan, and cached factorizations. Reused
/// across right-hand sides (time steps).
class ModalSolver {
public:
    /// scale = kappa^(b)*alpha (Helmholtz); scale = 0 gives the mass solve;
    /// poisson = true assembles the Poisson quadruple instead.
    ModalSolver(int m, int n, int wavenumber, double scale, bool poisson, double tol);

    /// Solve for the m x n coefficient matrix given the full (untruncated)
    /// right-hand side F = A X B + C X D in C2 x C2 space.
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& f_full) const;

    const ModalOperator& raw() const { return op_; }
    const SylvesterProblem& reduced_shape() const { return shape_; }
    const ShiftPlan* plan() const { return plan_ ? &*plan_ : nullptr; }
    double last_residual() const { return last_residual_; }

private:
    ModalOperator op_;
    SylvesterProblem shape_;           // recombined quadruple (E unused)
    BandedMatrix recomb_r_, recomb_z_; // phi -> T maps
    std::optional<ShiftPlan> plan_;
    std::unique_ptr<AdiWorkspace> adi_;
    // direct path for the scale = 0 mass solve (no ADI applicable, C = 0)
    std::unique_ptr<BandedLU> mass_lu_r_, mass_lu_zt_;
    mutable double last_residual_ = 0.0;
};

/// Per-(m,n,tol) cache of ModalSolver instances keyed by (wavenumber^2,
/// scale, poisson); the solvers are immutable once built and shared.
class ModalSolverCache {
public:
    ModalSolverCache(int m, int n, double tol) : m_(m), n_(n), tol_(tol) {}
    const ModalSolver& get(int wavenumber, double scale, bool poisson) const;
    int m() const { return m_; }
    int n() const { return n_; }
    double tol() const { return tol_; }

private:
    int m_, n_;
    double tol_;
    mutable std::map<std::tuple<int, double, bool>, std::unique_ptr<ModalSolver>> cache_;
    mutable std::mutex mutex_;
};

/// Solve one modal Helmholtz problem r^2(1 - scale lap_w) u = r^2 g with
/// Dirichlet boundary conditions; F is the assembled right-hand side
/// R2 (...) C02^T. Returns the m x n coefficient matrix of u.
Eigen::MatrixXcd solve_modal_helmholtz(const ModalOperator& op, const Eigen::MatrixXcd& f,
                                       const BoundaryCondition& bc, double tol);

/// 3-D Poisson solve lap u = f with Dirichlet conditions; one modal
/// Sylvester solve per Fourier slice.
CoeffTensor solve_poisson_3d(const CoeffTensor& f, const BoundaryCondition& bc,
                             double tol = 1e-12);
CoeffTensor solve_poisson_3d(const CoeffTensor& f, const BoundaryCondition& bc,
                             const ModalSolverCache& cache);

/// Horizontal Poisson lap_h u = rhs: the z-degree columns decouple, each
/// mode solves a 1-D banded system (R C12 D1 + R^2 D2 - w^2 C02) u = R^2 C02 rhs
/// with u(+-1) = 0. O(N) once the per-mode factorizations are cached.
CoeffTensor solve_horizontal_poisson(const CoeffTensor& rhs);

/// Default ADI tolerance used by the high-level solvers.
inline constexpr double kDefaultAdiTol = 1e-12;

}  // namespace cylspec
