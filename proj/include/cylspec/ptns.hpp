#pragma once

#include <deque>

#include "cylspec/calculus.hpp"
#include "cylspec/timestep.hpp"

namespace cylspec {

/// Toroidal/poloidal scalar pair: V = curl[lambda z^] + curl curl[gamma z^].
/// Gauge: both scalars vanish at r = +-1 (the Dirichlet gauge of the
/// horizontal Poisson solves).
struct PTScalars {
    CoeffTensor lambda;
    CoeffTensor gamma;

    PTScalars() = default;
    explicit PTScalars(const GridSpec& s) : lambda(s), gamma(s) {}
    PTScalars(CoeffTensor l, CoeffTensor g) : lambda(std::move(l)), gamma(std::move(g)) {}

    double max_abs() const { return std::max(lambda.max_abs(), gamma.max_abs()); }
    PTScalars& operator+=(const PTScalars& o);
    PTScalars& operator-=(const PTScalars& o);
    PTScalars& operator*=(double s);
    friend PTScalars operator-(PTScalars a, const PTScalars& b) { return a -= b; }
};

/// Cylindrical vector field in coefficient space.
struct VectorFieldCoeffs {
    CoeffTensor comp_r, comp_theta, comp_z;

    VectorFieldCoeffs() = default;
    explicit VectorFieldCoeffs(const GridSpec& s) : comp_r(s), comp_theta(s), comp_z(s) {}
    double max_abs() const {
        return std::max({comp_r.max_abs(), comp_theta.max_abs(), comp_z.max_abs()});
    }
};

/// Componentwise spectral curl in cylindrical coordinates.
VectorFieldCoeffs curl_vector(const VectorFieldCoeffs& v);
/// Spectral divergence.
CoeffTensor divergence(const VectorFieldCoeffs& v);

/// V = curl[lambda z^] + curl curl[gamma z^]; requires even m (1/r factors
/// are applied in value space). The result is divergence-free by
/// construction of the formulas.
VectorFieldCoeffs pt_synthesize(const PTScalars& s);

/// Recover the PT scalars of an incompressible field by two horizontal
/// Poisson solves: lap_h gamma = -V.z^, lap_h lambda = -z^.(curl V).
/// Throws NotIncompressibleError when the divergence exceeds the tolerance
/// (set check_divergence = false for fields divergence-free by construction).
PTScalars pt_decompose(const VectorFieldCoeffs& v, bool check_divergence = true,
                       double div_tol = 1e-8);

/// Scalars of W = curl V from the scalars of V: (lambda_W, gamma_W) =
/// (-lap gamma, lambda).
PTScalars curl_pt(const PTScalars& s);

/// Velocity scalars from vorticity scalars: lambda_v = gamma_w and
/// gamma_v = lambda_psi with lap lambda_psi = -lambda_w (vector potential
/// normal to the boundary: homogeneous Dirichlet rows on the psi solve).
PTScalars velocity_from_vorticity(const PTScalars& omega, const ModalSolverCache& cache);
PTScalars velocity_from_vorticity(const PTScalars& omega, double tol = kDefaultAdiTol);

/// PT scalars of curl(v x omega), the explicit nonlinear term: synthesize
/// both fields, pointwise cross product in value space, analyze, spectral
/// curl, decompose. O(N log N).
PTScalars nonlinear_term(const PTScalars& v, const PTScalars& omega,
                         bool dealias_two_thirds = false);

/// Max boundary residual of the PT matching equations
///   d_theta lambda + r d_r d_z gamma = r V^r,
///   d_theta d_z gamma - r d_r lambda = r V^theta
/// on the wall and caps (diagnostic only; the Dirichlet gauge satisfies
/// them to solver tolerance for incompressible inputs).
double pt_boundary_residual(const PTScalars& s, const VectorFieldCoeffs& v);

enum class NSBootstrap {
    ramp,      // BDF order 1 -> 2 -> ... -> b over the first steps
    substeps   // build the history with many small BDF2 steps (order studies)
};

struct NSConfig {
    GridSpec spec;
    double reynolds = 100.0;
    double h = 1e-2;
    int order = 4;
    double adi_tol = kDefaultAdiTol;
    bool disable_nonlinear = false;      // Stokes limit
    bool dealias_two_thirds = false;
    bool compute_gamma_psi = false;      // diagnostic-only extra Poisson solve
    NSBootstrap bootstrap = NSBootstrap::ramp;
};

struct NSState {
    std::deque<PTScalars> omega;      // newest first
    std::deque<PTScalars> nonlinear;  // newest first, aligned with omega times
    double time = 0.0;
    int steps_taken = 0;
    std::optional<CoeffTensor> gamma_psi;  // populated under the diagnostic flag
};

class NSStepper {
public:
    NSStepper(const NSConfig& config, PTScalars initial_omega);

    void step();
    /// Install a prebuilt history (bootstrap helpers).
    void seed(std::deque<PTScalars> omega_hist, std::deque<PTScalars> nonlinear_hist,
              double time, int steps_taken);
    const NSState& state() const { return state_; }
    const PTScalars& omega() const { return state_.omega.front(); }
    double time() const { return state_.time; }
    const NSConfig& config() const { return config_; }
    /// Velocity scalars at the current state (fresh psi solve).
    PTScalars velocity() const;

private:
    int current_order() const;
    PTScalars evaluate_nonlinear() const;

    NSConfig config_;
    HelmholtzTensorStepper stepper_;   // diffusivity 1/Re
    ModalSolverCache poisson_cache_;
    NSState state_;
};

struct NSRunResult {
    PTScalars final_omega;
    double final_time = 0.0;
    std::vector<PTScalars> snapshots;
    std::vector<double> snapshot_times;
};

NSRunResult ns_run(const NSConfig& config, const PTScalars& initial_omega, int steps,
                   int output_every = 0);

}  // namespace cylspec
