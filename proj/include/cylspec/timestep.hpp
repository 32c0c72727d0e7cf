#pragma once

#include <deque>
#include <functional>

#include "cylspec/solvers.hpp"

namespace cylspec {

/// Backwards differentiation formula of order b in the normalized form
///   (1 - kappa^(b) d_t) f(t+h) ~ delta^(b) f(t),
/// kappa^(b) = kappa_over_h * h and delta^(b) the weighted history sum.
struct BDFScheme {
    int order = 1;
    double kappa_over_h = 1.0;          // 1, 2/3, 6/11, 12/25
    std::vector<double> history_weights;  // sum to 1

    static BDFScheme of_order(int b);
    double kappa(double h) const { return kappa_over_h * h; }
};

/// Explicit extrapolation weights pairing with the implicit BDF family
/// (order 1: {1}; 2: {2,-1}; 3: {3,-3,1}; 4: {4,-6,4,-1}); weights sum to 1.
std::vector<double> imex_coefficients(int order);

/// delta^(b) applied to a history (newest first).
CoeffTensor bdf_rhs(const std::deque<CoeffTensor>& history, const BDFScheme& scheme);

/// Modal Helmholtz stepper shared by the heat and Navier-Stokes paths:
/// advances one coefficient tensor through
///   (1 - kappa^(b) * diffusivity * lap) X(t+h) = delta^(b) X + kappa^(b) * forcing
/// with homogeneous (or lifted) Dirichlet conditions, one ADI solve per
/// Fourier mode. Shift plans and factorizations are cached across steps.
class HelmholtzTensorStepper {
public:
    HelmholtzTensorStepper(const GridSpec& spec, double diffusivity, double h,
                           double adi_tol, BoundaryCondition bc = {});

    /// history: newest first, length >= scheme order. forcing may be null.
    CoeffTensor step(const std::deque<CoeffTensor>& history, const BDFScheme& scheme,
                     const CoeffTensor* forcing) const;

    double worst_residual() const { return worst_residual_; }
    const GridSpec& spec() const { return spec_; }

private:
    GridSpec spec_;
    double diffusivity_;
    double h_;
    BoundaryCondition bc_;
    ModalSolverCache cache_;
    mutable double worst_residual_ = 0.0;
};

enum class ForcingMode {
    lagged,  // g(t+h) ~ g(t) extrapolation
    exact    // evaluate the forcing callback at t+h
};

struct HeatConfig {
    GridSpec spec;
    double alpha = 1.0;
    double h = 1e-2;
    int order = 4;
    double adi_tol = kDefaultAdiTol;
    ForcingMode forcing_mode = ForcingMode::exact;
    BoundaryCondition bc;
    int output_every = 0;  // 0: keep only initial and final snapshots
};

using ForcingCallback = std::function<GridField(double time)>;

struct HeatState {
    std::deque<CoeffTensor> history;  // newest first, up to `order` entries
    double time = 0.0;
    int steps_taken = 0;
};

class HeatStepper {
public:
    HeatStepper(const HeatConfig& config, const GridField& initial);
    HeatStepper(const HeatConfig& config, CoeffTensor initial);

    /// One BDF step; the scheme order ramps 1 -> config.order during startup.
    void step(const CoeffTensor* forcing);
    void step_with_callback(const ForcingCallback& forcing);

    const CoeffTensor& current() const { return state_.history.front(); }
    const HeatState& state() const { return state_; }
    double time() const { return state_.time; }
    int current_order() const;
    const HeatConfig& config() const { return config_; }
    double worst_residual() const { return stepper_.worst_residual(); }

private:
    HeatConfig config_;
    HelmholtzTensorStepper stepper_;
    HeatState state_;
};

struct HeatRunResult {
    std::vector<GridField> snapshots;
    std::vector<double> snapshot_times;
    CoeffTensor final_coeffs;
    double final_time = 0.0;
    double worst_residual = 0.0;
};

/// Integrate `steps` BDF steps from `initial`; forcing may be empty (g = 0).
HeatRunResult heat_run(const HeatConfig& config, const GridField& initial,
                       const ForcingCallback& forcing, int steps);

}  // namespace cylspec
