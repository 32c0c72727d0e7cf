#include "cylspec/timestep.hpp"

namespace cylspec {

BDFScheme BDFScheme::of_order(int b) {
    BDFScheme s;
    s.order = b;
    switch (b) {
        case 1:
            s.kappa_over_h = 1.0;
            s.history_weights = {1.0};
            break;
        case 2:
            s.kappa_over_h = 2.0 / 3.0;
            s.history_weights = {4.0 / 3.0, -1.0 / 3.0};
            break;
        case 3:
            s.kappa_over_h = 6.0 / 11.0;
            s.history_weights = {18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0};
            break;
        case 4:
            s.kappa_over_h = 12.0 / 25.0;
            s.history_weights = {48.0 / 25.0, -36.0 / 25.0, 16.0 / 25.0, -3.0 / 25.0};
            break;
        default:
            throw DomainError("BDFScheme: order must be in {1,2,3,4}");
    }
    return s;
}

std::vector<double> imex_coefficients(int order) {
    switch (order) {
        case 1: return {1.0};
        case 2: return {2.0, -1.0};
        case 3: return {3.0, -3.0, 1.0};
        case 4: return {4.0, -6.0, 4.0, -1.0};
        default: throw DomainError("imex_coefficients: order must be in {1,2,3,4}");
    }
}

CoeffTensor bdf_rhs(const std::deque<CoeffTensor>& history, const BDFScheme& scheme) {
    if (int(history.size()) < scheme.order)
        throw DomainError("bdf_rhs: insufficient history for the requested order");
    CoeffTensor out(history.front().spec);
    for (int i = 0; i < scheme.order; ++i) {
        const double w = scheme.history_weights[size_t(i)];
        const CoeffTensor& h = history[size_t(i)];
        for (size_t t = 0; t < out.data.size(); ++t) out.data[t] += w * h.data[t];
    }
    return out;
}

HelmholtzTensorStepper::HelmholtzTensorStepper(const GridSpec& spec, double diffusivity,
                                               double h, double adi_tol,
                                               BoundaryCondition bc)
    : spec_(spec), diffusivity_(diffusivity), h_(h), bc_(std::move(bc)),
      cache_(spec.m, spec.n, adi_tol) {
    spec.validate();
}

CoeffTensor HelmholtzTensorStepper::step(const std::deque<CoeffTensor>& history,
                                         const BDFScheme& scheme,
                                         const CoeffTensor* forcing) const {
    const double kappa = scheme.kappa(h_);
    const double scale = kappa * diffusivity_;

    CoeffTensor rhs = bdf_rhs(history, scheme);
    if (forcing) {
        if (!(forcing->spec == spec_))
            throw DomainError("HelmholtzTensorStepper: forcing spec mismatch");
        for (size_t t = 0; t < rhs.data.size(); ++t)
            rhs.data[t] += kappa * forcing->data[t];
    }
    parity_project_in_place(rhs);

    const UltraOps& rops = UltraOps::get(spec_.m);
    const UltraOps& zops = UltraOps::get(spec_.n);
    const BandedMatrix c02t = zops.c02.transposed();

    CoeffTensor out(spec_);
    for (int l = 0; l < spec_.p; ++l) {
        const int w = spec_.wavenumber(l);
        const ModalSolver& solver = cache_.get(w, scale, /*poisson=*/false);
        Eigen::MatrixXcd fl = rhs.slice(l);
        Eigen::MatrixXcd lift;
        if (bc_.kind == BoundaryCondition::Kind::dirichlet_lifted && bc_.lift) {
            if (l < bc_.lift->spec.p) lift = bc_.lift->slice(l);
        }
        Eigen::MatrixXcd ff = c02t.apply_right(rops.r2.apply_left(fl));
        if (lift.size() > 0) ff -= solver.raw().apply(lift);
        Eigen::MatrixXcd x;
        try {
            x = solver.solve(ff);
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError(
                "modal solve failed for Fourier slice " + std::to_string(l) + ": " +
                    e.what(),
                e.residual_history);
        }
        if (lift.size() > 0) x += lift;
        out.slice(l) = x;
        worst_residual_ = std::max(worst_residual_, solver.last_residual());
    }
    parity_project_in_place(out);
    if (!out.all_finite())
        throw NumericalError("HelmholtzTensorStepper: non-finite state");
    return out;
}

HeatStepper::HeatStepper(const HeatConfig& config, CoeffTensor initial)
    : config_(config),
      stepper_(config.spec, config.alpha, config.h, config.adi_tol, config.bc) {
    if (!(initial.spec == config.spec))
        throw DomainError("HeatStepper: initial data spec mismatch");
    parity_project_in_place(initial);
    state_.history.push_front(std::move(initial));
}

HeatStepper::HeatStepper(const HeatConfig& config, const GridField& initial)
    : HeatStepper(config, analyze(initial)) {}

int HeatStepper::current_order() const {
    return std::min(config_.order, state_.steps_taken + 1);
}

void HeatStepper::step(const CoeffTensor* forcing) {
    const BDFScheme scheme = BDFScheme::of_order(current_order());
    CoeffTensor next = stepper_.step(state_.history, scheme, forcing);
    state_.history.push_front(std::move(next));
    while (int(state_.history.size()) > config_.order) state_.history.pop_back();
    state_.time += config_.h;
    ++state_.steps_taken;
}

void HeatStepper::step_with_callback(const ForcingCallback& forcing) {
    if (!forcing) {
        step(nullptr);
        return;
    }
    const double t_eval =
        config_.forcing_mode == ForcingMode::exact ? state_.time + config_.h : state_.time;
    CoeffTensor g = analyze(forcing(t_eval));
    step(&g);
}

HeatRunResult heat_run(const HeatConfig& config, const GridField& initial,
                       const ForcingCallback& forcing, int steps) {
    if (steps < 0) throw DomainError("heat_run: steps must be nonnegative");
    HeatStepper stepper(config, initial);
    HeatRunResult result;
    result.snapshots.push_back(initial);
    result.snapshot_times.push_back(0.0);
    for (int s = 0; s < steps; ++s) {
        stepper.step_with_callback(forcing);
        const bool cadence =
            config.output_every > 0 && (s + 1) % config.output_every == 0;
        if (cadence && s + 1 < steps) {
            result.snapshots.push_back(synthesize(stepper.current()));
            result.snapshot_times.push_back(stepper.time());
        }
    }
    if (steps > 0) {
        result.snapshots.push_back(synthesize(stepper.current()));
        result.snapshot_times.push_back(stepper.time());
    }
    result.final_coeffs = stepper.current();
    result.final_time = stepper.time();
    result.worst_residual = stepper.worst_residual();
    return result;
}

}  // namespace cylspec
