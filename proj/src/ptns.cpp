#include "cylspec/ptns.hpp"

#include <cmath>

namespace cylspec {

PTScalars& PTScalars::operator+=(const PTScalars& o) {
    lambda += o.lambda;
    gamma += o.gamma;
    return *this;
}

PTScalars& PTScalars::operator-=(const PTScalars& o) {
    lambda -= o.lambda;
    gamma -= o.gamma;
    return *this;
}

PTScalars& PTScalars::operator*=(double s) {
    lambda *= Complex(s);
    gamma *= Complex(s);
    return *this;
}

VectorFieldCoeffs curl_vector(const VectorFieldCoeffs& v) {
    VectorFieldCoeffs out(v.comp_r.spec);
    out.comp_r = divide_r(derivative_theta(v.comp_z)) - derivative_z(v.comp_theta);
    out.comp_theta = derivative_z(v.comp_r) - derivative_r(v.comp_z);
    CoeffTensor zpart = derivative_r(v.comp_theta);
    zpart += divide_r(v.comp_theta - derivative_theta(v.comp_r));
    out.comp_z = zpart;
    return out;
}

CoeffTensor divergence(const VectorFieldCoeffs& v) {
    CoeffTensor out = derivative_r(v.comp_r);
    out += divide_r(v.comp_r + derivative_theta(v.comp_theta));
    out += derivative_z(v.comp_z);
    return out;
}

VectorFieldCoeffs pt_synthesize(const PTScalars& s) {
    const GridSpec& spec = s.lambda.spec;
    if (spec.m % 2 != 0)
        throw DomainError("pt_synthesize: even m required (no r = 0 grid node)");
    VectorFieldCoeffs v(spec);
    const CoeffTensor dz_gamma = derivative_z(s.gamma);
    v.comp_r = divide_r(derivative_theta(s.lambda)) + derivative_r(dz_gamma);
    v.comp_theta = divide_r(derivative_theta(dz_gamma)) - derivative_r(s.lambda);
    CoeffTensor hl = horizontal_laplacian(s.gamma);
    hl *= Complex(-1.0);
    v.comp_z = hl;
    parity_project_in_place(v.comp_r, Parity::azimuthal_flip);
    parity_project_in_place(v.comp_theta, Parity::azimuthal_flip);
    parity_project_in_place(v.comp_z, Parity::scalar);
    return v;
}

PTScalars pt_decompose(const VectorFieldCoeffs& v, bool check_divergence, double div_tol) {
    if (check_divergence) {
        const double div = divergence(v).max_abs();
        const double scale = std::max(1.0, v.max_abs());
        if (div > div_tol * scale)
            throw NotIncompressibleError(
                "pt_decompose: field has divergence " + std::to_string(div), div);
    }
    CoeffTensor vz = v.comp_z;
    vz *= Complex(-1.0);
    CoeffTensor gamma = solve_horizontal_poisson(vz);

    // z^ . curl V = d_r V_theta + V_theta / r - (d_theta V_r) / r
    CoeffTensor curl_z = derivative_r(v.comp_theta);
    curl_z += divide_r(v.comp_theta - derivative_theta(v.comp_r));
    curl_z *= Complex(-1.0);
    CoeffTensor lambda = solve_horizontal_poisson(curl_z);
    return {std::move(lambda), std::move(gamma)};
}

PTScalars curl_pt(const PTScalars& s) {
    CoeffTensor lam = laplacian(s.gamma);
    lam *= Complex(-1.0);
    return {std::move(lam), s.lambda};
}

PTScalars velocity_from_vorticity(const PTScalars& omega, const ModalSolverCache& cache) {
    CoeffTensor rhs = omega.lambda;
    rhs *= Complex(-1.0);
    CoeffTensor lambda_psi =
        solve_poisson_3d(rhs, BoundaryCondition::homogeneous(), cache);
    return {omega.gamma, std::move(lambda_psi)};
}

PTScalars velocity_from_vorticity(const PTScalars& omega, double tol) {
    ModalSolverCache cache(omega.lambda.spec.m, omega.lambda.spec.n, tol);
    return velocity_from_vorticity(omega, cache);
}

namespace {

void dealias_tensor(CoeffTensor& t) {
    const GridSpec& s = t.spec;
    const int jmax = 2 * s.m / 3, kmax = 2 * s.n / 3;
    const int half = s.p / 2, wmax = 2 * half / 3;
    for (int l = 0; l < s.p; ++l) {
        const int w = std::abs(s.wavenumber(l));
        for (int k = 0; k < s.n; ++k)
            for (int j = 0; j < s.m; ++j)
                if (j >= jmax || k >= kmax || w >= wmax) t.at(j, k, l) = Complex(0);
    }
}

}  // namespace

PTScalars nonlinear_term(const PTScalars& v, const PTScalars& omega,
                         bool dealias_two_thirds) {
    const GridSpec& spec = v.lambda.spec;
    if (spec.m % 2 != 0) throw DomainError("nonlinear_term: even m required");
    const VectorFieldCoeffs vc = pt_synthesize(v);
    const VectorFieldCoeffs wc = pt_synthesize(omega);

    const GridField vr = synthesize(vc.comp_r), vt = synthesize(vc.comp_theta),
                    vz = synthesize(vc.comp_z);
    const GridField wr = synthesize(wc.comp_r), wt = synthesize(wc.comp_theta),
                    wz = synthesize(wc.comp_z);

    GridField ar(spec), at(spec), az(spec);
    for (size_t i = 0; i < ar.values.size(); ++i) {
        // v x omega in cylindrical components
        ar.values[i] = vt.values[i] * wz.values[i] - vz.values[i] * wt.values[i];
        at.values[i] = vz.values[i] * wr.values[i] - vr.values[i] * wz.values[i];
        az.values[i] = vr.values[i] * wt.values[i] - vt.values[i] * wr.values[i];
    }
    VectorFieldCoeffs a;
    a.comp_r = analyze(ar);
    a.comp_theta = analyze(at);
    a.comp_z = analyze(az);
    parity_project_in_place(a.comp_r, Parity::azimuthal_flip);
    parity_project_in_place(a.comp_theta, Parity::azimuthal_flip);
    parity_project_in_place(a.comp_z, Parity::scalar);
    if (dealias_two_thirds) {
        dealias_tensor(a.comp_r);
        dealias_tensor(a.comp_theta);
        dealias_tensor(a.comp_z);
    }

    const VectorFieldCoeffs curl_a = curl_vector(a);
    // curl output is divergence-free analytically; skip the finite-precision check
    return pt_decompose(curl_a, /*check_divergence=*/false);
}

double pt_boundary_residual(const PTScalars& s, const VectorFieldCoeffs& v) {
    const GridSpec& spec = s.lambda.spec;
    const CoeffTensor dth_lambda = derivative_theta(s.lambda);
    const CoeffTensor dr_lambda = derivative_r(s.lambda);
    const CoeffTensor drz_gamma = derivative_r(derivative_z(s.gamma));
    const CoeffTensor dthz_gamma = derivative_theta(derivative_z(s.gamma));

    const auto rs = chebyshev_points(spec.m);
    const auto zs = chebyshev_points(spec.n);
    const auto ths = fourier_points(spec.p);
    double worst = 0.0;
    auto check_point = [&](double r, double z, double th) {
        const Complex e1 = evaluate_at(dth_lambda, r, z, th) +
                           r * evaluate_at(drz_gamma, r, z, th) -
                           r * evaluate_at(v.comp_r, r, z, th);
        const Complex e2 = evaluate_at(dthz_gamma, r, z, th) -
                           r * evaluate_at(dr_lambda, r, z, th) -
                           r * evaluate_at(v.comp_theta, r, z, th);
        worst = std::max({worst, std::abs(e1), std::abs(e2)});
    };
    for (double th : ths) {
        for (double z : zs) check_point(1.0, z, th);
        for (double r : rs) {
            check_point(r, 1.0, th);
            check_point(r, -1.0, th);
        }
    }
    return worst;
}

NSStepper::NSStepper(const NSConfig& config, PTScalars initial_omega)
    : config_(config),
      stepper_(config.spec, 1.0 / config.reynolds, config.h, config.adi_tol),
      poisson_cache_(config.spec.m, config.spec.n, config.adi_tol) {
    if (!(initial_omega.lambda.spec == config.spec) ||
        !(initial_omega.gamma.spec == config.spec))
        throw DomainError("NSStepper: initial vorticity spec mismatch");
    if (config.spec.m % 2 != 0)
        throw DomainError("NSStepper: even m required for the nonlinear pipeline");
    parity_project_in_place(initial_omega.lambda);
    parity_project_in_place(initial_omega.gamma);
    state_.omega.push_front(std::move(initial_omega));
}

void NSStepper::seed(std::deque<PTScalars> omega_hist, std::deque<PTScalars> nonlinear_hist,
                     double time, int steps_taken) {
    if (omega_hist.empty()) throw DomainError("NSStepper::seed: empty history");
    state_.omega = std::move(omega_hist);
    state_.nonlinear = std::move(nonlinear_hist);
    state_.time = time;
    state_.steps_taken = steps_taken;
}

int NSStepper::current_order() const {
    return std::min(config_.order, state_.steps_taken + 1);
}

PTScalars NSStepper::velocity() const {
    return velocity_from_vorticity(state_.omega.front(), poisson_cache_);
}

PTScalars NSStepper::evaluate_nonlinear() const {
    const PTScalars v = velocity();
    return nonlinear_term(v, state_.omega.front(), config_.dealias_two_thirds);
}

void NSStepper::step() {
    const int b = current_order();
    const BDFScheme scheme = BDFScheme::of_order(b);

    // histories of the lambda and gamma scalars, newest first
    std::deque<CoeffTensor> lam_hist, gam_hist;
    for (const PTScalars& s : state_.omega) {
        lam_hist.push_back(s.lambda);
        gam_hist.push_back(s.gamma);
    }

    const CoeffTensor* lam_force = nullptr;
    const CoeffTensor* gam_force = nullptr;
    CoeffTensor lam_ext, gam_ext;
    if (!config_.disable_nonlinear) {
        state_.nonlinear.push_front(evaluate_nonlinear());
        while (int(state_.nonlinear.size()) > config_.order) state_.nonlinear.pop_back();
        // explicit extrapolation of the nonlinear history to t + h
        const int ext_order = std::min(b, int(state_.nonlinear.size()));
        const std::vector<double> w = imex_coefficients(ext_order);
        lam_ext = CoeffTensor(config_.spec);
        gam_ext = CoeffTensor(config_.spec);
        for (int i = 0; i < ext_order; ++i) {
            const PTScalars& a = state_.nonlinear[size_t(i)];
            for (size_t t = 0; t < lam_ext.data.size(); ++t) {
                lam_ext.data[t] += w[size_t(i)] * a.lambda.data[t];
                gam_ext.data[t] += w[size_t(i)] * a.gamma.data[t];
            }
        }
        lam_force = &lam_ext;
        gam_force = &gam_ext;
        if (config_.compute_gamma_psi) {
            CoeffTensor rhs = state_.omega.front().gamma;
            rhs *= Complex(-1.0);
            state_.gamma_psi =
                solve_poisson_3d(rhs, BoundaryCondition::homogeneous(), poisson_cache_);
        }
    }

    PTScalars next(config_.spec);
    next.lambda = stepper_.step(lam_hist, scheme, lam_force);
    next.gamma = stepper_.step(gam_hist, scheme, gam_force);

    if (!next.lambda.all_finite() || !next.gamma.all_finite())
        throw NumericalError("NSStepper: non-finite state at step " +
                             std::to_string(state_.steps_taken + 1));
    state_.omega.push_front(std::move(next));
    while (int(state_.omega.size()) > config_.order) state_.omega.pop_back();
    state_.time += config_.h;
    ++state_.steps_taken;
}

NSRunResult ns_run(const NSConfig& config, const PTScalars& initial_omega, int steps,
                   int output_every) {
    NSRunResult result;
    if (config.bootstrap == NSBootstrap::substeps && config.order > 1 && steps > 0) {
        // integrate [0, (b-1) h] with many small BDF2 steps and sample the
        // trajectory at multiples of h to seed the full-order history
        const int b = config.order;
        const int per = 32;
        NSConfig sub = config;
        sub.order = std::min(2, config.order);
        sub.h = config.h / per;
        sub.bootstrap = NSBootstrap::ramp;
        NSStepper fine(sub, initial_omega);
        std::deque<PTScalars> hist;  // newest first
        hist.push_front(initial_omega);
        for (int big = 1; big <= b - 1; ++big) {
            for (int s = 0; s < per; ++s) fine.step();
            hist.push_front(fine.omega());
        }
        // hand-build the full-order stepper state; the nonlinear history is
        // replayed so the explicit extrapolation has data at old time levels
        NSStepper stepper(config, hist.front());
        std::deque<PTScalars> replay;
        if (!config.disable_nonlinear) {
            ModalSolverCache cache(config.spec.m, config.spec.n, config.adi_tol);
            for (int i = int(hist.size()) - 1; i >= 1; --i) {
                const PTScalars v = velocity_from_vorticity(hist[size_t(i)], cache);
                replay.push_front(
                    nonlinear_term(v, hist[size_t(i)], config.dealias_two_thirds));
            }
        }
        stepper.seed(hist, replay, (b - 1) * config.h, b - 1);
        for (int s = b - 1; s < steps; ++s) {
            stepper.step();
            if (output_every > 0 && (s + 1) % output_every == 0) {
                result.snapshots.push_back(stepper.omega());
                result.snapshot_times.push_back(stepper.time());
            }
        }
        result.final_omega = stepper.omega();
        result.final_time = stepper.time();
        return result;
    }

    NSStepper stepper(config, initial_omega);
    for (int s = 0; s < steps; ++s) {
        stepper.step();
        if (output_every > 0 && (s + 1) % output_every == 0) {
            result.snapshots.push_back(stepper.omega());
            result.snapshot_times.push_back(stepper.time());
        }
    }
    result.final_omega = stepper.omega();
    result.final_time = stepper.time();
    return result;
}

}  // namespace cylspec
