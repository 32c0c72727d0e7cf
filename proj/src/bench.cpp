#include "cylspec/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

namespace cylspec {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

double ManufacturedHeat::exact(double r, double z, double th, double t) const {
    return std::exp(-t) * std::cos(std::numbers::pi * z / 2) * (1 - r * r) *
           (1 + 0.5 * r * std::cos(th));
}

double ManufacturedHeat::forcing(double r, double z, double th, double t) const {
    const double zz = std::cos(std::numbers::pi * z / 2);
    const double s = (1 - r * r) * (1 + 0.5 * r * std::cos(th));
    // lap T = e^{-t}[ Z lap_h S + S Z'' ], lap_h S = -4 (1 + r cos th),
    // Z'' = -(pi^2/4) Z
    const double lap = std::exp(-t) * (-4.0 * zz * (1 + r * std::cos(th)) -
                                       std::numbers::pi * std::numbers::pi / 4.0 * zz * s);
    const double dt = -exact(r, z, th, t);
    return dt - alpha * lap;
}

GridField ManufacturedHeat::initial(const GridSpec& spec) const {
    return sample(spec, [&](double r, double z, double th) { return exact(r, z, th, 0.0); });
}

double ManufacturedHeat::max_rel_error(const GridField& numeric, double t) const {
    const GridSpec& spec = numeric.spec;
    const GridField ref =
        sample(spec, [&](double r, double z, double th) { return exact(r, z, th, t); });
    double err = 0.0, scale = 0.0;
    for (size_t i = 0; i < ref.values.size(); ++i) {
        err = std::max(err, std::abs(numeric.values[i] - ref.values[i]));
        scale = std::max(scale, std::abs(ref.values[i]));
    }
    return scale > 0 ? err / scale : err;
}

GridSpec bench_grid(int s) {
    return GridSpec(s, s, s % 2 == 0 ? s : s + 1);
}

BenchEntry bench_spectral(const BenchSettings& s, int size) {
    BenchEntry e{"spectral", 0, 0, 0, false, ""};
    try {
        const GridSpec spec = bench_grid(size);
        e.total_points = spec.total_points();
        ManufacturedHeat prob{s.alpha};
        HeatConfig cfg;
        cfg.spec = spec;
        cfg.alpha = s.alpha;
        cfg.h = s.h;
        cfg.order = s.bdf_order;
        cfg.adi_tol = s.adi_tol;
        cfg.forcing_mode = ForcingMode::exact;
        const GridField init = prob.initial(spec);
        auto forcing = [&](double t) {
            return sample(spec, [&](double r, double z, double th) {
                return prob.forcing(r, z, th, t);
            });
        };
        const double t0 = now_seconds();
        HeatRunResult run = heat_run(cfg, init, forcing, s.steps);
        e.seconds = now_seconds() - t0;
        e.max_error = prob.max_rel_error(run.snapshots.back(), run.final_time);
    } catch (const std::exception& ex) {
        e.failed = true;
        e.failure = ex.what();
    }
    return e;
}

BenchEntry bench_collocation(const BenchSettings& s, int size) {
    BenchEntry e{"collocation", 0, 0, 0, false, ""};
    try {
        const GridSpec spec = bench_grid(size);
        e.total_points = spec.total_points();
        ManufacturedHeat prob{s.alpha};
        CollocationConfig cfg;
        cfg.spec = spec;
        cfg.alpha = s.alpha;
        cfg.h = s.h;
        cfg.order = s.bdf_order;
        cfg.cache_factorizations = s.collocation_cache_lu;
        const GridField init = prob.initial(spec);
        auto forcing = [&](double r, double z, double th, double t) {
            return prob.forcing(r, z, th, t);
        };
        const double t0 = now_seconds();
        CollocationResult run = collocation_heat_run(cfg, init, forcing, s.steps);
        e.seconds = now_seconds() - t0;
        e.max_error = prob.max_rel_error(run.final_values, run.final_time);
    } catch (const std::exception& ex) {
        e.failed = true;
        e.failure = ex.what();
    }
    return e;
}

BenchEntry bench_fd(const BenchSettings& s, int size) {
    BenchEntry e{"fd", 0, 0, 0, false, ""};
    try {
        const int pf = size % 2 == 0 ? size : size + 1;
        FDConfig cfg{FDGrid(size, size, pf), s.alpha, 0.0};
        e.total_points = cfg.grid.total_points();
        ManufacturedHeat prob{s.alpha};
        // same final time as the spectral run, in fd_steps backward-Euler steps
        const double t_final = s.h * s.steps;
        cfg.h = t_final / s.fd_steps;
        auto initial = [&](double r, double z, double th, double t) {
            return prob.exact(r, z, th, t);
        };
        auto forcing = [&](double r, double z, double th, double t) {
            return prob.forcing(r, z, th, t);
        };
        const double t0 = now_seconds();
        FDResult run = fd_heat_run(cfg, initial, forcing, s.fd_steps);
        e.seconds = now_seconds() - t0;
        e.max_error = fd_max_error(
            cfg, run, [&](double r, double z, double th, double t) {
                return prob.exact(r, z, th, t);
            });
    } catch (const std::exception& ex) {
        e.failed = true;
        e.failure = ex.what();
    }
    return e;
}

namespace {

// Heat stepper with every modal solve routed through the dense Kronecker
// oracle; only used for comparison timings.
GridField dense_heat_run(const GridSpec& spec, const ManufacturedHeat& prob, double h,
                         int order, int steps, double& final_time) {
    const UltraOps& rops = UltraOps::get(spec.m);
    const UltraOps& zops = UltraOps::get(spec.n);
    const BandedMatrix c02t = zops.c02.transposed();
    const BandedMatrix srec = dirichlet_recombination(spec.m);
    const BandedMatrix zrec = dirichlet_recombination(spec.n);

    std::deque<CoeffTensor> history;
    history.push_front(parity_project(analyze(prob.initial(spec))));
    double time = 0.0;
    for (int step = 0; step < steps; ++step) {
        const int b = std::min(order, step + 1);
        const BDFScheme scheme = BDFScheme::of_order(b);
        const double kappa = scheme.kappa(h);
        CoeffTensor rhs = bdf_rhs(history, scheme);
        const GridField g = sample(spec, [&](double r, double z, double th) {
            return prob.forcing(r, z, th, time + h);
        });
        CoeffTensor gc = analyze(g);
        for (size_t t = 0; t < rhs.data.size(); ++t) rhs.data[t] += kappa * gc.data[t];
        parity_project_in_place(rhs);

        CoeffTensor out(spec);
        for (int l = 0; l < spec.p; ++l) {
            const int w = spec.wavenumber(l);
            ModalOperator op = assemble_modal_helmholtz(spec.m, spec.n, w,
                                                        kappa * prob.alpha);
            SylvesterProblem prob_l;
            prob_l.A = recombine(op.A);
            prob_l.B = recombine(op.B.transposed()).transposed();
            prob_l.C = recombine(op.C);
            prob_l.D = recombine(op.D.transposed()).transposed();
            Eigen::MatrixXcd fl = rhs.slice(l);
            Eigen::MatrixXcd ff = c02t.apply_right(rops.r2.apply_left(fl));
            prob_l.E = ff.topLeftCorner(spec.m - 2, spec.n - 2);
            Eigen::MatrixXcd y = dense_sylvester_oracle(prob_l);
            out.slice(l) = zrec.transposed().apply_right(srec.apply_left(y));
        }
        parity_project_in_place(out);
        history.push_front(std::move(out));
        while (int(history.size()) > order) history.pop_back();
        time += h;
    }
    final_time = time;
    return synthesize(history.front());
}

}  // namespace

BenchEntry bench_dense(const BenchSettings& s, int size) {
    BenchEntry e{"dense", 0, 0, 0, false, ""};
    try {
        const GridSpec spec = bench_grid(size);
        e.total_points = spec.total_points();
        ManufacturedHeat prob{s.alpha};
        double final_time = 0.0;
        const double t0 = now_seconds();
        const GridField result =
            dense_heat_run(spec, prob, s.h, s.bdf_order, s.steps, final_time);
        e.seconds = now_seconds() - t0;
        e.max_error = prob.max_rel_error(result, final_time);
    } catch (const std::exception& ex) {
        e.failed = true;
        e.failure = ex.what();
    }
    return e;
}

std::vector<BenchEntry> run_bench(const BenchSettings& settings) {
    std::vector<BenchEntry> out;
    for (const std::string& method : settings.methods) {
        if (method == "fd") {
            for (int size : settings.fd_sizes) out.push_back(bench_fd(settings, size));
            continue;
        }
        for (int size : settings.sizes) {
            if (method == "spectral") out.push_back(bench_spectral(settings, size));
            else if (method == "collocation") out.push_back(bench_collocation(settings, size));
            else if (method == "dense") out.push_back(bench_dense(settings, size));
            else {
                BenchEntry e;
                e.method = method;
                e.failed = true;
                e.failure = "unknown method";
                out.push_back(e);
            }
        }
    }
    return out;
}

void write_bench_csv(const std::string& path, const std::vector<BenchEntry>& entries) {
    std::ofstream os(path);
    if (!os) throw NumericalError("write_bench_csv: cannot open " + path);
    os.precision(17);
    os << "method,N,max_error,seconds\n";
    for (const BenchEntry& e : entries) {
        os << e.method << ',' << e.total_points << ',';
        if (e.failed) os << "failed:" << e.failure << ',' << "failed:" << e.failure;
        else os << e.max_error << ',' << e.seconds;
        os << '\n';
    }
}

double spectral_step_seconds(int size, double alpha, double h, int order, double adi_tol,
                             int measured_steps) {
    const GridSpec spec = bench_grid(size);
    ManufacturedHeat prob{alpha};
    HeatConfig cfg;
    cfg.spec = spec;
    cfg.alpha = alpha;
    cfg.h = h;
    cfg.order = order;
    cfg.adi_tol = adi_tol;
    HeatStepper stepper(cfg, prob.initial(spec));
    auto forcing = [&](double t) {
        return sample(spec, [&](double r, double z, double th) {
            return prob.forcing(r, z, th, t);
        });
    };
    // warmup: fill the ramp and build every factorization cache
    for (int i = 0; i < order + 1; ++i) stepper.step_with_callback(forcing);
    std::vector<double> times;
    for (int i = 0; i < measured_steps; ++i) {
        const double t0 = now_seconds();
        stepper.step_with_callback(forcing);
        times.push_back(now_seconds() - t0);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

std::pair<double, double> modal_sweep_seconds(int size, double scale, double adi_tol) {
    const GridSpec spec = bench_grid(size);
    const UltraOps& rops = UltraOps::get(spec.m);
    const UltraOps& zops = UltraOps::get(spec.n);
    const BandedMatrix c02t = zops.c02.transposed();
    ManufacturedHeat prob{1.0};
    CoeffTensor rhs = parity_project(analyze(prob.initial(spec)));

    std::vector<SylvesterProblem> problems;
    for (int l = 0; l < spec.p; ++l) {
        const int w = spec.wavenumber(l);
        ModalOperator op = assemble_modal_helmholtz(spec.m, spec.n, w, scale);
        SylvesterProblem pl;
        pl.A = recombine(op.A);
        pl.B = recombine(op.B.transposed()).transposed();
        pl.C = recombine(op.C);
        pl.D = recombine(op.D.transposed()).transposed();
        Eigen::MatrixXcd fl = rhs.slice(l);
        Eigen::MatrixXcd ff = c02t.apply_right(rops.r2.apply_left(fl));
        pl.E = ff.topLeftCorner(spec.m - 2, spec.n - 2);
        problems.push_back(std::move(pl));
    }

    // Per-solve marginal cost with caches warm, as a stepper would pay it:
    // the ADI path reuses its shift plan and shifted factorizations, the
    // dense-oracle path assembles and factors the Kronecker system.
    std::vector<AdiWorkspace> workspaces;
    for (int l = 0; l < spec.p; ++l) {
        const auto& pl = problems[size_t(l)];
        auto ca = spectral_bounds(pl.A, pl.C);
        BandedMatrix negd = pl.D.transposed();
        negd *= -1.0;
        auto db = spectral_bounds(negd, pl.B.transposed());
        workspaces.emplace_back(pl, compute_shifts(ca, db, adi_tol));
    }
    const double t0 = now_seconds();
    for (int l = 0; l < spec.p; ++l)
        workspaces[size_t(l)].solve(problems[size_t(l)].E);
    const double adi_seconds = now_seconds() - t0;

    const double t1 = now_seconds();
    for (const auto& pl : problems) dense_sylvester_oracle(pl);
    const double dense_seconds = now_seconds() - t1;
    return {adi_seconds, dense_seconds};
}

}  // namespace cylspec
