#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "cylspec/bench.hpp"
#include "cylspec/io.hpp"
#include "cylspec/ptns.hpp"
#include "cylspec/runconfig.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cylspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

json config_json(const RunConfig& cfg) {
    return json{{"problem", cfg.problem},
                {"m", cfg.m},
                {"n", cfg.n},
                {"p", cfg.p},
                {"alpha", cfg.alpha},
                {"reynolds", cfg.reynolds},
                {"h", cfg.h},
                {"steps", cfg.steps},
                {"bdf_order", cfg.bdf_order},
                {"adi_tol", cfg.adi_tol},
                {"output_every", cfg.output_every},
                {"bc_kind", cfg.bc_kind},
                {"output_path", cfg.output_path},
                {"input_path", cfg.input_path},
                {"case", cfg.case_name},
                {"seed", cfg.seed},
                {"exact_forcing", cfg.exact_forcing},
                {"threads", cfg.threads}};
}

void write_manifest(const fs::path& dir, json manifest) {
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << "\n";
}

// full round-trip precision for floating point values in manifests
json num(double v) { return json(v); }

GridField random_smooth_field(const GridSpec& spec, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<double, 8> c;
    for (double& v : c) v = dist(rng);
    return sample(spec, [&](double r, double z, double th) {
        const double x = r * std::cos(th), y = r * std::sin(th);
        const double bump = (1 - r * r) * (1 - z * z);
        return bump * (c[0] + c[1] * x + c[2] * y + c[3] * z + c[4] * x * y +
                       c[5] * x * z + c[6] * y * z + c[7] * (x * x - y * y));
    });
}

int run_heat(const RunConfig& cfg) {
    const GridSpec spec(cfg.m, cfg.n, cfg.p);
    const fs::path outdir(cfg.output_path);
    fs::create_directories(outdir);

    ManufacturedHeat prob{cfg.alpha};
    GridField initial(spec);
    ForcingCallback forcing;
    if (cfg.case_name == "manufactured") {
        initial = prob.initial(spec);
        forcing = [prob, spec](double t) {
            return sample(spec, [&](double r, double z, double th) {
                return prob.forcing(r, z, th, t);
            });
        };
    } else if (cfg.case_name == "decay") {
        initial = random_smooth_field(spec, cfg.seed);
    } else {
        throw ConfigError("unknown heat case: " + cfg.case_name);
    }

    HeatConfig hc;
    hc.spec = spec;
    hc.alpha = cfg.alpha;
    hc.h = cfg.h;
    hc.order = cfg.bdf_order;
    hc.adi_tol = cfg.adi_tol;
    hc.forcing_mode = cfg.exact_forcing ? ForcingMode::exact : ForcingMode::lagged;
    hc.output_every = cfg.output_every;

    const auto t0 = std::chrono::steady_clock::now();
    HeatRunResult run = heat_run(hc, initial, forcing, cfg.steps);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();

    json manifest;
    manifest["command"] = "heat";
    manifest["config"] = config_json(cfg);
    manifest["timings"] = {{"total_seconds", num(seconds)},
                           {"per_step_seconds", num(cfg.steps ? seconds / cfg.steps : 0)}};
    manifest["worst_modal_residual"] = num(run.worst_residual);
    manifest["final_time"] = num(run.final_time);
    json outputs = json::array();
    for (size_t i = 0; i < run.snapshots.size(); ++i) {
        const std::string name = "snapshot_" + std::to_string(i) + ".ccf";
        write_field((outdir / name).string(), run.snapshots[i]);
        outputs.push_back({{"path", name}, {"time", num(run.snapshot_times[i])}});
    }
    if (cfg.case_name == "manufactured" && cfg.steps > 0)
        manifest["max_rel_error"] = num(prob.max_rel_error(run.snapshots.back(),
                                                           run.final_time));
    manifest["outputs"] = outputs;
    write_manifest(outdir, manifest);
    return kExitOk;
}

int run_poisson(const RunConfig& cfg) {
    const GridSpec spec(cfg.m, cfg.n, cfg.p);
    const fs::path outdir(cfg.output_path);
    fs::create_directories(outdir);

    CoeffTensor f(spec);
    if (!cfg.input_path.empty()) {
        FieldVariant v = read_field(cfg.input_path);
        if (std::holds_alternative<GridField>(v)) f = analyze(std::get<GridField>(v));
        else f = std::get<CoeffTensor>(v);
        if (!(f.spec == spec))
            throw ConfigError("input field dimensions disagree with the config");
    } else {
        // manufactured: f = lap T at t = 0, from dT/dt - lap T = g with
        // dT/dt = -T for the e^{-t} profile
        ManufacturedHeat prob{1.0};
        f = analyze(sample(spec, [&](double r, double z, double th) {
            return -prob.exact(r, z, th, 0.0) - prob.forcing(r, z, th, 0.0);
        }));
    }

    const auto t0 = std::chrono::steady_clock::now();
    CoeffTensor u = solve_poisson_3d(f, BoundaryCondition::homogeneous(), cfg.adi_tol);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_field((outdir / "solution.ccf").string(), u);
    write_field((outdir / "solution_values.ccf").string(), synthesize(u));
    json manifest;
    manifest["command"] = "poisson";
    manifest["config"] = config_json(cfg);
    manifest["timings"] = {{"total_seconds", num(seconds)}};
    manifest["outputs"] = {"solution.ccf", "solution_values.ccf"};
    if (cfg.input_path.empty()) {
        ManufacturedHeat prob{1.0};
        const GridField ug = synthesize(u);
        const GridField ref = sample(spec, [&](double r, double z, double th) {
            return prob.exact(r, z, th, 0.0);
        });
        double err = 0;
        for (size_t i = 0; i < ug.values.size(); ++i)
            err = std::max(err, std::abs(ug.values[i] - ref.values[i]));
        manifest["max_abs_error"] = num(err);
    }
    write_manifest(outdir, manifest);
    return kExitOk;
}

int run_ns(const RunConfig& cfg) {
    const GridSpec spec(cfg.m, cfg.n, cfg.p);
    const fs::path outdir(cfg.output_path);
    fs::create_directories(outdir);

    // seeded smooth gauge-fixed initial vorticity scalars
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double a0 = dist(rng), a1 = dist(rng), a2 = dist(rng);
    auto lam0 = analyze(sample(spec, [&](double r, double z, double th) {
        const double b = (1 - r * r) * (1 - z * z);
        return b * (a0 + a1 * r * std::cos(th)) * 0.5;
    }));
    auto gam0 = analyze(sample(spec, [&](double r, double z, double th) {
        const double b = (1 - r * r) * (1 - z * z);
        return b * (1 + a2 * r * std::sin(th)) * 0.25;
    }));
    PTScalars v0(std::move(lam0), std::move(gam0));
    // make it a legitimate vorticity: omega = curl_pt(v-scalars)
    PTScalars omega0 = curl_pt(v0);

    NSConfig nc;
    nc.spec = spec;
    nc.reynolds = cfg.reynolds;
    nc.h = cfg.h;
    nc.order = cfg.bdf_order;
    nc.adi_tol = cfg.adi_tol;

    const auto t0 = std::chrono::steady_clock::now();
    NSRunResult run = ns_run(nc, omega0, cfg.steps, cfg.output_every);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_field((outdir / "omega_toroidal.ccf").string(), run.final_omega.lambda);
    write_field((outdir / "omega_poloidal.ccf").string(), run.final_omega.gamma);
    const VectorFieldCoeffs vfinal =
        pt_synthesize(velocity_from_vorticity(run.final_omega, cfg.adi_tol));
    json manifest;
    manifest["command"] = "ns";
    manifest["config"] = config_json(cfg);
    manifest["timings"] = {{"total_seconds", num(seconds)},
                           {"per_step_seconds", num(cfg.steps ? seconds / cfg.steps : 0)}};
    manifest["final_time"] = num(run.final_time);
    manifest["final_divergence"] = num(divergence(vfinal).max_abs());
    manifest["outputs"] = {"omega_toroidal.ccf", "omega_poloidal.ccf"};
    write_manifest(outdir, manifest);
    return kExitOk;
}

int run_bench_cmd(const RunConfig& cfg) {
    const fs::path outdir(cfg.output_path);
    fs::create_directories(outdir);
    BenchSettings settings;
    settings.sizes = cfg.bench_sizes;
    settings.fd_sizes = cfg.bench_fd_sizes;
    settings.methods = cfg.bench_methods;
    settings.alpha = cfg.alpha;
    settings.h = cfg.h;
    settings.steps = cfg.steps;
    settings.bdf_order = cfg.bdf_order;
    settings.adi_tol = cfg.adi_tol;
    settings.collocation_cache_lu = cfg.collocation_cache_lu;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<BenchEntry> entries = run_bench(settings);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_bench_csv((outdir / "bench.csv").string(), entries);
    json manifest;
    manifest["command"] = "bench";
    manifest["config"] = config_json(cfg);
    manifest["timings"] = {{"total_seconds", num(seconds)}};
    json rows = json::array();
    for (const auto& e : entries) {
        json row{{"method", e.method}, {"N", e.total_points}};
        if (e.failed) row["failure"] = e.failure;
        else {
            row["max_error"] = num(e.max_error);
            row["seconds"] = num(e.seconds);
        }
        rows.push_back(row);
    }
    manifest["results"] = rows;
    manifest["outputs"] = {"bench.csv"};
    write_manifest(outdir, manifest);
    std::cout << "bench results written to " << (outdir / "bench.csv").string() << "\n";
    return kExitOk;
}

int run_transform(const RunConfig& cfg) {
    if (cfg.input_path.empty())
        throw ConfigError("transform requires an input FieldFile (--in)");
    const fs::path outdir(cfg.output_path);
    fs::create_directories(outdir);
    FieldVariant v = read_field(cfg.input_path);
    std::string outname;
    if (std::holds_alternative<GridField>(v)) {
        outname = "coefficients.ccf";
        write_field((outdir / outname).string(), analyze(std::get<GridField>(v)));
    } else {
        outname = "values.ccf";
        write_field((outdir / outname).string(), synthesize(std::get<CoeffTensor>(v)));
    }
    json manifest;
    manifest["command"] = "transform";
    manifest["config"] = config_json(cfg);
    manifest["outputs"] = {outname};
    write_manifest(outdir, manifest);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral heat/Poisson/Navier-Stokes solvers in the closed cylinder"};
    app.require_subcommand(1);

    std::string config_path;
    RunConfig cli;  // CLI override capture
    bool has_m = false, has_n = false, has_p = false, has_steps = false, has_h = false,
         has_alpha = false, has_re = false, has_bdf = false, has_tol = false,
         has_out = false, has_in = false, has_seed = false, has_case = false,
         has_every = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--m", cli.m)->each([&](const std::string&) { has_m = true; });
        sub->add_option("--n", cli.n)->each([&](const std::string&) { has_n = true; });
        sub->add_option("--p", cli.p)->each([&](const std::string&) { has_p = true; });
        sub->add_option("--steps", cli.steps)->each([&](const std::string&) {
            has_steps = true;
        });
        sub->add_option("--h", cli.h)->each([&](const std::string&) { has_h = true; });
        sub->add_option("--alpha", cli.alpha)->each([&](const std::string&) {
            has_alpha = true;
        });
        sub->add_option("--re", cli.reynolds)->each([&](const std::string&) {
            has_re = true;
        });
        sub->add_option("--bdf", cli.bdf_order)->each([&](const std::string&) {
            has_bdf = true;
        });
        sub->add_option("--tol", cli.adi_tol)->each([&](const std::string&) {
            has_tol = true;
        });
        sub->add_option("--out", cli.output_path)->each([&](const std::string&) {
            has_out = true;
        });
        sub->add_option("--in", cli.input_path)->each([&](const std::string&) {
            has_in = true;
        });
        sub->add_option("--seed", cli.seed)->each([&](const std::string&) {
            has_seed = true;
        });
        sub->add_option("--case", cli.case_name)->each([&](const std::string&) {
            has_case = true;
        });
        sub->add_option("--output-every", cli.output_every)->each([&](const std::string&) {
            has_every = true;
        });
    };

    for (const char* name : {"heat", "poisson", "ns", "bench", "transform"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        cfg.problem = app.get_subcommands().front()->get_name();
        if (has_m) cfg.m = cli.m;
        if (has_n) cfg.n = cli.n;
        if (has_p) cfg.p = cli.p;
        if (has_steps) cfg.steps = cli.steps;
        if (has_h) cfg.h = cli.h;
        if (has_alpha) cfg.alpha = cli.alpha;
        if (has_re) cfg.reynolds = cli.reynolds;
        if (has_bdf) cfg.bdf_order = cli.bdf_order;
        if (has_tol) cfg.adi_tol = cli.adi_tol;
        if (has_out) cfg.output_path = cli.output_path;
        if (has_in) cfg.input_path = cli.input_path;
        if (has_seed) cfg.seed = cli.seed;
        if (has_case) cfg.case_name = cli.case_name;
        if (has_every) cfg.output_every = cli.output_every;
        if (const char* threads = std::getenv("CYLSPEC_THREADS"))
            cfg.threads = std::max(1, std::atoi(threads));
        cfg.validate();

        if (cfg.problem == "heat") return run_heat(cfg);
        if (cfg.problem == "poisson") return run_poisson(cfg);
        if (cfg.problem == "ns") return run_ns(cfg);
        if (cfg.problem == "bench") return run_bench_cmd(cfg);
        return run_transform(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const FieldFileError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        // numerical failure: dump a diagnostic manifest when possible
        std::cerr << "numerical failure: " << e.what() << "\n";
        try {
            fs::create_directories("out");
            std::ofstream os(fs::path("out") / "failure_manifest.json");
            os << json{{"error", e.what()}}.dump(2) << "\n";
        } catch (...) {
        }
        return kExitNumerical;
    }
}
