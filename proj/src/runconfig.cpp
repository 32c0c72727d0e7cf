#include "cylspec/runconfig.hpp"

#include <fstream>
#include <json.hpp>

namespace cylspec {

void RunConfig::validate() const {
    if (problem != "heat" && problem != "poisson" && problem != "ns" &&
        problem != "bench" && problem != "transform")
        throw ConfigError("unknown problem: " + problem);
    if (m <= 0 || n <= 0 || p <= 0) throw ConfigError("grid sizes must be positive");
    if (!(h > 0)) throw ConfigError("h must be positive");
    if (!(adi_tol > 0) || adi_tol > 1e-2)
        throw ConfigError("adi_tol must lie in (0, 1e-2]");
    if (steps < 0) throw ConfigError("steps must be nonnegative");
    if (bdf_order < 1 || bdf_order > 4) throw ConfigError("bdf_order must be 1..4");
    if (bc_kind != "dirichlet_homogeneous" && bc_kind != "dirichlet_lifted")
        throw ConfigError("unknown bc kind: " + bc_kind);
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

RunConfig load_config(const std::string& json_path) {
    RunConfig cfg;
    if (json_path.empty()) return cfg;
    std::ifstream is(json_path);
    if (!is) throw ConfigError("cannot open config file: " + json_path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    auto get = [&](const char* key, auto& out) {
        if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
    };
    get("problem", cfg.problem);
    get("m", cfg.m);
    get("n", cfg.n);
    get("p", cfg.p);
    get("alpha", cfg.alpha);
    get("reynolds", cfg.reynolds);
    get("h", cfg.h);
    get("steps", cfg.steps);
    get("bdf_order", cfg.bdf_order);
    get("adi_tol", cfg.adi_tol);
    get("output_every", cfg.output_every);
    get("bc_kind", cfg.bc_kind);
    get("output_path", cfg.output_path);
    get("input_path", cfg.input_path);
    get("case", cfg.case_name);
    get("seed", cfg.seed);
    get("exact_forcing", cfg.exact_forcing);
    get("collocation_cache_lu", cfg.collocation_cache_lu);
    get("bench_sizes", cfg.bench_sizes);
    get("bench_fd_sizes", cfg.bench_fd_sizes);
    get("bench_methods", cfg.bench_methods);
    get("threads", cfg.threads);
    return cfg;
}

}  // namespace cylspec
