#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cylspec/errors.hpp"

namespace cylspec {

/// Flat run configuration; JSON config file keys match the field names and
/// CLI flags override file values.
struct RunConfig {
    std::string problem;  // heat | poisson | ns | bench | transform
    int m = 15, n = 15, p = 16;
    double alpha = 1.0;
    double reynolds = 100.0;
    double h = 0.01;
    int steps = 200;
    int bdf_order = 4;
    double adi_tol = 1e-12;
    int output_every = 0;
    std::string bc_kind = "dirichlet_homogeneous";
    std::string output_path = "out";
    std::string input_path;  // transform/poisson input FieldFile (optional)
    std::string case_name = "manufactured";  // manufactured | decay
    uint64_t seed = 0;
    bool exact_forcing = true;
    bool collocation_cache_lu = false;
    std::vector<int> bench_sizes = {7, 11, 15, 19};
    std::vector<int> bench_fd_sizes = {61};
    std::vector<std::string> bench_methods = {"spectral", "collocation", "fd", "dense"};
    int threads = 1;

    void validate() const;
};

/// Parse the JSON config file (optional) and return defaults when path is empty.
RunConfig load_config(const std::string& json_path);

}  // namespace cylspec
