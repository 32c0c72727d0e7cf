#pragma once

#include <string>

#include "cylspec/baseline.hpp"
#include "cylspec/timestep.hpp"

namespace cylspec {

/// The manufactured heat problem shared by the comparison harness:
///   T(r,z,theta,t) = e^{-t} cos(pi z / 2) (1 - r^2)(1 + (r cos theta)/2)
/// smooth in Cartesian coordinates, vanishing on the whole boundary, with
/// the forcing g = dT/dt - alpha lap T in closed form.
struct ManufacturedHeat {
    double alpha = 1.0;

    double exact(double r, double z, double th, double t) const;
    double forcing(double r, double z, double th, double t) const;
    GridField initial(const GridSpec& spec) const;
    /// max |T_num - T_exact| / max |T_exact| on the grid at time t
    double max_rel_error(const GridField& numeric, double t) const;
};

struct BenchEntry {
    std::string method;
    long total_points = 0;
    double max_error = 0.0;
    double seconds = 0.0;
    bool failed = false;
    std::string failure;
};

struct BenchSettings {
    std::vector<int> sizes = {7, 11, 15, 19};   // m = n, p = next even
    std::vector<int> fd_sizes = {61};           // FD runs m=n as given, even p
    std::vector<std::string> methods = {"spectral", "collocation", "fd", "dense"};
    double alpha = 1.0;
    double h = 0.01;
    int steps = 200;
    int fd_steps = 6;
    int bdf_order = 4;
    double adi_tol = 1e-12;
    bool collocation_cache_lu = false;
};

/// Grid sizes used for a nominal size s: m = n = s, p = s rounded up to even.
GridSpec bench_grid(int s);

BenchEntry bench_spectral(const BenchSettings& s, int size);
BenchEntry bench_collocation(const BenchSettings& s, int size);
BenchEntry bench_fd(const BenchSettings& s, int size);
/// Same stepper as bench_spectral but every modal solve goes through the
/// dense Kronecker factorization instead of ADI.
BenchEntry bench_dense(const BenchSettings& s, int size);

std::vector<BenchEntry> run_bench(const BenchSettings& settings);
void write_bench_csv(const std::string& path, const std::vector<BenchEntry>& entries);

/// Median per-step seconds of the spectral solver at the given size
/// (warmed caches, forcing evaluation included).
double spectral_step_seconds(int size, double alpha, double h, int order, double adi_tol,
                             int measured_steps = 5);

/// Seconds for one full modal sweep (all p modes, one right-hand side each)
/// via ADI and via the dense oracle, at m = n = p = size.
std::pair<double, double> modal_sweep_seconds(int size, double scale, double adi_tol);

}  // namespace cylspec
