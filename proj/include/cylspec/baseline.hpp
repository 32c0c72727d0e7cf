#pragma once

#include <functional>

#include "cylspec/transform.hpp"

namespace cylspec {

/// Space-time scalar function (r, z, theta, t).
using SpaceTimeFn = std::function<double(double, double, double, double)>;

/// Dense Chebyshev collocation differentiation matrix on ascending points.
Eigen::MatrixXd chebyshev_diff_matrix(const std::vector<double>& x);

struct CollocationConfig {
    GridSpec spec;
    double alpha = 1.0;
    double h = 1e-2;
    int order = 4;
    // Reuse the per-(mode, kappa*alpha) dense LU across steps. Off by
    // default: the reference implementation this baseline mirrors paid a
    // fresh dense solve per step, which is what its reported timings show.
    bool cache_factorizations = false;
};

struct CollocationResult {
    GridField final_values;
    double final_time = 0.0;
};

/// Spectral collocation stepper on the same doubled CCF grid: dense
/// differentiation matrices, one (m n) x (m n) dense system per Fourier
/// mode, boundary conditions by row replacement, BDF stepping with the
/// 1 -> order startup ramp. Guarded to m*n*p <= 32^3.
CollocationResult collocation_heat_run(const CollocationConfig& config,
                                       const GridField& initial,
                                       const SpaceTimeFn& forcing, int steps);

/// Equispaced (r, z, theta) finite-difference grid; the radial points are
/// half-cell shifted so no node sits at r = 0.
struct FDGrid {
    int mf = 0, nf = 0, pf = 0;

    FDGrid(int m, int n, int p) : mf(m), nf(n), pf(p) {
        if (m < 3 || n < 3 || p < 4 || p % 2 != 0)
            throw DomainError("FDGrid: need m,n >= 3 and even p >= 4 "
                              "(axis coupling pairs theta with theta+pi)");
    }
    std::vector<double> radial_points() const;    // (i+1/2)/mf, i = 0..mf-1
    std::vector<double> vertical_points() const;  // equispaced [-1, 1]
    std::vector<double> angular_points() const;   // equispaced [-pi, pi)
    long total_points() const { return long(mf) * nf * pf; }
};

struct FDConfig {
    FDGrid grid{8, 8, 8};
    double alpha = 1.0;
    double h = 1e-2;
};

struct FDResult {
    std::vector<double> final_values;  // (l, k, i) ordering, i fastest
    double final_time = 0.0;
};

/// Second-order finite differences in (r, z, theta), backward-Euler steps,
/// one sparse LU factorization reused for the whole run.
FDResult fd_heat_run(const FDConfig& config, const SpaceTimeFn& initial,
                     const SpaceTimeFn& forcing, int steps);

/// Max-abs error of an FD run against an exact solution at its final time.
double fd_max_error(const FDConfig& config, const FDResult& result, const SpaceTimeFn& exact);

}  // namespace cylspec
