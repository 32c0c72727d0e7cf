#pragma once

#include <array>
#include <vector>

#include "cylspec/errors.hpp"

namespace cylspec {

/// Discretization sizes of the doubled Chebyshev-Chebyshev-Fourier grid:
/// m radial points (r in [-1,1]), n vertical points (z in [-1,1]),
/// p equispaced angular points (theta in [-pi,pi)).
struct GridSpec {
    int m = 0, n = 0, p = 0;

    GridSpec() = default;
    GridSpec(int m_, int n_, int p_) : m(m_), n(n_), p(p_) { validate(); }

    void validate() const;
    long total_points() const { return long(m) * n * p; }
    /// Fourier slice index carrying wavenumber 0.
    int zero_mode() const { return p / 2; }
    /// Wavenumber carried by slice l.
    int wavenumber(int l) const { return l - p / 2; }

    bool operator==(const GridSpec&) const = default;
};

/// Chebyshev points in increasing order: x_j = cos((count-1-j) pi/(count-1)).
std::vector<double> chebyshev_points(int count);
/// Equispaced angular points theta_l = (2l - count) pi / count.
std::vector<double> fourier_points(int count);

/// Real scalar samples on the grid, stored with l outermost, k middle,
/// j innermost (so each Fourier slice is a contiguous m x n column-major
/// matrix).
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& s) : spec(s), values(size_t(s.total_points()), 0.0) {}

    double& at(int j, int k, int l) { return values[index(j, k, l)]; }
    double at(int j, int k, int l) const { return values[index(j, k, l)]; }
    size_t index(int j, int k, int l) const {
        return (size_t(l) * spec.n + size_t(k)) * spec.m + size_t(j);
    }
    double max_abs() const;
};

/// Grid points in the same ordering as GridField::values.
std::vector<std::array<double, 3>> grid_points(const GridSpec& spec);

/// True iff the doubled-point identification
/// f(j,k,l) == f(m-1-j, k, (l+p/2) mod p) holds to within tol.
/// For the r/theta components of vector fields the identified value flips
/// sign; pass flip_sign = true.
bool check_physical_consistency(const GridField& field, double tol, bool flip_sign = false);

/// Largest violation of the identification (useful in diagnostics).
double physical_consistency_error(const GridField& field, bool flip_sign = false);

}  // namespace cylspec
