#include "cylspec/grid.hpp"

#include <cmath>
#include <numbers>

namespace cylspec {

void GridSpec::validate() const {
    if (m < 4 || n < 4)
        throw DomainError("GridSpec: m and n must be at least 4");
    if (p < 2 || p % 2 != 0)
        throw DomainError("GridSpec: p must be even and at least 2 "
                          "(the doubled point (-r,z,theta) needs its partner at theta+pi)");
}

std::vector<double> chebyshev_points(int count) {
    if (count < 2) throw DomainError("chebyshev_points: need at least 2 points");
    std::vector<double> x(static_cast<size_t>(count), 0.0);
    for (int j = 0; j < count; ++j)
        x[j] = std::cos(double(count - j - 1) * std::numbers::pi / double(count - 1));
    // pin the endpoints exactly
    x.front() = -1.0;
    x.back() = 1.0;
    if (count % 2 == 1) x[size_t(count / 2)] = 0.0;
    return x;
}

std::vector<double> fourier_points(int count) {
    if (count < 1) throw DomainError("fourier_points: need at least 1 point");
    std::vector<double> t(static_cast<size_t>(count), 0.0);
    for (int l = 0; l < count; ++l)
        t[l] = double(2 * l - count) * std::numbers::pi / double(count);
    return t;
}

std::vector<std::array<double, 3>> grid_points(const GridSpec& spec) {
    spec.validate();
    const auto r = chebyshev_points(spec.m);
    const auto z = chebyshev_points(spec.n);
    const auto th = fourier_points(spec.p);
    std::vector<std::array<double, 3>> pts;
    pts.reserve(size_t(spec.total_points()));
    for (int l = 0; l < spec.p; ++l)
        for (int k = 0; k < spec.n; ++k)
            for (int j = 0; j < spec.m; ++j) pts.push_back({r[j], z[k], th[l]});
    return pts;
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double physical_consistency_error(const GridField& field, bool flip_sign) {
    const GridSpec& s = field.spec;
    if (s.p % 2 != 0) throw DomainError("physical consistency check needs even p");
    const double sign = flip_sign ? -1.0 : 1.0;
    double worst = 0.0;
    for (int l = 0; l < s.p; ++l) {
        const int lp = (l + s.p / 2) % s.p;
        for (int k = 0; k < s.n; ++k)
            for (int j = 0; j < s.m; ++j) {
                const double d = field.at(j, k, l) - sign * field.at(s.m - 1 - j, k, lp);
                worst = std::max(worst, std::abs(d));
            }
    }
    return worst;
}

bool check_physical_consistency(const GridField& field, double tol, bool flip_sign) {
    return physical_consistency_error(field, flip_sign) <= tol;
}

}  // namespace cylspec
