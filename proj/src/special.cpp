#include "cylspec/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace cylspec {

namespace {
constexpr double kAgmTol = 1e-16;
constexpr int kAgmMaxIter = 64;
}  // namespace

double elliptic_K_from_kprime(double kprime) {
    if (!(kprime > 0.0) || kprime > 1.0)
        throw DomainError("elliptic_K: complementary modulus must be in (0,1]");
    double a = 1.0, b = kprime;
    for (int i = 0; i < kAgmMaxIter && std::abs(a - b) > kAgmTol * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

double elliptic_K(double k) {
    if (k < 0.0 || k >= 1.0)
        throw DomainError("elliptic_K: modulus must satisfy 0 <= k < 1");
    return elliptic_K_from_kprime(std::sqrt((1.0 - k) * (1.0 + k)));
}

JacobiElliptic jacobi_elliptic_from_kprime(double u, double kprime) {
    if (!(kprime > 0.0) || kprime > 1.0)
        throw DomainError("jacobi_elliptic: complementary modulus must be in (0,1]");
    const double k2 = std::max(0.0, (1.0 - kprime) * (1.0 + kprime));
    const double k = std::sqrt(k2);

    // descending Landen sequence (A&S 16.4)
    std::vector<double> a{1.0}, c{k};
    double b = kprime;
    int N = 0;
    while (std::abs(c.back()) > kAgmTol * a.back() && N < kAgmMaxIter) {
        const double an = 0.5 * (a.back() + b);
        const double cn = 0.5 * (a.back() - b);
        b = std::sqrt(a.back() * b);
        a.push_back(an);
        c.push_back(cn);
        ++N;
    }
    if (N == 0) {
        // k effectively zero: circular limit
        return {std::sin(u), std::cos(u), 1.0};
    }
    double phi = std::ldexp(a[size_t(N)] * u, N);
    double phi_prev = phi;
    for (int i = N; i >= 1; --i) {
        phi_prev = phi;
        // descending Landen amplitude step: sin(2 phi_{i-1} - phi_i) = (c_i/a_i) sin phi_i,
        // principal branch (the correction tends to 0 with c_i)
        const double s = std::clamp(c[size_t(i)] / a[size_t(i)] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    // after the loop phi = phi_0 and phi_prev = phi_1
    JacobiElliptic out;
    out.sn = std::sin(phi);
    out.cn = std::cos(phi);
    const double denom = std::cos(phi_prev - phi);
    out.dn = (std::abs(denom) > 1e-12) ? out.cn / denom
                                       : std::sqrt(1.0 - k2 * out.sn * out.sn);
    return out;
}

JacobiElliptic jacobi_elliptic(double u, double k) {
    if (k < 0.0 || k >= 1.0)
        throw DomainError("jacobi_elliptic: modulus must satisfy 0 <= k < 1");
    return jacobi_elliptic_from_kprime(u, std::sqrt((1.0 - k) * (1.0 + k)));
}

double jacobi_dn(double u, double k) { return jacobi_elliptic(u, k).dn; }

MobiusMap::MobiusMap(double a, double b, double c, double d) : coef_{a, b, c, d} {
    if (std::abs(a * d - b * c) < 1e-300)
        throw DomainError("MobiusMap: zero determinant");
}

double MobiusMap::operator()(double t) const {
    return (coef_[0] * t + coef_[1]) / (coef_[2] * t + coef_[3]);
}

MobiusMap MobiusMap::inverse() const {
    return {coef_[3], -coef_[1], -coef_[2], coef_[0]};
}

MobiusMap MobiusMap::compose(const MobiusMap& inner) const {
    const auto& f = coef_;
    const auto& g = inner.coef_;
    return {f[0] * g[0] + f[1] * g[2], f[0] * g[1] + f[1] * g[3],
            f[2] * g[0] + f[3] * g[2], f[2] * g[1] + f[3] * g[3]};
}

namespace {

// Matrix of the map z -> cross ratio with (z1, z2, z3), sending them to (0, 1, inf).
std::array<double, 4> three_point_matrix(double z1, double z2, double z3) {
    // (z - z1)(z2 - z3) / ((z - z3)(z2 - z1))
    return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

}  // namespace

MobiusMap mobius_from_points(const std::array<double, 4>& source,
                             const std::array<double, 4>& target) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (source[i] == source[j])
                throw DomainError("mobius_from_points: repeated source point");
            if (target[i] == target[j])
                throw DomainError("mobius_from_points: repeated target point");
        }
    // use points 0, 1, 3 (skipping one interior point spreads conditioning)
    const auto s = three_point_matrix(source[0], source[1], source[3]);
    const auto t = three_point_matrix(target[0], target[1], target[3]);
    const MobiusMap ms(s[0], s[1], s[2], s[3]);
    const MobiusMap mt(t[0], t[1], t[2], t[3]);
    return mt.inverse().compose(ms);
}

double cross_ratio(double z1, double z2, double z3, double z4) {
    return ((z1 - z3) * (z2 - z4)) / ((z1 - z4) * (z2 - z3));
}

}  // namespace cylspec
