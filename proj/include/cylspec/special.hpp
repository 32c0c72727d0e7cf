#pragma once

#include <array>

#include "cylspec/errors.hpp"

namespace cylspec {

/// Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k')),
/// modulus convention (not parameter m = k^2). Domain 0 <= k < 1.
double elliptic_K(double k);
/// Same integral from the complementary modulus k' = sqrt(1-k^2); use this
/// when k is close to 1 and k' is known exactly.
double elliptic_K_from_kprime(double kprime);

struct JacobiElliptic {
    double sn, cn, dn;
};

/// Jacobi elliptic functions by the descending Landen (AGM) method.
JacobiElliptic jacobi_elliptic(double u, double k);
JacobiElliptic jacobi_elliptic_from_kprime(double u, double kprime);
double jacobi_dn(double u, double k);

/// Real Moebius transformation t -> (a t + b)/(c t + d).
class MobiusMap {
public:
    MobiusMap() : coef_{1, 0, 0, 1} {}
    MobiusMap(double a, double b, double c, double d);

    double operator()(double t) const;
    MobiusMap inverse() const;
    MobiusMap compose(const MobiusMap& inner) const;  // this ∘ inner
    std::array<double, 4> coefficients() const { return coef_; }

private:
    std::array<double, 4> coef_;  // (a, b, c, d)
};

/// Moebius map sending the four source points to the four target points
/// (built from three of them by cross-ratio matching; quadruples arising
/// from the shift construction have equal cross-ratios so the fourth point
/// follows). Repeated points raise a degenerate-map error.
MobiusMap mobius_from_points(const std::array<double, 4>& source,
                             const std::array<double, 4>& target);

double cross_ratio(double z1, double z2, double z3, double z4);

}  // namespace cylspec
