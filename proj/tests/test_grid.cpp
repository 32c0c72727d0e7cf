#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cylspec/grid.hpp"
#include "cylspec/coeffs.hpp"
#include "cylspec/transform.hpp"

using namespace cylspec;

TEST_CASE("chebyshev point formula") {
    // small counts exercise the point formula itself
    auto r3 = chebyshev_points(3);
    CHECK(r3[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(r3[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r3[2] == doctest::Approx(1.0).epsilon(1e-15));
    auto r2 = chebyshev_points(2);
    CHECK(r2[0] == -1.0);
    CHECK(r2[1] == 1.0);
}

TEST_CASE("fourier point formula") {
    auto t4 = fourier_points(4);
    CHECK(t4[0] == doctest::Approx(-std::numbers::pi));
    CHECK(t4[1] == doctest::Approx(-std::numbers::pi / 2));
    CHECK(t4[2] == doctest::Approx(0.0));
    CHECK(t4[3] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("grid point ordering matches the field layout") {
    GridSpec spec(5, 4, 4);
    auto pts = grid_points(spec);
    REQUIRE(int(pts.size()) == spec.total_points());
    GridField f(spec);
    CHECK(pts[f.index(2, 1, 3)][0] == doctest::Approx(0.0));
    CHECK(pts[f.index(2, 1, 3)][2] == doctest::Approx(std::numbers::pi / 2));
    // strictly increasing r and z, equispaced theta
    auto r = chebyshev_points(spec.m);
    for (size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
    auto th = fourier_points(spec.p);
    for (size_t i = 1; i < th.size(); ++i)
        CHECK(th[i] - th[i - 1] == doctest::Approx(2 * std::numbers::pi / spec.p));
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(GridSpec(3, 8, 8), DomainError);
    CHECK_THROWS_AS(GridSpec(8, 3, 8), DomainError);
    CHECK_THROWS_AS(GridSpec(8, 8, 7), DomainError);  // odd p rejected
    CHECK_NOTHROW(GridSpec(4, 4, 2));
}

TEST_CASE("physical consistency check") {
    GridSpec spec(8, 6, 8);
    GridField ones(spec);
    for (double& v : ones.values) v = 1.0;
    CHECK(check_physical_consistency(ones, 0.0));

    // f(r,z,theta) = r cos(theta) satisfies f(-r, theta+pi) = f(r, theta)
    GridField f = sample(spec, [](double r, double, double th) { return r * std::cos(th); });
    CHECK(check_physical_consistency(f, 1e-14));

    GridField bad = f;
    bad.at(1, 2, 3) += 0.5;
    CHECK_FALSE(check_physical_consistency(bad, 1e-6));

    // r-components of vectors flip sign under the identification
    GridField vr = sample(spec, [](double r, double, double) { return r; });
    CHECK_FALSE(check_physical_consistency(vr, 1e-6));
    CHECK(check_physical_consistency(vr, 1e-14, /*flip_sign=*/true));
}

TEST_CASE("parity projection zeroes mismatched radial/azimuthal parity") {
    GridSpec spec(6, 4, 8);
    const int zero_mode = spec.zero_mode();

    CoeffTensor delta(spec);
    delta.at(0, 0, zero_mode + 1) = 1.0;  // T_0 with wavenumber 1: parity clash
    CHECK(parity_project(delta).max_abs() == 0.0);

    CoeffTensor keep(spec);
    keep.at(1, 0, zero_mode + 1) = 1.0;  // T_1 with wavenumber 1: parities match
    CHECK((parity_project(keep) - keep).max_abs() == 0.0);

    CoeffTensor zero(spec);
    CHECK(parity_project(zero).max_abs() == 0.0);
}

TEST_CASE("parity projection is idempotent and fixes physical fields") {
    GridSpec spec(8, 6, 8);
    GridField f = sample(spec, [](double r, double z, double th) {
        return std::cos(th) * r + z * z + 0.3 * r * r * std::cos(2 * th);
    });
    REQUIRE(check_physical_consistency(f, 1e-13));
    CoeffTensor c = analyze(f);
    CoeffTensor p1 = parity_project(c);
    CoeffTensor p2 = parity_project(p1);
    CHECK((p1 - p2).max_abs() == 0.0);                      // idempotent exactly
    CHECK((p1 - c).max_abs() < 1e-12 * std::max(1.0, c.max_abs()));  // physical fields unchanged
}

TEST_CASE("flipped parity projection keeps the complementary set") {
    GridSpec spec(6, 4, 8);
    CoeffTensor t(spec);
    for (int l = 0; l < spec.p; ++l)
        for (int k = 0; k < spec.n; ++k)
            for (int j = 0; j < spec.m; ++j) t.at(j, k, l) = 1.0;
    auto s = parity_project(t, Parity::scalar);
    auto a = parity_project(t, Parity::azimuthal_flip);
    CHECK((s + a - t).max_abs() == 0.0);
}
