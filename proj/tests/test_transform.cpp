#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "cylspec/transform.hpp"

using namespace cylspec;

namespace {

GridField random_physical_field(const GridSpec& spec, unsigned seed) {
    // random low-order smooth function of (x, y, z): automatically satisfies
    // the doubled-point identification
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<double, 10> c;
    for (double& v : c) v = dist(rng);
    return sample(spec, [&](double r, double z, double th) {
        const double x = r * std::cos(th), y = r * std::sin(th);
        return c[0] + c[1] * x + c[2] * y + c[3] * z + c[4] * x * y + c[5] * x * z +
               c[6] * y * z + c[7] * (x * x - y * y) + c[8] * z * z + c[9] * x * y * z;
    });
}

}  // namespace

TEST_CASE("analyze of simple fields") {
    GridSpec spec(6, 5, 8);
    const int zm = spec.zero_mode();

    GridField ones(spec);
    for (double& v : ones.values) v = 1.0;
    CoeffTensor c = analyze(ones);
    CHECK(std::abs(c.at(0, 0, zm) - Complex(1, 0)) < 1e-14);
    c.at(0, 0, zm) = 0;
    CHECK(c.max_abs() < 1e-14);

    GridField fr = sample(spec, [](double r, double, double) { return r; });
    CoeffTensor cr = analyze(fr);
    CHECK(std::abs(cr.at(1, 0, zm) - Complex(1, 0)) < 1e-14);
    cr.at(1, 0, zm) = 0;
    CHECK(cr.max_abs() < 1e-14);

    // z^2 = (T_0(z) + T_2(z)) / 2
    GridField fz2 = sample(spec, [](double, double z, double) { return z * z; });
    CoeffTensor cz = analyze(fz2);
    CHECK(std::abs(cz.at(0, 0, zm) - Complex(0.5, 0)) < 1e-14);
    CHECK(std::abs(cz.at(0, 2, zm) - Complex(0.5, 0)) < 1e-14);
    cz.at(0, 0, zm) = cz.at(0, 2, zm) = 0;
    CHECK(cz.max_abs() < 1e-14);
}

TEST_CASE("analyze rejects non-finite values") {
    GridSpec spec(4, 4, 4);
    GridField f(spec);
    f.values[3] = std::nan("");
    CHECK_THROWS_AS(analyze(f), NumericalError);
}

TEST_CASE("synthesize of simple tensors") {
    GridSpec spec(6, 5, 8);
    CoeffTensor zero(spec);
    CHECK(synthesize(zero).max_abs() == 0.0);

    CoeffTensor dr(spec);
    dr.at(1, 0, spec.zero_mode()) = 1.0;
    GridField f = synthesize(dr);
    auto pts = grid_points(spec);
    for (size_t i = 0; i < f.values.size(); ++i)
        CHECK(f.values[i] == doctest::Approx(pts[i][0]).epsilon(1e-13));
}

TEST_CASE("round trip on random physically consistent fields") {
    GridSpec spec(16, 16, 16);
    for (unsigned seed = 0; seed < 5; ++seed) {
        GridField f = random_physical_field(spec, seed);
        GridField g = synthesize(analyze(f));
        double err = 0;
        for (size_t i = 0; i < f.values.size(); ++i)
            err = std::max(err, std::abs(f.values[i] - g.values[i]));
        CHECK(err <= 1e-12 * std::max(1.0, f.max_abs()));
    }
}

TEST_CASE("round trip through synthesize-then-analyze on random tensors") {
    GridSpec spec(8, 8, 8);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    // random Hermitian-symmetric tensor representing a real field
    CoeffTensor t(spec);
    const int half = spec.p / 2;
    for (int l = half; l < spec.p; ++l)
        for (int k = 0; k < spec.n; ++k)
            for (int j = 0; j < spec.m; ++j) {
                const Complex v(dist(rng), l == half ? 0.0 : dist(rng));
                t.at(j, k, l) = v;
                const int lp = 2 * half - l;
                if (lp >= 0 && lp < spec.p) t.at(j, k, lp) = std::conj(v);
            }
    // zero the unpaired Nyquist slice's imaginary part is already handled;
    // l = 0 carries wavenumber -p/2 with no partner: make it real
    for (int k = 0; k < spec.n; ++k)
        for (int j = 0; j < spec.m; ++j) t.at(j, k, 0) = t.at(j, k, 0).real();

    CoeffTensor back = analyze(synthesize(t));
    CHECK((back - t).max_abs() < 1e-12 * std::max(1.0, t.max_abs()));
}

TEST_CASE("linearity of analyze") {
    GridSpec spec(8, 8, 8);
    GridField f = random_physical_field(spec, 1);
    GridField g = random_physical_field(spec, 2);
    GridField mix(spec);
    const double al = 0.7, be = -1.3;
    for (size_t i = 0; i < mix.values.size(); ++i)
        mix.values[i] = al * f.values[i] + be * g.values[i];
    CoeffTensor lhs = analyze(mix);
    CoeffTensor rhs = Complex(al) * analyze(f) + Complex(be) * analyze(g);
    CHECK((lhs - rhs).max_abs() < 1e-13 * std::max(1.0, lhs.max_abs()));
}

TEST_CASE("hermitian symmetry after analyze of a real field") {
    GridSpec spec(8, 6, 12);
    GridField f = random_physical_field(spec, 3);
    CHECK(hermitian_symmetry_error(analyze(f)) < 1e-14);
}

TEST_CASE("evaluate_at agrees with synthesize at grid points") {
    GridSpec spec(7, 6, 8);
    GridField f = random_physical_field(spec, 4);
    CoeffTensor c = analyze(f);
    GridField s = synthesize(c);
    auto pts = grid_points(spec);
    for (size_t i = 0; i < pts.size(); i += 17) {
        Complex v = evaluate_at(c, pts[i][0], pts[i][1], pts[i][2]);
        CHECK(std::abs(v - Complex(s.values[i], 0)) < 1e-12);
    }
}

TEST_CASE("evaluate_at on constants and products") {
    GridSpec spec(6, 6, 8);
    CoeffTensor c(spec);
    c.at(0, 0, spec.zero_mode()) = 1.0;
    CHECK(std::abs(evaluate_at(c, 0.37, -0.9, 2.1) - Complex(1, 0)) < 1e-15);

    GridField f = sample(spec, [](double r, double z, double) { return r * z; });
    CoeffTensor crz = analyze(f);
    CHECK(std::abs(evaluate_at(crz, 0.3, -0.5, 1.0) - Complex(-0.15, 0)) < 1e-13);
}

TEST_CASE("analyze runtime scales quasi-optimally" * doctest::skip(false)) {
    // slope of log(time) vs log(N log N) over N = 16^3, 32^3, 64^3
    std::vector<double> sizes, times;
    for (int s : {16, 32, 64}) {
        GridSpec spec(s, s, s);
        GridField f = random_physical_field(spec, 100 + unsigned(s));
        analyze(f);  // warm the plan cache
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            CoeffTensor c = analyze(f);
            auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        const double n = double(spec.total_points());
        sizes.push_back(std::log(n * std::log(n)));
        times.push_back(std::log(best));
    }
    // least-squares slope
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int npts = int(sizes.size());
    for (int i = 0; i < npts; ++i) {
        sx += sizes[i];
        sy += times[i];
        sxx += sizes[i] * sizes[i];
        sxy += sizes[i] * times[i];
    }
    const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
    CHECK(slope <= 1.25);
}
