#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cylspec/adi.hpp"
#include "cylspec/coeffs.hpp"
#include "cylspec/ultraop.hpp"

using namespace cylspec;

namespace {

BandedMatrix diag_matrix(const std::vector<double>& d) {
    BandedMatrix m(int(d.size()), int(d.size()));
    for (int i = 0; i < int(d.size()); ++i) m.set(i, i, d[size_t(i)]);
    return m;
}

// Recombined modal Helmholtz quadruple (the form the solver feeds to ADI).
SylvesterProblem helmholtz_problem(int m, int n, int w, double scale, unsigned seed) {
    ModalOperator op = assemble_modal_helmholtz(m, n, w, scale);
    SylvesterProblem p;
    p.A = recombine(op.A);
    p.C = recombine(op.C);
    p.B = recombine(op.B.transposed()).transposed();
    p.D = recombine(op.D.transposed()).transposed();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    p.E = Eigen::MatrixXcd(m - 2, n - 2);
    for (int j = 0; j < m - 2; ++j)
        for (int k = 0; k < n - 2; ++k) p.E(j, k) = Complex(dist(rng), dist(rng));
    return p;
}

ShiftPlan plan_for(const SylvesterProblem& p, double tol) {
    auto ca = spectral_bounds(p.A, p.C);
    BandedMatrix negD = p.D.transposed();
    negD *= -1.0;
    auto db = spectral_bounds(negD, p.B.transposed());
    return compute_shifts(ca, db, tol);
}

}  // namespace

TEST_CASE("spectral bounds on simple pencils") {
    // A = 2C -> spectrum {2}
    std::vector<double> dc{1, 2, 3, 4, 5};
    BandedMatrix c = diag_matrix(dc);
    BandedMatrix a = c;
    a *= 2.0;
    auto [lo, hi] = spectral_bounds(a, c);
    CHECK(lo == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(hi == doctest::Approx(2.0).epsilon(1e-6));

    // A = diag(1..5), C = I -> [1, 5]
    auto [lo2, hi2] = spectral_bounds(diag_matrix(dc), BandedMatrix::identity(5));
    CHECK(lo2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(hi2 == doctest::Approx(5.0).epsilon(1e-6));

    BandedMatrix sing(3, 3);
    sing.set(0, 0, 1.0);
    sing.set(1, 1, 1.0);
    CHECK_THROWS_AS(spectral_bounds(BandedMatrix::identity(3), sing),
                    SingularOperatorError);
}

TEST_CASE("spectral bounds enclose the dense eigenvalues of a Helmholtz pencil") {
    SylvesterProblem p = helmholtz_problem(16, 16, 1, 4.8e-3, 1);
    auto [lo, hi] = spectral_bounds(p.A, p.C);
    // oracle: eigenvalues of dense C^-1 A
    Eigen::MatrixXd ca = p.C.dense().partialPivLu().solve(p.A.dense());
    Eigen::EigenSolver<Eigen::MatrixXd> es(ca);
    for (int i = 0; i < ca.rows(); ++i) {
        CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-6 * std::abs(es.eigenvalues()(i)));
        CHECK(es.eigenvalues()(i).real() >= lo);
        CHECK(es.eigenvalues()(i).real() <= hi);
    }
    // gershgorin fallback must contain the certified interval
    auto [glo, ghi] = spectral_bounds_gershgorin(p.A, p.C);
    CHECK(glo <= lo + 1e-9);
    CHECK(ghi >= hi - 1e-9);
}

TEST_CASE("shift plan quantities") {
    // cross ratio by direct substitution
    ShiftPlan plan = compute_shifts({1.0, 2.0}, {3.0, 4.0}, 1e-8);
    CHECK(plan.gamma_cr == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(plan.alpha_z ==
          doctest::Approx(-1 + 2 * plan.gamma_cr +
                          2 * std::sqrt(plan.gamma_cr * plan.gamma_cr - plan.gamma_cr)));
    CHECK(plan.J == int(std::ceil(std::log(16 * plan.gamma_cr) * std::log(4.0 / 1e-8) /
                                  (M_PI * M_PI))));

    // symmetric intervals give u = -v
    ShiftPlan sym = compute_shifts({-4.0, -2.0}, {2.0, 4.0}, 1e-12);
    REQUIRE(sym.u.size() == sym.v.size());
    for (size_t i = 0; i < sym.u.size(); ++i)
        CHECK(sym.u[i] == doctest::Approx(-sym.v[i]).epsilon(1e-11));
    // shifts live inside the spectral intervals
    for (double u : sym.u) {
        CHECK(u >= -4.0 - 1e-9);
        CHECK(u <= -2.0 + 1e-9);
    }

    // J grows as tol tightens
    CHECK(compute_shifts({-4, -2}, {2, 4}, 1e-12).J >
          compute_shifts({-4, -2}, {2, 4}, 1e-1).J);

    CHECK_THROWS_AS(compute_shifts({0.0, 2.0}, {1.0, 3.0}, 1e-8), DomainError);
}

TEST_CASE("dense oracle basics") {
    SylvesterProblem p;
    p.A = BandedMatrix::identity(3);
    p.B = BandedMatrix::identity(4);
    p.C = BandedMatrix(3, 3);
    p.D = BandedMatrix(4, 4);
    p.E = Eigen::MatrixXcd::Random(3, 4);
    // A = B = I, C*D = 0 -> X = E
    CHECK((dense_sylvester_oracle(p) - p.E).cwiseAbs().maxCoeff() < 1e-13);

    p.E.setZero();
    CHECK(dense_sylvester_oracle(p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adi solves the 1x1 equation exactly") {
    SylvesterProblem p;
    p.A = BandedMatrix(1, 1);
    p.A.set(0, 0, 3.0);
    p.B = BandedMatrix(1, 1);
    p.B.set(0, 0, 2.0);
    p.C = BandedMatrix(1, 1);
    p.C.set(0, 0, -1.0);
    p.D = BandedMatrix(1, 1);
    p.D.set(0, 0, 5.0);
    p.E = Eigen::MatrixXcd::Constant(1, 1, Complex(7.0, 0.0));
    // spectra: C^-1 A = {-3}, -D B^-1 = {-2.5}; any enclosing disjoint
    // intervals are valid bounds
    ShiftPlan plan = compute_shifts({-3.1, -2.9}, {-2.6, -2.4}, 1e-13);
    Eigen::MatrixXcd x = adi_solve(p, plan);
    CHECK(std::abs(x(0, 0) - Complex(7.0 / (3.0 * 2.0 + (-1.0) * 5.0), 0)) < 1e-10);
}

TEST_CASE("adi zero right-hand side returns exactly zero") {
    SylvesterProblem p = helmholtz_problem(8, 8, 0, 1e-2, 3);
    p.E.setZero();
    ShiftPlan plan = plan_for(p, 1e-12);
    CHECK(adi_solve(p, plan).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adi matches the dense oracle on seeded Helmholtz problems") {
    int checked = 0;
    for (int m : {8, 16, 24}) {
        for (unsigned seed = 0; seed < 3; ++seed) {
            SylvesterProblem p = helmholtz_problem(m, m, int(seed), 4.8e-3, seed + 10);
            ShiftPlan plan = plan_for(p, 1e-12);
            Eigen::MatrixXcd x = adi_solve(p, plan);
            Eigen::MatrixXcd ref = dense_sylvester_oracle(p);
            const double rel = (x - ref).norm() / ref.norm();
            CHECK(rel < 1e-10);
            ++checked;
        }
    }
    CHECK(checked == 9);
}

TEST_CASE("adi residual decays monotonically in the history sense") {
    SylvesterProblem p = helmholtz_problem(16, 16, 2, 4.8e-3, 5);
    // deliberately loose tolerance so several rounds are recorded
    ShiftPlan plan = plan_for(p, 1e-12);
    AdiResult res = adi_solve_detailed(p, plan);
    CHECK(res.converged);
    CHECK(res.residual_history.back() <= 1e-12);
}

TEST_CASE("adi is deterministic") {
    SylvesterProblem p = helmholtz_problem(12, 12, 1, 1e-2, 8);
    ShiftPlan plan = plan_for(p, 1e-12);
    Eigen::MatrixXcd x1 = adi_solve(p, plan);
    Eigen::MatrixXcd x2 = adi_solve(p, plan);
    CHECK((x1 - x2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("iteration count grows like log(mn)") {
    std::vector<double> c0;
    for (int m : {8, 16, 32, 64}) {
        SylvesterProblem p = helmholtz_problem(m, m, 0, 4.8e-3, 42);
        ShiftPlan plan = plan_for(p, 1e-12);
        c0.push_back(double(plan.J) / std::log(double(m) * double(m)));
    }
    const auto [mn, mx] = std::minmax_element(c0.begin(), c0.end());
    CHECK(*mx / *mn <= 2.0);
}
