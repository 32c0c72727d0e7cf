#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cylspec/transform.hpp"
#include "cylspec/ultraop.hpp"

using namespace cylspec;

namespace {

// Evaluation oracles for the three polynomial families.
double eval_T(const Eigen::VectorXd& a, double x) {
    double b1 = 0, b2 = 0;
    for (int k = int(a.size()) - 1; k >= 1; --k) {
        const double b = a(k) + 2 * x * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return a(0) + x * b1 - b2;
}

double eval_U(const Eigen::VectorXd& a, double x) {
    double s = 0, u0 = 1, u1 = 2 * x;
    for (int k = 0; k < a.size(); ++k) {
        double u;
        if (k == 0) u = u0;
        else if (k == 1) u = u1;
        else {
            u = 2 * x * u1 - u0;
            u0 = u1;
            u1 = u;
        }
        s += a(k) * u;
    }
    return s;
}

double eval_C2(const Eigen::VectorXd& a, double x) {
    // C2_0 = 1, C2_1 = 4x, (k+1) C2_{k+1} = 2(k+2) x C2_k - (k+3) C2_{k-1}
    double s = 0, c0 = 1, c1 = 4 * x;
    for (int k = 0; k < a.size(); ++k) {
        double c;
        if (k == 0) c = c0;
        else if (k == 1) c = c1;
        else {
            c = (2.0 * (k + 1) * x * c1 - (k + 2) * c0) / double(k);
            c0 = c1;
            c1 = c;
        }
        s += a(k) * c;
    }
    return s;
}

Eigen::VectorXd unit(int n, int k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(k) = 1.0;
    return e;
}

std::vector<double> sample_points(int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(static_cast<size_t>(count), 0.0);
    for (double& v : x) v = dist(rng);
    return x;
}

}  // namespace

TEST_CASE("C01 entries and evaluation equivalence") {
    const int n = 12;
    BandedMatrix c01 = build_conversion_01(n);
    // T_0 = U_0, T_1 = U_1/2, T_2 = (U_2 - U_0)/2
    Eigen::VectorXd e0 = c01.apply(Eigen::VectorXd(unit(n, 0)));
    CHECK(e0(0) == 1.0);
    Eigen::VectorXd e1 = c01.apply(Eigen::VectorXd(unit(n, 1)));
    CHECK(e1(1) == 0.5);
    Eigen::VectorXd e2 = c01.apply(Eigen::VectorXd(unit(n, 2)));
    CHECK(e2(0) == -0.5);
    CHECK(e2(2) == 0.5);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1, 1);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = dist(rng);
    Eigen::VectorXd b = c01.apply(a);
    for (double x : sample_points(50, 2))
        CHECK(eval_T(a, x) == doctest::Approx(eval_U(b, x)).epsilon(1e-12));
}

TEST_CASE("C12 entries pinned to the displayed matrix") {
    const int n = 8;
    BandedMatrix c12 = build_conversion_12(n);
    CHECK(c12.at(0, 0) == 1.0);
    CHECK(c12.at(2, 2) == doctest::Approx(1.0 / 3));
    CHECK(c12.at(0, 2) == doctest::Approx(-1.0 / 3));
    CHECK(c12.at(n - 1, n - 1) == doctest::Approx(1.0 / n));
    // constants agree in both bases
    Eigen::VectorXd e0 = c12.apply(Eigen::VectorXd(unit(n, 0)));
    CHECK(e0(0) == 1.0);
    CHECK(e0.tail(n - 1).cwiseAbs().maxCoeff() == 0.0);
    // evaluation equivalence on random U vectors
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1, 1);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = dist(rng);
    Eigen::VectorXd b = c12.apply(a);
    for (double x : sample_points(50, 6))
        CHECK(eval_U(a, x) == doctest::Approx(eval_C2(b, x)).epsilon(1e-12));
}

TEST_CASE("multiplication matrix R") {
    const int n = 10;
    BandedMatrix r = build_multiplication_r(n);
    CHECK(r.at(1, 0) == doctest::Approx(0.25));
    CHECK(r.at(0, 1) == doctest::Approx(2.0 / 3));
    CHECK(r.at(2, 1) == doctest::Approx(1.0 / 3));
    CHECK(r.at(1, 2) == doctest::Approx(5.0 / 8));
    CHECK(r.at(n - 2, n - 1) == doctest::Approx(double(n + 2) / double(2 * n + 2)));
    CHECK(r.at(n - 1, n - 2) == doctest::Approx(double(n - 1) / double(2 * n)));

    // Gegenbauer recurrence: R e_k evaluates to x C2_k(x) for k <= n-2
    for (int k = 0; k <= n - 2; ++k) {
        Eigen::VectorXd rk = r.apply(Eigen::VectorXd(unit(n, k)));
        for (double x : sample_points(20, unsigned(30 + k)))
            CHECK(eval_C2(rk, x) == doctest::Approx(x * eval_C2(unit(n, k), x)).epsilon(1e-12));
    }
}

TEST_CASE("differentiation matrices") {
    const int n = 11;
    BandedMatrix d1 = build_derivative_1(n);
    BandedMatrix d2 = build_derivative_2(n);
    CHECK(d1.at(0, 1) == 1.0);
    CHECK(d1.at(n - 2, n - 1) == double(n - 1));
    CHECK(d2.at(0, 2) == 4.0);
    CHECK(d2.at(n - 3, n - 1) == double(2 * n - 2));

    Eigen::VectorXd c = d1.apply(Eigen::VectorXd(unit(n, 0)));
    CHECK(c.cwiseAbs().maxCoeff() == 0.0);

    // derivative of a random T series matches a finite-difference oracle
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dist(-1, 1);
    Eigen::VectorXd a(n);
    for (int i = 0; i < n; ++i) a(i) = dist(rng);
    Eigen::VectorXd da = d1.apply(a);
    Eigen::VectorXd dda = d2.apply(a);
    const double h = 1e-6;
    for (double x : sample_points(50, 8)) {
        if (std::abs(x) > 0.98) continue;
        const double fd1 = (eval_T(a, x + h) - eval_T(a, x - h)) / (2 * h);
        CHECK(eval_U(da, x) == doctest::Approx(fd1).epsilon(1e-6));
        const double fd2 =
            (eval_T(a, x + h) - 2 * eval_T(a, x) + eval_T(a, x - h)) / (h * h);
        CHECK(eval_C2(dda, x) == doctest::Approx(fd2).epsilon(1e-3));
    }
}

TEST_CASE("C02 is exactly the product C12 * C01") {
    const UltraOps& ops = UltraOps::get(14);
    BandedMatrix prod = build_conversion_12(14) * build_conversion_01(14);
    CHECK((ops.c02.dense() - prod.dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("modal helmholtz quadruple structure") {
    const int m = 10, n = 9;
    ModalOperator mass = assemble_modal_helmholtz(m, n, 0, 0.0);
    const UltraOps& rops = UltraOps::get(m);
    CHECK((mass.A.dense() - rops.r2.dense()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(mass.C.max_abs() == 0.0);

    // scale=1, wavenumber 2 includes the -4 C02 term
    ModalOperator h2 = assemble_modal_helmholtz(m, n, 2, 1.0);
    ModalOperator h0 = assemble_modal_helmholtz(m, n, 0, 1.0);
    BandedMatrix diff = h0.A - h2.A;  // = -scale*(-4 C02) difference
    CHECK((diff.dense() + 4.0 * rops.c02.dense()).cwiseAbs().maxCoeff() < 1e-14);

    // helmholtz(scale) = mass - scale * poisson, entrywise exactly
    const double s = 0.37;
    ModalOperator h = assemble_modal_helmholtz(m, n, 3, s);
    ModalOperator pois = assemble_modal_poisson(m, n, 3);
    CHECK((h.A.dense() - (mass.A.dense() - s * pois.A.dense())).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((h.C.dense() + s * pois.C.dense()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((h.B.dense() - pois.B.dense()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((h.D.dense() - pois.D.dense()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("helmholtz operator applied to u = 1 represents r^2") {
    // (1 - lap) 1 = 1, and the equation carries an r^2 weight; the output
    // lives in C2(r) x C2(z) coefficients
    const int m = 8, n = 8;
    ModalOperator op = assemble_modal_helmholtz(m, n, 0, 1.0);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(m, n);
    x(0, 0) = 1.0;  // coefficients of u = 1
    Eigen::MatrixXcd y = op.apply(x);
    for (double r : sample_points(15, 3))
        for (double z : sample_points(5, 4)) {
            double acc = 0;
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < n; ++k) {
                    acc += y(j, k).real() * eval_C2(unit(m, j), r) * eval_C2(unit(n, k), z);
                }
            CHECK(acc == doctest::Approx(r * r).epsilon(1e-12));
        }
}

TEST_CASE("poisson operator annihilates the wavenumber-1 mode of r") {
    // r^2 (d_rr + r^-1 d_r - r^-2) r = 0
    const int m = 8, n = 6;
    ModalOperator op = assemble_modal_poisson(m, n, 1);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(m, n);
    x(1, 0) = 1.0;  // T_1(r) = r
    CHECK(op.apply(x).cwiseAbs().maxCoeff() < 1e-15);
    // zero in, zero out
    CHECK(op.apply(Eigen::MatrixXcd::Zero(m, n)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("poisson operator matches the analytic laplacian of 1 - r^2") {
    // lap(1-r^2) = -4, so A X B + C X D must equal R2 * coeffs(-4) * C02^T
    const int m = 10, n = 8;
    ModalOperator op = assemble_modal_poisson(m, n, 0);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(m, n);
    x(0, 0) = 0.5;   // 1 - r^2 = T_0/2 - T_2/2... wait: 1-r^2 = 1 - (T_0+T_2)/2 = T_0/2 - T_2/2
    x(2, 0) = -0.5;
    Eigen::MatrixXcd lhs = op.apply(x);
    const UltraOps& rops = UltraOps::get(m);
    const UltraOps& zops = UltraOps::get(n);
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(m, n);
    f(0, 0) = -4.0;
    Eigen::MatrixXcd rhs = zops.c02.transposed().apply_right(rops.r2.apply_left(f));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("dirichlet recombination spans boundary-vanishing polynomials") {
    const int n = 9;
    BandedMatrix s = dirichlet_recombination(n);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-1, 1);
    Eigen::VectorXd y(n - 2);
    for (int i = 0; i < n - 2; ++i) y(i) = dist(rng);
    Eigen::VectorXd a = s.apply(y);
    CHECK(eval_T(a, 1.0) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(eval_T(a, -1.0) == doctest::Approx(0.0).epsilon(1e-13));
}
