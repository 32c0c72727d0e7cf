#include "cylspec/adi.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>

#include "cylspec/special.hpp"

namespace cylspec {

void SylvesterProblem::check_dimensions() const {
    const int m = A.rows(), n = B.rows();
    if (A.cols() != m || C.rows() != m || C.cols() != m)
        throw DomainError("SylvesterProblem: A/C must be square and equal-sized");
    if (B.cols() != n || D.rows() != n || D.cols() != n)
        throw DomainError("SylvesterProblem: B/D must be square and equal-sized");
    if (E.rows() != m || E.cols() != n)
        throw DomainError("SylvesterProblem: E must be m x n");
}

std::pair<double, double> spectral_bounds(const BandedMatrix& A, const BandedMatrix& C) {
    if (A.rows() != A.cols() || C.rows() != C.cols() || A.rows() != C.rows())
        throw DomainError("spectral_bounds: square equal-sized matrices required");
    Eigen::MatrixXd a = A.dense(), c = C.dense();
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
    ges.compute(a, c, /*computeEigenvectors=*/false);
    const auto alphas = ges.alphas();
    const auto betas = ges.betas();
    double beta_max = 0.0;
    for (Eigen::Index i = 0; i < betas.size(); ++i)
        beta_max = std::max(beta_max, std::abs(betas(i)));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double radius = 0.0, worst_imag = 0.0;
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        if (std::abs(betas(i)) <= 1e-13 * beta_max)
            throw SingularOperatorError("spectral_bounds: infinite eigenvalue (singular C)");
        const std::complex<double> lam = alphas(i) / betas(i);
        radius = std::max(radius, std::abs(lam));
        worst_imag = std::max(worst_imag, std::abs(lam.imag()));
        lo = std::min(lo, lam.real());
        hi = std::max(hi, lam.real());
    }
    if (worst_imag > 1e-6 * radius)
        throw NumericalError("spectral_bounds: spectrum of C^-1 A is not real");
    const double pad = 1e-8 * std::max(1.0, hi - lo) + 1e-12 * radius;
    return {lo - pad, hi + pad};
}

std::pair<double, double> spectral_bounds_gershgorin(const BandedMatrix& A,
                                                     const BandedMatrix& C) {
    const int n = A.rows();
    BandedLU luC(C);
    Eigen::MatrixXd m = A.dense();
    luC.solve_in_place(m);  // m = C^-1 A
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) radius += std::abs(m(i, j));
        lo = std::min(lo, m(i, i) - radius);
        hi = std::max(hi, m(i, i) + radius);
    }
    return {lo, hi};
}

ShiftPlan compute_shifts(std::pair<double, double> bounds_ca,
                         std::pair<double, double> bounds_db, double tol) {
    ShiftPlan plan;
    plan.a = bounds_ca.first;
    plan.b = bounds_ca.second;
    plan.c = bounds_db.first;
    plan.d = bounds_db.second;
    plan.tol = tol;
    const bool disjoint = plan.b < plan.c || plan.d < plan.a;
    if (!disjoint)
        throw DomainError("compute_shifts: spectral intervals overlap");
    if (!(tol > 0.0) || tol >= 1.0)
        throw DomainError("compute_shifts: tol must be in (0,1)");

    plan.gamma_cr = std::abs(plan.c - plan.a) * std::abs(plan.d - plan.b) /
                    (std::abs(plan.c - plan.b) * std::abs(plan.d - plan.a));
    const double g = plan.gamma_cr;
    plan.alpha_z = -1.0 + 2.0 * g + 2.0 * std::sqrt(g * g - g);
    const double alpha = plan.alpha_z;
    const double kprime = 1.0 / alpha;  // k = sqrt(1 - 1/alpha^2) via complement
    plan.modulus = std::sqrt(std::max(0.0, (1.0 - kprime) * (1.0 + kprime)));
    plan.J = std::max(1, int(std::ceil(std::log(16.0 * g) * std::log(4.0 / tol) /
                                       (std::numbers::pi * std::numbers::pi))));

    const double K = elliptic_K_from_kprime(kprime);
    const MobiusMap T = mobius_from_points({-alpha, -1.0, 1.0, alpha},
                                           {plan.a, plan.b, plan.c, plan.d});
    plan.u.resize(size_t(plan.J));
    plan.v.resize(size_t(plan.J));
    for (int j = 0; j < plan.J; ++j) {
        const double arg = (2.0 * j + 1.0) / (2.0 * plan.J) * K;
        const double dn = jacobi_elliptic_from_kprime(arg, kprime).dn;
        plan.u[size_t(j)] = T(-alpha * dn);
        plan.v[size_t(j)] = T(alpha * dn);
    }
    return plan;
}

double sylvester_residual(const SylvesterProblem& p, const Eigen::MatrixXcd& x) {
    Eigen::MatrixXcd r = p.B.apply_right(p.A.apply_left(x));
    r += p.D.apply_right(p.C.apply_left(x));
    r -= p.E;
    const double en = p.E.norm();
    return en > 0.0 ? r.norm() / en : r.norm();
}

AdiWorkspace::AdiWorkspace(const SylvesterProblem& shape, const ShiftPlan& plan)
    : plan_(plan), A_(shape.A), B_(shape.B), C_(shape.C), D_(shape.D) {
    shape.check_dimensions();
    if (int(plan.u.size()) != plan.J || int(plan.v.size()) != plan.J)
        throw DomainError("AdiWorkspace: malformed shift plan");
    luBt_.factorize(B_.transposed());
    try {
        luC_.factorize(C_);
    } catch (const SingularOperatorError&) {
        throw SingularOperatorError("AdiWorkspace: C is singular; ADI needs invertible C");
    }
    // Convergent role assignment: the (C,A)-side inverse is shifted by the
    // [c,d] points (v_j), the (B,D)-side inverse by the [a,b] points (u_j);
    // the complementary shift appears on the multiply side of each half step.
    lu_shiftA_.reserve(size_t(plan.J));
    lu_shiftBt_.reserve(size_t(plan.J));
    for (int j = 0; j < plan.J; ++j) {
        BandedMatrix shifted = C_;
        shifted *= plan.v[size_t(j)];
        shifted -= A_;
        try {
            lu_shiftA_.emplace_back(shifted);
        } catch (const SingularOperatorError&) {
            throw SingularOperatorError("ADI: singular (v_j C - A)", j);
        }
        BandedMatrix ubd = B_;
        ubd *= plan.u[size_t(j)];
        ubd += D_;
        try {
            lu_shiftBt_.emplace_back(ubd.transposed());
        } catch (const SingularOperatorError&) {
            throw SingularOperatorError("ADI: singular (u_j B + D)", j);
        }
    }
}

AdiResult AdiWorkspace::solve(const Eigen::MatrixXcd& e) const {
    const int m = A_.rows(), n = B_.rows();
    if (e.rows() != m || e.cols() != n) throw DomainError("AdiWorkspace::solve: bad E");

    SylvesterProblem prob{A_, B_, C_, D_, e};
    AdiResult res;
    res.X = Eigen::MatrixXcd::Zero(m, n);
    const double enorm = e.norm();
    if (enorm == 0.0) {
        res.residual_history.push_back(0.0);
        return res;  // X = 0 exactly
    }

    const int J = plan_.J;
    const int max_rounds = 4;
    for (int round = 0; round < max_rounds; ++round) {
        for (int j = 0; j < J; ++j) {
            // (v_j C - A) X' B = C X (v_j B + D) - E
            Eigen::MatrixXcd cx = C_.apply_left(res.X);
            Eigen::MatrixXcd rhs =
                plan_.v[size_t(j)] * B_.apply_right(cx) + D_.apply_right(cx);
            rhs -= e;
            lu_shiftA_[size_t(j)].solve_in_place(rhs);  // rhs := (v_j C - A)^-1 rhs
            Eigen::MatrixXcd xt = rhs.transpose();
            luBt_.solve_in_place(xt);  // solve X' B = rhs  via  B^T X'^T = rhs^T
            Eigen::MatrixXcd xh = xt.transpose();

            // C X'' (u_j B + D) = (u_j C - A) X' B + E
            Eigen::MatrixXcd cxh = C_.apply_left(xh);
            Eigen::MatrixXcd axh = A_.apply_left(xh);
            Eigen::MatrixXcd rhs2 =
                B_.apply_right(Eigen::MatrixXcd(plan_.u[size_t(j)] * cxh - axh));
            rhs2 += e;
            luC_.solve_in_place(rhs2);
            Eigen::MatrixXcd x2t = rhs2.transpose();
            lu_shiftBt_[size_t(j)].solve_in_place(x2t);
            res.X = x2t.transpose();
        }
        res.iterations += J;
        const double rel = sylvester_residual(prob, res.X);
        res.residual_history.push_back(rel);
        if (rel <= plan_.tol) return res;
    }
    const double final_rel = res.residual_history.back();
    if (final_rel > 10.0 * plan_.tol) {
        res.converged = false;
        throw NonConvergenceError(
            "ADI did not converge: relative residual " + std::to_string(final_rel) +
                " after " + std::to_string(res.iterations) + " iterations",
            res.residual_history);
    }
    return res;
}

AdiResult adi_solve_detailed(const SylvesterProblem& problem, const ShiftPlan& plan) {
    problem.check_dimensions();
    AdiWorkspace ws(problem, plan);
    return ws.solve(problem.E);
}

Eigen::MatrixXcd adi_solve(const SylvesterProblem& problem, const ShiftPlan& plan) {
    return adi_solve_detailed(problem, plan).X;
}

Eigen::MatrixXcd dense_sylvester_oracle(const SylvesterProblem& p) {
    p.check_dimensions();
    const int m = p.A.rows(), n = p.B.rows();
    if (long(m) * n > 4096)
        throw DomainError("dense_sylvester_oracle: m*n exceeds the 4096 guard");
    const Eigen::MatrixXd a = p.A.dense(), b = p.B.dense(), c = p.C.dense(), d = p.D.dense();
    const long mn = long(m) * n;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(mn, mn);
    // vec(A X B) = (B^T kron A) vec X ; B is stored pre-transposed, so the
    // Kronecker factor is B_stored^T.
    for (int jb = 0; jb < n; ++jb)
        for (int ib = 0; ib < n; ++ib) {
            const double wb = b(ib, jb);  // (B^T)(jb, ib)
            const double wd = d(ib, jb);
            if (wb == 0.0 && wd == 0.0) continue;
            k.block(long(jb) * m, long(ib) * m, m, m) += wb * a + wd * c;
        }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
    // Guard against a numerically singular Kronecker system.
    const Eigen::MatrixXd& lum = lu.matrixLU();
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (long i = 0; i < mn; ++i) {
        const double v = std::abs(lum(i, i));
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
    }
    if (dmin == 0.0 || dmin < 1e-14 * dmax)
        throw SingularOperatorError("dense_sylvester_oracle: singular system");

    Eigen::VectorXd vr(mn), vi(mn);
    for (int jcol = 0; jcol < n; ++jcol)
        for (int irow = 0; irow < m; ++irow) {
            vr(size_t(jcol) * m + irow) = p.E(irow, jcol).real();
            vi(size_t(jcol) * m + irow) = p.E(irow, jcol).imag();
        }
    const Eigen::VectorXd xr = lu.solve(vr), xi = lu.solve(vi);
    Eigen::MatrixXcd x(m, n);
    for (int jcol = 0; jcol < n; ++jcol)
        for (int irow = 0; irow < m; ++irow)
            x(irow, jcol) = std::complex<double>(xr(size_t(jcol) * m + irow), xi(size_t(jcol) * m + irow));
    return x;
}

}  // namespace cylspec
