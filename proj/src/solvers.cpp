#include "cylspec/solvers.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace cylspec {

namespace {

// Generalized spectra of the recombined 1-D pencils. The radial pencil
// (L_w, R2) depends on (m, w^2) only and the vertical pencil (-D2, C02)
// on n only, so both are cached; Helmholtz bounds follow by the exact
// shift eig(C^-1 A) = -1/scale + eig(R2^-1 L_w).
std::pair<double, double> radial_pencil_range(int m, int wavenumber) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::pair<double, double>> cache;
    const int w2 = wavenumber * wavenumber;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({m, w2});
    if (it != cache.end()) return it->second;
    const UltraOps& ops = UltraOps::get(m);
    const BandedMatrix lw = recombine(radial_modal_laplacian(m, wavenumber));
    const BandedMatrix r2 = recombine(ops.r2);
    auto range = spectral_bounds(lw, r2);
    cache[{m, w2}] = range;
    return range;
}

std::pair<double, double> vertical_pencil_range(int n) {
    static std::mutex mutex;
    static std::map<int, std::pair<double, double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const UltraOps& ops = UltraOps::get(n);
    BandedMatrix negd2 = recombine(ops.d2);
    negd2 *= -1.0;
    auto range = spectral_bounds(negd2, recombine(ops.c02));
    cache[n] = range;
    return range;
}

}  // namespace

ModalSolver::ModalSolver(int m, int n, int wavenumber, double scale, bool poisson,
                         double tol) {
    op_ = poisson ? assemble_modal_poisson(m, n, wavenumber)
                  : assemble_modal_helmholtz(m, n, wavenumber, scale);
    shape_.A = recombine(op_.A);
    shape_.B = recombine(op_.B.transposed()).transposed();
    shape_.C = recombine(op_.C);
    shape_.D = recombine(op_.D.transposed()).transposed();
    shape_.E = Eigen::MatrixXcd::Zero(m - 2, n - 2);
    recomb_r_ = dirichlet_recombination(m);
    recomb_z_ = dirichlet_recombination(n);

    const bool mass_only = !poisson && scale == 0.0;
    if (mass_only) {
        mass_lu_r_ = std::make_unique<BandedLU>(shape_.A);
        mass_lu_zt_ = std::make_unique<BandedLU>(shape_.B.transposed());
        return;
    }

    const auto [mu_lo, mu_hi] = radial_pencil_range(m, wavenumber);
    std::pair<double, double> ca;
    if (poisson) {
        ca = {mu_lo, mu_hi};
    } else {
        ca = {-1.0 / scale + mu_lo, -1.0 / scale + mu_hi};
    }
    const auto cd = vertical_pencil_range(n);
    plan_ = compute_shifts(ca, cd, tol);
    adi_ = std::make_unique<AdiWorkspace>(shape_, *plan_);
}

Eigen::MatrixXcd ModalSolver::solve(const Eigen::MatrixXcd& f_full) const {
    const int m = op_.m, n = op_.n;
    if (f_full.rows() != m || f_full.cols() != n)
        throw DomainError("ModalSolver::solve: right-hand side has wrong shape");
    const Eigen::MatrixXcd f = f_full.topLeftCorner(m - 2, n - 2);
    Eigen::MatrixXcd y;
    if (mass_lu_r_) {
        y = f;
        mass_lu_r_->solve_in_place(y);
        Eigen::MatrixXcd yt = y.transpose();
        mass_lu_zt_->solve_in_place(yt);
        y = yt.transpose();
        SylvesterProblem check = shape_;
        check.E = f;
        last_residual_ = sylvester_residual(check, y);
    } else {
        AdiResult res = adi_->solve(f);
        y = std::move(res.X);
        last_residual_ = res.residual_history.back();
    }
    return recomb_z_.transposed().apply_right(recomb_r_.apply_left(y));
}

const ModalSolver& ModalSolverCache::get(int wavenumber, double scale,
                                         bool poisson) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(wavenumber * wavenumber, scale, poisson);
    auto& slot = cache_[key];
    if (!slot)
        slot = std::make_unique<ModalSolver>(m_, n_, std::abs(wavenumber), scale, poisson,
                                             tol_);
    return *slot;
}

namespace {

Eigen::MatrixXcd lift_slice_for(const ModalOperator& op, const BoundaryCondition& bc,
                                int slice_index) {
    if (!bc.lift)
        throw DomainError("BoundaryCondition: lifted kind without lift data");
    const CoeffTensor& lift = *bc.lift;
    if (lift.spec.m != op.m || lift.spec.n != op.n)
        throw DomainError("BoundaryCondition: lift tensor has wrong dimensions");
    if (slice_index < 0 || slice_index >= lift.spec.p)
        throw DomainError("BoundaryCondition: lift tensor misses the requested mode");
    return lift.slice(slice_index);
}

}  // namespace

Eigen::MatrixXcd solve_modal_helmholtz(const ModalOperator& op, const Eigen::MatrixXcd& f,
                                       const BoundaryCondition& bc, double tol) {
    ModalSolver solver(op.m, op.n, op.wavenumber, op.scale, /*poisson=*/false, tol);
    Eigen::MatrixXcd rhs = f;
    Eigen::MatrixXcd lift;
    if (bc.kind == BoundaryCondition::Kind::dirichlet_lifted) {
        const int slice_index = op.wavenumber + bc.lift->spec.p / 2;
        lift = lift_slice_for(op, bc, slice_index);
        rhs -= op.apply(lift);
    }
    Eigen::MatrixXcd x = solver.solve(rhs);
    if (lift.size() > 0) x += lift;
    return x;
}

CoeffTensor solve_poisson_3d(const CoeffTensor& f, const BoundaryCondition& bc,
                             const ModalSolverCache& cache) {
    const GridSpec& spec = f.spec;
    if (!f.all_finite()) throw NumericalError("solve_poisson_3d: non-finite right-hand side");
    if (cache.m() != spec.m || cache.n() != spec.n)
        throw DomainError("solve_poisson_3d: cache size mismatch");
    const UltraOps& rops = UltraOps::get(spec.m);
    const UltraOps& zops = UltraOps::get(spec.n);
    const BandedMatrix c02t = zops.c02.transposed();

    CoeffTensor rhs = parity_project(f);
    CoeffTensor out(spec);
    for (int l = 0; l < spec.p; ++l) {
        const int w = spec.wavenumber(l);
        const ModalSolver& solver = cache.get(w, 1.0, /*poisson=*/true);
        Eigen::MatrixXcd fl = rhs.slice(l);
        Eigen::MatrixXcd lift;
        if (bc.kind == BoundaryCondition::Kind::dirichlet_lifted)
            lift = lift_slice_for(solver.raw(), bc, l);
        Eigen::MatrixXcd ff = c02t.apply_right(rops.r2.apply_left(fl));
        if (lift.size() > 0) ff -= solver.raw().apply(lift);
        Eigen::MatrixXcd x = solver.solve(ff);
        if (lift.size() > 0) x += lift;
        out.slice(l) = x;
    }
    parity_project_in_place(out);
    return out;
}

CoeffTensor solve_poisson_3d(const CoeffTensor& f, const BoundaryCondition& bc,
                             double tol) {
    ModalSolverCache cache(f.spec.m, f.spec.n, tol);
    return solve_poisson_3d(f, bc, cache);
}

CoeffTensor solve_horizontal_poisson(const CoeffTensor& rhs_in) {
    const GridSpec& spec = rhs_in.spec;
    if (!rhs_in.all_finite())
        throw NumericalError("solve_horizontal_poisson: non-finite right-hand side");
    const UltraOps& ops = UltraOps::get(spec.m);
    const BandedMatrix r2c02 = ops.r * ops.r * ops.c02;
    const BandedMatrix recomb = dirichlet_recombination(spec.m);

    CoeffTensor rhs = parity_project(rhs_in);
    CoeffTensor out(spec);
    for (int l = 0; l < spec.p; ++l) {
        const int w = spec.wavenumber(l);
        const BandedMatrix lred = recombine(radial_modal_laplacian(spec.m, w));
        BandedLU lu;
        try {
            lu.factorize(lred);
        } catch (const SingularOperatorError&) {
            throw SingularOperatorError("solve_horizontal_poisson: singular column system");
        }
        Eigen::MatrixXcd cols = r2c02.apply_left(Eigen::MatrixXcd(rhs.slice(l)));
        Eigen::MatrixXcd reduced = cols.topRows(spec.m - 2);
        lu.solve_in_place(reduced);
        out.slice(l) = recomb.apply_left(reduced);
    }
    parity_project_in_place(out);
    return out;
}

}  // namespace cylspec
