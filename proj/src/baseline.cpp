#include "cylspec/baseline.hpp"

#include <fftw3.h>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <map>

#include "cylspec/timestep.hpp"

namespace cylspec {

Eigen::MatrixXd chebyshev_diff_matrix(const std::vector<double>& x) {
    const int n = int(x.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> c(size_t(n), 1.0);
    c[0] = c[size_t(n - 1)] = 2.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = (c[size_t(i)] / c[size_t(j)]) * sign / (x[size_t(i)] - x[size_t(j)]);
        }
    for (int i = 0; i < n; ++i) d(i, i) = -d.row(i).sum();
    return d;
}

namespace {

// theta-only DFT with the same wavenumber convention as analyze():
// slice l carries w = l - p/2 with weight (-1)^w / p.
std::vector<Eigen::MatrixXcd> theta_dft(const GridField& f) {
    const GridSpec& s = f.spec;
    std::vector<Eigen::MatrixXcd> modes(size_t(s.p),
                                        Eigen::MatrixXcd::Zero(s.m, s.n));
    std::vector<Complex> in(size_t(s.p)), out(size_t(s.p));
    fftw_plan plan = fftw_plan_dft_1d(
        s.p, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    for (int k = 0; k < s.n; ++k)
        for (int j = 0; j < s.m; ++j) {
            for (int l = 0; l < s.p; ++l) in[size_t(l)] = Complex(f.at(j, k, l), 0.0);
            fftw_execute(plan);
            for (int l = 0; l < s.p; ++l) {
                const int w = l - s.p / 2;
                const int t = ((w % s.p) + s.p) % s.p;
                const double sign = (w % 2 == 0) ? 1.0 : -1.0;
                modes[size_t(l)](j, k) = out[size_t(t)] * (sign / double(s.p));
            }
        }
    fftw_destroy_plan(plan);
    return modes;
}

GridField theta_idft(const GridSpec& s, const std::vector<Eigen::MatrixXcd>& modes) {
    GridField f(s);
    std::vector<Complex> in(size_t(s.p)), out(size_t(s.p));
    fftw_plan plan = fftw_plan_dft_1d(
        s.p, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
    for (int k = 0; k < s.n; ++k)
        for (int j = 0; j < s.m; ++j) {
            for (int l = 0; l < s.p; ++l) {
                const int w = l - s.p / 2;
                const int t = ((w % s.p) + s.p) % s.p;
                const double sign = (w % 2 == 0) ? 1.0 : -1.0;
                in[size_t(t)] = modes[size_t(l)](j, k) * sign;
            }
            fftw_execute(plan);
            for (int l = 0; l < s.p; ++l) f.at(j, k, l) = out[size_t(l)].real();
        }
    fftw_destroy_plan(plan);
    return f;
}

}  // namespace

CollocationResult collocation_heat_run(const CollocationConfig& config,
                                       const GridField& initial,
                                       const SpaceTimeFn& forcing, int steps) {
    const GridSpec& s = config.spec;
    if (s.total_points() > 32L * 32 * 32)
        throw DomainError("collocation_heat_run: dense cost guard exceeded (32^3)");
    const int m = s.m, n = s.n, mn = m * n;
    const auto r = chebyshev_points(m);
    const auto z = chebyshev_points(n);
    const Eigen::MatrixXd d1r = chebyshev_diff_matrix(r);
    const Eigen::MatrixXd d2r = d1r * d1r;
    const Eigen::MatrixXd d1z = chebyshev_diff_matrix(z);
    const Eigen::MatrixXd d2z = d1z * d1z;
    const int axis_row = (m % 2 == 1) ? (m - 1) / 2 : -1;

    // value-space modal operator for r^2 (1 - ka lap_w), boundary rows replaced
    auto build_operator = [&](int w, double ka) {
        Eigen::MatrixXd op = Eigen::MatrixXd::Zero(mn, mn);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < m; ++i) {
                const int row = k * m + i;
                const bool wall = (i == 0 || i == m - 1 || k == 0 || k == n - 1);
                if (wall) {
                    op(row, row) = 1.0;
                    continue;
                }
                if (i == axis_row) {
                    // axis limit of the unweighted operator: for w = 0,
                    // lap u -> 2 u_rr + u_zz; other modes vanish at r = 0
                    if (w == 0) {
                        op(row, row) += 1.0;
                        for (int j = 0; j < m; ++j)
                            op(row, k * m + j) -= ka * 2.0 * d2r(i, j);
                        for (int kk = 0; kk < n; ++kk)
                            op(row, kk * m + i) -= ka * d2z(k, kk);
                    } else {
                        op(row, row) = 1.0;
                    }
                    continue;
                }
                const double r2 = r[size_t(i)] * r[size_t(i)];
                op(row, row) += r2 + ka * double(w) * double(w);
                for (int j = 0; j < m; ++j)
                    op(row, k * m + j) -= ka * (r2 * d2r(i, j) + r[size_t(i)] * d1r(i, j));
                for (int kk = 0; kk < n; ++kk)
                    op(row, kk * m + i) -= ka * r2 * d2z(k, kk);
            }
        return op;
    };

    std::map<std::pair<int, long>, Eigen::PartialPivLU<Eigen::MatrixXd>> lu_cache;
    auto solve_mode = [&](int w, double ka, Eigen::VectorXcd& rhs) {
        if (config.cache_factorizations) {
            const long ka_key = std::llround(ka * 1e15);
            auto key = std::make_pair(w * w, ka_key);
            auto it = lu_cache.find(key);
            if (it == lu_cache.end())
                it = lu_cache.emplace(key, Eigen::PartialPivLU<Eigen::MatrixXd>(
                                               build_operator(w, ka))).first;
            const Eigen::VectorXd xr = it->second.solve(rhs.real());
            const Eigen::VectorXd xi = it->second.solve(rhs.imag());
            rhs = xr + Complex(0, 1) * xi;
        } else {
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(build_operator(w, ka));
            const Eigen::VectorXd xr = lu.solve(rhs.real());
            const Eigen::VectorXd xi = lu.solve(rhs.imag());
            rhs = xr + Complex(0, 1) * xi;
        }
    };

    // per-mode value-space histories, newest first
    std::vector<std::deque<Eigen::MatrixXcd>> hist(size_t(s.p));
    {
        auto modes = theta_dft(initial);
        for (int l = 0; l < s.p; ++l) hist[size_t(l)].push_front(modes[size_t(l)]);
    }

    double time = 0.0;
    for (int step = 0; step < steps; ++step) {
        const int b = std::min(config.order, step + 1);
        const BDFScheme scheme = BDFScheme::of_order(b);
        const double kappa = scheme.kappa(config.h);
        const double ka = kappa * config.alpha;

        GridField gval(s);
        if (forcing) {
            const double t_eval = time + config.h;
            gval = sample(s, [&](double rr, double zz, double th) {
                return forcing(rr, zz, th, t_eval);
            });
        }
        auto gmodes = theta_dft(gval);

        for (int l = 0; l < s.p; ++l) {
            const int w = s.wavenumber(l);
            Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(m, n);
            for (int i = 0; i < b; ++i)
                delta += scheme.history_weights[size_t(i)] * hist[size_t(l)][size_t(i)];
            Eigen::MatrixXcd rhs_mat = delta + kappa * gmodes[size_t(l)];
            // apply the r^2 weight; zero boundary rows; axis row unweighted
            Eigen::VectorXcd rhs(mn);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < m; ++i) {
                    const int row = k * m + i;
                    const bool wall = (i == 0 || i == m - 1 || k == 0 || k == n - 1);
                    if (wall) {
                        rhs(row) = 0.0;
                    } else if (i == axis_row) {
                        rhs(row) = (w == 0) ? rhs_mat(i, k) : Complex(0);
                    } else {
                        rhs(row) = r[size_t(i)] * r[size_t(i)] * rhs_mat(i, k);
                    }
                }
            solve_mode(w, ka, rhs);
            Eigen::MatrixXcd xnew(m, n);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < m; ++i) xnew(i, k) = rhs(k * m + i);
            hist[size_t(l)].push_front(std::move(xnew));
            while (int(hist[size_t(l)].size()) > config.order) hist[size_t(l)].pop_back();
        }
        time += config.h;
    }

    std::vector<Eigen::MatrixXcd> finals;
    finals.reserve(size_t(s.p));
    for (int l = 0; l < s.p; ++l) finals.push_back(hist[size_t(l)].front());
    CollocationResult result;
    result.final_values = theta_idft(s, finals);
    result.final_time = time;
    return result;
}

std::vector<double> FDGrid::radial_points() const {
    std::vector<double> r(size_t(mf), 0.0);
    for (int i = 0; i < mf; ++i) r[size_t(i)] = (i + 0.5) / double(mf);
    return r;
}

std::vector<double> FDGrid::vertical_points() const {
    std::vector<double> z(size_t(nf), 0.0);
    for (int k = 0; k < nf; ++k) z[size_t(k)] = -1.0 + 2.0 * k / double(nf - 1);
    return z;
}

std::vector<double> FDGrid::angular_points() const {
    std::vector<double> th(size_t(pf), 0.0);
    for (int l = 0; l < pf; ++l)
        th[size_t(l)] = (2.0 * l - pf) * std::numbers::pi / double(pf);
    return th;
}

FDResult fd_heat_run(const FDConfig& config, const SpaceTimeFn& initial,
                     const SpaceTimeFn& forcing, int steps) {
    const FDGrid& g = config.grid;
    const int mf = g.mf, nf = g.nf, pf = g.pf;
    const auto r = g.radial_points();
    const auto z = g.vertical_points();
    const auto th = g.angular_points();
    const double dr = 1.0 / double(mf);
    const double dz = 2.0 / double(nf - 1);
    const double dth = 2.0 * std::numbers::pi / double(pf);
    const long nn = g.total_points();
    auto idx = [&](int i, int k, int l) { return (long(l) * nf + k) * mf + i; };

    // backward Euler matrix I - h a L, 7-point cylindrical stencil
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(size_t(nn) * 8);
    const double ha = config.h * config.alpha;
    for (int l = 0; l < pf; ++l)
        for (int k = 0; k < nf; ++k)
            for (int i = 0; i < mf; ++i) {
                const long row = idx(i, k, l);
                if (k == 0 || k == nf - 1) {  // caps: Dirichlet rows
                    trips.emplace_back(row, row, 1.0);
                    continue;
                }
                const double ri = r[size_t(i)];
                double diag = 1.0;
                auto add = [&](long col, double lap_coeff) {
                    if (col == row) diag -= ha * lap_coeff;
                    else trips.emplace_back(row, col, -ha * lap_coeff);
                };
                // d_rr + (1/r) d_r
                const double crr = 1.0 / (dr * dr);
                const double cr = 1.0 / (2.0 * dr * ri);
                // inner neighbor: i-1, or the theta+pi partner across the axis
                if (i > 0) {
                    add(idx(i - 1, k, l), crr - cr);
                } else {
                    const int lp = (l + pf / 2) % pf;
                    add(idx(0, k, lp), crr - cr);
                }
                // outer neighbor: i+1, or the ghost fold u(1+dr/2) = -u(1-dr/2)
                if (i < mf - 1) {
                    add(idx(i + 1, k, l), crr + cr);
                } else {
                    add(idx(mf - 1, k, l), -(crr + cr));
                }
                add(row, -2.0 * crr);
                // (1/r^2) d_theta,theta, periodic
                const double cth = 1.0 / (ri * ri * dth * dth);
                add(idx(i, k, (l + 1) % pf), cth);
                add(idx(i, k, (l - 1 + pf) % pf), cth);
                add(row, -2.0 * cth);
                // d_zz
                const double czz = 1.0 / (dz * dz);
                add(idx(i, k + 1, l), czz);
                add(idx(i, k - 1, l), czz);
                add(row, -2.0 * czz);
                trips.emplace_back(row, row, diag);
            }
    Eigen::SparseMatrix<double> mat(nn, nn);
    mat.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(mat);
    lu.factorize(mat);
    if (lu.info() != Eigen::Success)
        throw NumericalError("fd_heat_run: sparse factorization failed");

    Eigen::VectorXd u(nn);
    for (int l = 0; l < pf; ++l)
        for (int k = 0; k < nf; ++k)
            for (int i = 0; i < mf; ++i)
                u(idx(i, k, l)) = initial ? initial(r[size_t(i)], z[size_t(k)], th[size_t(l)], 0.0)
                                          : 0.0;

    double time = 0.0;
    Eigen::VectorXd rhs(nn);
    for (int step = 0; step < steps; ++step) {
        const double tnext = time + config.h;
        for (int l = 0; l < pf; ++l)
            for (int k = 0; k < nf; ++k)
                for (int i = 0; i < mf; ++i) {
                    const long row = idx(i, k, l);
                    if (k == 0 || k == nf - 1) {
                        rhs(row) = 0.0;
                        continue;
                    }
                    const double gval =
                        forcing ? forcing(r[size_t(i)], z[size_t(k)], th[size_t(l)], tnext)
                                : 0.0;
                    rhs(row) = u(row) + config.h * gval;
                }
        u = lu.solve(rhs);
        time = tnext;
    }
    FDResult result;
    result.final_values.assign(u.data(), u.data() + nn);
    result.final_time = time;
    return result;
}

double fd_max_error(const FDConfig& config, const FDResult& result,
                    const SpaceTimeFn& exact) {
    const FDGrid& g = config.grid;
    const auto r = g.radial_points();
    const auto z = g.vertical_points();
    const auto th = g.angular_points();
    double err = 0.0, scale = 0.0;
    long t = 0;
    for (int l = 0; l < g.pf; ++l)
        for (int k = 0; k < g.nf; ++k)
            for (int i = 0; i < g.mf; ++i, ++t) {
                const double ex =
                    exact(r[size_t(i)], z[size_t(k)], th[size_t(l)], result.final_time);
                err = std::max(err, std::abs(result.final_values[size_t(t)] - ex));
                scale = std::max(scale, std::abs(ex));
            }
    return scale > 0 ? err / scale : err;
}

}  // namespace cylspec
