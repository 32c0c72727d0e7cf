#include "cylspec/ultraop.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace cylspec {

BandedMatrix build_conversion_01(int n) {
    if (n < 2) throw DomainError("build_conversion_01: n >= 2 required");
    BandedMatrix m(n, n);
    m.set(0, 0, 1.0);
    for (int k = 1; k < n; ++k) m.set(k, k, 0.5);
    for (int k = 0; k + 2 < n; ++k) m.set(k, k + 2, -0.5);
    return m;
}

BandedMatrix build_conversion_12(int n) {
    if (n < 2) throw DomainError("build_conversion_12: n >= 2 required");
    BandedMatrix m(n, n);
    for (int k = 0; k < n; ++k) m.set(k, k, 1.0 / double(k + 1));
    for (int k = 0; k + 2 < n; ++k) m.set(k, k + 2, -1.0 / double(k + 3));
    return m;
}

BandedMatrix build_conversion_02(int n) {
    return build_conversion_12(n) * build_conversion_01(n);
}

BandedMatrix build_multiplication_r(int n) {
    if (n < 2) throw DomainError("build_multiplication_r: n >= 2 required");
    BandedMatrix m(n, n);
    // x C2_k = (k+1)/(2(k+2)) C2_{k+1} + (k+3)/(2(k+2)) C2_{k-1}
    for (int k = 0; k + 1 < n; ++k) m.set(k + 1, k, double(k + 1) / double(2 * (k + 2)));
    for (int k = 1; k < n; ++k) m.set(k - 1, k, double(k + 3) / double(2 * (k + 2)));
    return m;
}

BandedMatrix build_derivative_1(int n) {
    if (n < 3) throw DomainError("build_derivative_1: n >= 3 required");
    BandedMatrix m(n, n);
    for (int k = 0; k + 1 < n; ++k) m.set(k, k + 1, double(k + 1));
    return m;
}

BandedMatrix build_derivative_2(int n) {
    if (n < 3) throw DomainError("build_derivative_2: n >= 3 required");
    BandedMatrix m(n, n);
    for (int k = 0; k + 2 < n; ++k) m.set(k, k + 2, 2.0 * double(k + 2));
    return m;
}

const UltraOps& UltraOps::get(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<UltraOps>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto ops = std::make_unique<UltraOps>();
        ops->size = n;
        ops->c01 = build_conversion_01(n);
        ops->c12 = build_conversion_12(n);
        ops->c02 = ops->c12 * ops->c01;
        ops->r = build_multiplication_r(n);
        ops->r2 = ops->r * ops->r * ops->c02;
        ops->d1 = build_derivative_1(n);
        ops->d2 = build_derivative_2(n);
        slot = std::move(ops);
    }
    return *slot;
}

BandedMatrix radial_modal_laplacian(int m, int wavenumber) {
    const UltraOps& ops = UltraOps::get(m);
    BandedMatrix l = ops.r * ops.c12 * ops.d1 + ops.r * ops.r * ops.d2;
    BandedMatrix w2c02 = ops.c02;
    w2c02 *= double(wavenumber) * double(wavenumber);
    l -= w2c02;
    l.prune();
    return l;
}

Eigen::MatrixXcd ModalOperator::apply(const Eigen::MatrixXcd& x) const {
    Eigen::MatrixXcd out = B.apply_right(A.apply_left(x));
    if (C.rows() > 0 && C.max_abs() > 0.0) out += D.apply_right(C.apply_left(x));
    return out;
}

ModalOperator assemble_modal_helmholtz(int m, int n, int wavenumber, double scale) {
    if (m < 4 || n < 4) throw DomainError("assemble_modal_helmholtz: sizes too small");
    const UltraOps& rops = UltraOps::get(m);
    const UltraOps& zops = UltraOps::get(n);
    ModalOperator op;
    op.m = m;
    op.n = n;
    op.wavenumber = wavenumber;
    op.scale = scale;
    BandedMatrix lap = radial_modal_laplacian(m, wavenumber);
    lap *= scale;
    op.A = rops.r2 - lap;
    op.B = zops.c02.transposed();
    op.C = rops.r2;
    op.C *= -scale;
    op.C.prune();
    op.D = zops.d2.transposed();
    return op;
}

ModalOperator assemble_modal_poisson(int m, int n, int wavenumber) {
    if (m < 4 || n < 4) throw DomainError("assemble_modal_poisson: sizes too small");
    const UltraOps& rops = UltraOps::get(m);
    const UltraOps& zops = UltraOps::get(n);
    ModalOperator op;
    op.m = m;
    op.n = n;
    op.wavenumber = wavenumber;
    op.scale = 1.0;
    op.A = radial_modal_laplacian(m, wavenumber);
    op.B = zops.c02.transposed();
    op.C = rops.r2;
    op.D = zops.d2.transposed();
    return op;
}

BandedMatrix dirichlet_recombination(int n) {
    if (n < 4) throw DomainError("dirichlet_recombination: n >= 4 required");
    BandedMatrix s(n, n - 2);
    for (int j = 0; j + 2 < n; ++j) {
        s.set(j, j, 1.0);
        s.set(j + 2, j, -1.0);
    }
    return s;
}

BandedMatrix recombine(const BandedMatrix& M) {
    BandedMatrix prod = M * dirichlet_recombination(M.cols());
    return prod.cropped(M.rows() - 2, M.cols() - 2);
}

}  // namespace cylspec
