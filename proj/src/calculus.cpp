#include "cylspec/calculus.hpp"

namespace cylspec {

namespace {

// b = coefficients of f' given T coefficients a, backward recurrence.
template <typename Get, typename Set>
void chebyshev_derivative_pencil(int len, Get get, Set set) {
    Complex next(0), next2(0);  // b_{k+1}, b_{k+2}
    for (int k = len - 1; k >= 0; --k) {
        const Complex ak1 = (k + 1 < len) ? get(k + 1) : Complex(0);
        Complex bk = next2 + 2.0 * double(k + 1) * ak1;
        if (k == 0) bk *= 0.5;
        next2 = next;
        next = bk;
        set(k, bk);
    }
}

}  // namespace

CoeffTensor derivative_r(const CoeffTensor& f) {
    CoeffTensor out(f.spec);
    const int m = f.spec.m;
    for (int l = 0; l < f.spec.p; ++l)
        for (int k = 0; k < f.spec.n; ++k)
            chebyshev_derivative_pencil(
                m, [&](int j) { return f.at(j, k, l); },
                [&](int j, Complex v) { out.at(j, k, l) = v; });
    return out;
}

CoeffTensor derivative_z(const CoeffTensor& f) {
    CoeffTensor out(f.spec);
    const int n = f.spec.n;
    for (int l = 0; l < f.spec.p; ++l)
        for (int j = 0; j < f.spec.m; ++j)
            chebyshev_derivative_pencil(
                n, [&](int k) { return f.at(j, k, l); },
                [&](int k, Complex v) { out.at(j, k, l) = v; });
    return out;
}

CoeffTensor derivative_theta(const CoeffTensor& f) {
    CoeffTensor out(f.spec);
    for (int l = 0; l < f.spec.p; ++l) {
        const int w = f.spec.wavenumber(l);
        const bool nyquist = (l == 0);
        const Complex factor = nyquist ? Complex(0) : Complex(0, double(w));
        out.slice(l) = factor * f.slice(l);
    }
    return out;
}

CoeffTensor multiply_r(const CoeffTensor& f) {
    CoeffTensor out(f.spec);
    const int m = f.spec.m;
    for (int l = 0; l < f.spec.p; ++l)
        for (int k = 0; k < f.spec.n; ++k) {
            out.at(1, k, l) += f.at(0, k, l);
            for (int j = 1; j < m; ++j) {
                const Complex half = 0.5 * f.at(j, k, l);
                out.at(j - 1, k, l) += half;
                if (j + 1 < m) out.at(j + 1, k, l) += half;
            }
        }
    return out;
}

CoeffTensor divide_r(const CoeffTensor& f) {
    if (f.spec.m % 2 != 0)
        throw DomainError("divide_r: even m required (odd m places a node at r = 0)");
    // complex tensors: divide real and imaginary fields separately
    const auto r = chebyshev_points(f.spec.m);
    GridField re(f.spec), im(f.spec);
    {
        CoeffTensor fr = f, fi = f;
        for (size_t i = 0; i < f.data.size(); ++i) {
            fr.data[i] = Complex(f.data[i].real(), 0.0);
            fi.data[i] = Complex(f.data[i].imag(), 0.0);
        }
        re = synthesize(fr);
        im = synthesize(fi);
    }
    for (int l = 0; l < f.spec.p; ++l)
        for (int k = 0; k < f.spec.n; ++k)
            for (int j = 0; j < f.spec.m; ++j) {
                re.at(j, k, l) /= r[size_t(j)];
                im.at(j, k, l) /= r[size_t(j)];
            }
    CoeffTensor cre = analyze(re), cim = analyze(im);
    CoeffTensor out(f.spec);
    for (size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = cre.data[i] + Complex(0, 1) * cim.data[i];
    return out;
}

CoeffTensor horizontal_laplacian(const CoeffTensor& f) {
    CoeffTensor dr = derivative_r(f);
    CoeffTensor inner = derivative_theta(derivative_theta(f));
    inner = divide_r(inner);
    inner += dr;
    CoeffTensor out = derivative_r(dr);
    out += divide_r(inner);
    return out;
}

CoeffTensor laplacian(const CoeffTensor& f) {
    CoeffTensor out = horizontal_laplacian(f);
    out += derivative_z(derivative_z(f));
    return out;
}

}  // namespace cylspec
