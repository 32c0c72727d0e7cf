#include "cylspec/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace cylspec {

namespace {

// FFTW plans are created against fixed buffers; every size gets one plan
// pair plus scratch, reused for all pencils of that length. Plan creation
// is not thread-safe, execution on the owned buffers is serialized by the
// cache mutex.
struct DctPlan {
    int n = 0;
    double* in = nullptr;
    double* out = nullptr;
    fftw_plan plan = nullptr;

    explicit DctPlan(int n_) : n(n_) {
        in = fftw_alloc_real(size_t(n));
        out = fftw_alloc_real(size_t(n));
        plan = fftw_plan_r2r_1d(n, in, out, FFTW_REDFT00, FFTW_ESTIMATE);
    }
    ~DctPlan() {
        if (plan) fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }
    DctPlan(const DctPlan&) = delete;
    DctPlan& operator=(const DctPlan&) = delete;
};

struct DftPlan {
    int n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit DftPlan(int n_) : n(n_) {
        in = fftw_alloc_complex(size_t(n));
        out = fftw_alloc_complex(size_t(n));
        fwd = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~DftPlan() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(out);
    }
    DftPlan(const DftPlan&) = delete;
    DftPlan& operator=(const DftPlan&) = delete;
};

std::mutex g_plan_mutex;

DctPlan& dct_plan(int n) {
    static std::map<int, std::unique_ptr<DctPlan>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<DctPlan>(n);
    return *slot;
}

DftPlan& dft_plan(int n) {
    static std::map<int, std::unique_ptr<DftPlan>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<DftPlan>(n);
    return *slot;
}

// In-place DCT-I pencil sweep over one dimension of a complex tensor.
// forward == true : values -> Chebyshev coefficients.
// Pencils are gathered in decreasing-x order (standard Chebyshev index).
void dct_sweep(std::vector<Complex>& data, int len, int stride, long pencils,
               const std::function<size_t(long, int)>& addr, bool forward) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    DctPlan& pl = dct_plan(len);
    const double scale = 1.0 / double(len - 1);
    for (int part = 0; part < 2; ++part) {  // real then imaginary component
        for (long q = 0; q < pencils; ++q) {
            bool nonzero = false;
            for (int t = 0; t < len; ++t) {
                const Complex& c = data[addr(q, t)];
                const double v = part == 0 ? c.real() : c.imag();
                if (forward) {
                    // values: tensor index ascends in x, DCT-I wants descending
                    pl.in[len - 1 - t] = v;
                } else {
                    // coefficients: index is the degree; interior halved
                    pl.in[t] = (t == 0 || t == len - 1) ? v : 0.5 * v;
                }
                nonzero = nonzero || (v != 0.0);
            }
            if (!nonzero) continue;
            fftw_execute(pl.plan);
            for (int t = 0; t < len; ++t) {
                double v;
                if (forward) {
                    v = pl.out[t] * scale;  // output index is the degree
                    if (t == 0 || t == len - 1) v *= 0.5;
                } else {
                    v = pl.out[len - 1 - t];  // back to ascending-x order
                }
                Complex& c = data[addr(q, t)];
                if (part == 0) c.real(v);
                else c.imag(v);
            }
        }
    }
    (void)stride;
}

}  // namespace

CoeffTensor analyze(const GridField& field) {
    const GridSpec& s = field.spec;
    s.validate();
    for (double v : field.values)
        if (!std::isfinite(v)) throw NumericalError("analyze: non-finite input value");

    CoeffTensor out(s);
    for (size_t i = 0; i < field.values.size(); ++i) out.data[i] = Complex(field.values[i], 0.0);

    const int m = s.m, n = s.n, p = s.p;
    const long mn = long(m) * n;

    // r direction: pencil (k,l) has stride 1
    dct_sweep(out.data, m, 1, mn / m * p,
              [&](long q, int t) { return size_t(q) * m + size_t(t); }, true);
    // z direction: stride m
    dct_sweep(out.data, n, m, long(m) * p, [&](long q, int t) {
        const long l = q / m, j = q % m;
        return (size_t(l) * n + size_t(t)) * m + size_t(j);
    }, true);

    // theta direction: strided complex DFT; slice l carries wavenumber l - p/2.
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        DftPlan& pl = dft_plan(p);
        std::vector<Complex> pencil(static_cast<size_t>(p), Complex(0));
        for (long q = 0; q < mn; ++q) {
            for (int l = 0; l < p; ++l) {
                const Complex& c = out.data[size_t(l) * mn + q];
                pl.in[l][0] = c.real();
                pl.in[l][1] = c.imag();
            }
            fftw_execute(pl.fwd);
            for (int l = 0; l < p; ++l) {
                const int w = l - p / 2;
                const int t = ((w % p) + p) % p;
                const double sign = (w % 2 == 0) ? 1.0 : -1.0;
                out.data[size_t(l) * mn + q] =
                    Complex(pl.out[t][0], pl.out[t][1]) * (sign / double(p));
            }
        }
    }
    return out;
}

GridField synthesize(const CoeffTensor& coeffs) {
    const GridSpec& s = coeffs.spec;
    s.validate();
    const int m = s.m, n = s.n, p = s.p;
    const long mn = long(m) * n;
    std::vector<Complex> work(coeffs.data.size());

    // theta direction first: f_l' = sum_w c_w e^{i w theta_l'}
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        DftPlan& pl = dft_plan(p);
        for (long q = 0; q < mn; ++q) {
            for (int l = 0; l < p; ++l) {
                const int w = l - p / 2;
                const int t = ((w % p) + p) % p;
                const double sign = (w % 2 == 0) ? 1.0 : -1.0;
                const Complex c = coeffs.data[size_t(l) * mn + q] * sign;
                pl.in[t][0] = c.real();
                pl.in[t][1] = c.imag();
            }
            fftw_execute(pl.bwd);
            for (int l = 0; l < p; ++l)
                work[size_t(l) * mn + q] = Complex(pl.out[l][0], pl.out[l][1]);
        }
    }

    dct_sweep(work, n, m, long(m) * p, [&](long q, int t) {
        const long l = q / m, j = q % m;
        return (size_t(l) * n + size_t(t)) * m + size_t(j);
    }, false);
    dct_sweep(work, m, 1, mn / m * p,
              [&](long q, int t) { return size_t(q) * m + size_t(t); }, false);

    GridField out(s);
    for (size_t i = 0; i < work.size(); ++i) out.values[i] = work[i].real();
    return out;
}

Complex evaluate_at(const CoeffTensor& coeffs, double r, double z, double theta) {
    const GridSpec& s = coeffs.spec;
    const int m = s.m, n = s.n, p = s.p;
    Complex total(0.0, 0.0);
    Eigen::VectorXcd zsum(n);
    for (int l = 0; l < p; ++l) {
        auto sl = coeffs.slice(l);
        // Clenshaw over j for every column, then over k.
        for (int k = 0; k < n; ++k) {
            Complex b1(0), b2(0);
            for (int j = m - 1; j >= 1; --j) {
                const Complex b = sl(j, k) + 2.0 * r * b1 - b2;
                b2 = b1;
                b1 = b;
            }
            zsum(k) = sl(0, k) + r * b1 - b2;
        }
        Complex b1(0), b2(0);
        for (int k = n - 1; k >= 1; --k) {
            const Complex b = zsum(k) + 2.0 * z * b1 - b2;
            b2 = b1;
            b1 = b;
        }
        const Complex radial = zsum(0) + z * b1 - b2;
        const double w = double(l - p / 2);
        total += radial * std::polar(1.0, w * theta);
    }
    return total;
}

}  // namespace cylspec
