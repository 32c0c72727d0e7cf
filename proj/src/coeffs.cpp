#include "cylspec/coeffs.hpp"

#include <cmath>

namespace cylspec {

double CoeffTensor::max_abs() const {
    double m = 0.0;
    for (const Complex& c : data) m = std::max(m, std::abs(c));
    return m;
}

bool CoeffTensor::all_finite() const {
    for (const Complex& c : data)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

CoeffTensor& CoeffTensor::operator+=(const CoeffTensor& o) {
    if (!(spec == o.spec)) throw DomainError("CoeffTensor: spec mismatch");
    for (size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}

CoeffTensor& CoeffTensor::operator-=(const CoeffTensor& o) {
    if (!(spec == o.spec)) throw DomainError("CoeffTensor: spec mismatch");
    for (size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}

CoeffTensor& CoeffTensor::operator*=(Complex s) {
    for (Complex& c : data) c *= s;
    return *this;
}

double hermitian_symmetry_error(const CoeffTensor& t) {
    const GridSpec& s = t.spec;
    const int half = s.p / 2;
    double worst = 0.0;
    for (int l = 0; l < s.p; ++l) {
        const int lp = 2 * half - l;  // partner slice carrying -wavenumber
        if (lp < 0 || lp >= s.p) continue;
        for (int k = 0; k < s.n; ++k)
            for (int j = 0; j < s.m; ++j)
                worst = std::max(worst, std::abs(t.at(j, k, l) - std::conj(t.at(j, k, lp))));
    }
    return worst;
}

void parity_project_in_place(CoeffTensor& coeffs, Parity parity) {
    const GridSpec& s = coeffs.spec;
    const int keep_mod = (parity == Parity::scalar) ? 0 : 1;
    for (int l = 0; l < s.p; ++l) {
        const int w = s.wavenumber(l);
        for (int k = 0; k < s.n; ++k)
            for (int j = 0; j < s.m; ++j)
                if (((j + w) % 2 + 2) % 2 != keep_mod) coeffs.at(j, k, l) = Complex(0);
    }
}

CoeffTensor parity_project(const CoeffTensor& coeffs, Parity parity) {
    CoeffTensor out = coeffs;
    parity_project_in_place(out, parity);
    return out;
}

}  // namespace cylspec
