#include "cylspec/banded.hpp"

#include <cmath>

namespace cylspec {

BandedMatrix BandedMatrix::identity(int n) {
    BandedMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

double BandedMatrix::at(int i, int j) const {
    const int d = j - i;
    auto it = bands_.find(d);
    if (it == bands_.end()) return 0.0;
    const int i0 = std::max(0, -d);
    if (i < i0 || i >= i0 + int(it->second.size())) return 0.0;
    return it->second[i - i0];
}

void BandedMatrix::set(int i, int j, double v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw DomainError("BandedMatrix::set: index out of range");
    const int d = j - i;
    auto& vals = bands_[d];
    const int i0 = std::max(0, -d);
    const int len = std::min(rows_ - i0, cols_ - std::max(0, d));
    if (vals.empty()) vals.assign(size_t(len), 0.0);
    vals[i - i0] = v;
}

std::vector<int> BandedMatrix::offsets() const {
    std::vector<int> out;
    out.reserve(bands_.size());
    for (const auto& [d, v] : bands_) out.push_back(d);
    return out;
}

int BandedMatrix::lower_bandwidth() const {
    int kl = 0;
    for (const auto& [d, v] : bands_)
        if (d < 0) kl = std::max(kl, -d);
    return kl;
}

int BandedMatrix::upper_bandwidth() const {
    int ku = 0;
    for (const auto& [d, v] : bands_)
        if (d > 0) ku = std::max(ku, d);
    return ku;
}

BandedMatrix BandedMatrix::transposed() const {
    BandedMatrix t(cols_, rows_);
    for (const auto& [d, vals] : bands_) {
        const int i0 = std::max(0, -d);
        for (int t_i = 0; t_i < int(vals.size()); ++t_i) {
            const int i = i0 + t_i;
            if (vals[t_i] != 0.0) t.set(i + d, i, vals[t_i]);
        }
    }
    return t;
}

BandedMatrix BandedMatrix::cropped(int r, int c) const {
    if (r > rows_ || c > cols_) throw DomainError("BandedMatrix::cropped: enlarging");
    BandedMatrix out(r, c);
    for (const auto& [d, vals] : bands_) {
        const int i0 = std::max(0, -d);
        for (int t = 0; t < int(vals.size()); ++t) {
            const int i = i0 + t, j = i + d;
            if (i < r && j < c && vals[t] != 0.0) out.set(i, j, vals[t]);
        }
    }
    return out;
}

Eigen::MatrixXd BandedMatrix::dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const auto& [off, vals] : bands_) {
        const int i0 = std::max(0, -off);
        for (int t = 0; t < int(vals.size()); ++t) d(i0 + t, i0 + t + off) = vals[t];
    }
    return d;
}

double BandedMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& [off, vals] : bands_)
        for (double v : vals) m = std::max(m, std::abs(v));
    return m;
}

void BandedMatrix::prune(double tol) {
    for (auto it = bands_.begin(); it != bands_.end();) {
        bool all_zero = true;
        for (double v : it->second)
            if (std::abs(v) > tol) { all_zero = false; break; }
        it = all_zero ? bands_.erase(it) : std::next(it);
    }
}

BandedMatrix& BandedMatrix::operator+=(const BandedMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DomainError("BandedMatrix: size mismatch in +=");
    for (const auto& [d, vals] : other.bands_) {
        const int i0 = std::max(0, -d);
        for (int t = 0; t < int(vals.size()); ++t)
            if (vals[t] != 0.0) add(i0 + t, i0 + t + d, vals[t]);
    }
    return *this;
}

BandedMatrix& BandedMatrix::operator-=(const BandedMatrix& other) {
    BandedMatrix neg = other;
    neg *= -1.0;
    return (*this) += neg;
}

BandedMatrix& BandedMatrix::operator*=(double s) {
    for (auto& [d, vals] : bands_)
        for (double& v : vals) v *= s;
    return *this;
}

BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("BandedMatrix: size mismatch in *");
    BandedMatrix c(a.rows_, b.cols_);
    for (const auto& [da, va] : a.bands_) {
        const int ia0 = std::max(0, -da);
        for (const auto& [db, vb] : b.bands_) {
            const int ib0 = std::max(0, -db);
            // (i, i+da) * (i+da, i+da+db) contributes to (i, i+da+db)
            for (int t = 0; t < int(va.size()); ++t) {
                const int i = ia0 + t;
                const int k = i + da;
                const int j = k + db;
                if (j < 0 || j >= b.cols_) continue;
                if (k < ib0 || k >= ib0 + int(vb.size())) continue;
                const double prod = va[t] * vb[k - ib0];
                if (prod != 0.0) c.add(i, j, prod);
            }
        }
    }
    c.prune();
    return c;
}

void BandedLU::factorize(const BandedMatrix& a) {
    if (a.rows() != a.cols()) throw DomainError("BandedLU: matrix must be square");
    n_ = a.rows();
    kl_ = a.lower_bandwidth();
    ku_ = a.upper_bandwidth();
    width_ = 2 * kl_ + ku_ + 1;  // row i covers columns [i-kl, i+kl+ku]
    w_.assign(size_t(n_) * width_, 0.0);
    piv_.assign(n_, 0);
    for (int i = 0; i < n_; ++i) {
        const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
        for (int j = j0; j <= j1; ++j) band(i, j) = a.at(i, j);
    }

    for (int k = 0; k < n_; ++k) {
        int p = k;
        double pmax = std::abs(band(k, k));
        const int iend = std::min(n_ - 1, k + kl_);
        for (int i = k + 1; i <= iend; ++i) {
            const double v = std::abs(band(i, k));
            if (v > pmax) { pmax = v; p = i; }
        }
        if (pmax == 0.0) throw SingularOperatorError("BandedLU: singular matrix");
        piv_[k] = p;
        if (p != k) {
            const int jend = std::min(n_ - 1, k + kl_ + ku_);
            for (int j = k; j <= jend; ++j) std::swap(band(k, j), band(p, j));
        }
        const double pivot = band(k, k);
        for (int i = k + 1; i <= iend; ++i) {
            const double m = band(i, k) / pivot;
            band(i, k) = m;
            if (m != 0.0) {
                const int jend = std::min(n_ - 1, k + kl_ + ku_);
                for (int j = k + 1; j <= jend; ++j) band(i, j) -= m * band(k, j);
            }
        }
    }
}

}  // namespace cylspec
