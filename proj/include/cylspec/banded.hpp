#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "cylspec/errors.hpp"

namespace cylspec {

/// Sparse banded matrix stored as a set of (offset, diagonal) pairs.
/// Offset d holds the entries (i, i+d); all operators in the spectral
/// discretization have O(1) such bands.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    static BandedMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    // Entry access. set() on an absent band allocates it.
    double at(int i, int j) const;
    void set(int i, int j, double v);
    void add(int i, int j, double v) { set(i, j, at(i, j) + v); }

    bool has_band(int offset) const { return bands_.count(offset) > 0; }
    std::vector<int> offsets() const;
    int lower_bandwidth() const;  // max(0, -min offset) over nonzero bands
    int upper_bandwidth() const;

    BandedMatrix transposed() const;
    // Leading r x c block (drops trailing rows/columns).
    BandedMatrix cropped(int r, int c) const;
    Eigen::MatrixXd dense() const;
    double max_abs() const;
    void prune(double tol = 0.0);  // drop bands that are entirely ~0

    BandedMatrix& operator+=(const BandedMatrix& other);
    BandedMatrix& operator-=(const BandedMatrix& other);
    BandedMatrix& operator*=(double s);
    friend BandedMatrix operator+(BandedMatrix a, const BandedMatrix& b) { return a += b; }
    friend BandedMatrix operator-(BandedMatrix a, const BandedMatrix& b) { return a -= b; }
    friend BandedMatrix operator*(double s, BandedMatrix a) { return a *= s; }
    friend BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b);

    /// Y = (*this) * X, X dense.
    template <typename Scalar>
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
    apply_left(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& x) const {
        if (x.rows() != cols_) throw DomainError("BandedMatrix::apply_left: size mismatch");
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> y(rows_, x.cols());
        y.setZero();
        for (const auto& [d, vals] : bands_) {
            const int i0 = std::max(0, -d);
            const int i1 = std::min(rows_, cols_ - d);
            for (Eigen::Index c = 0; c < x.cols(); ++c)
                for (int i = i0; i < i1; ++i)
                    y(i, c) += vals[i - i0] * x(i + d, c);
        }
        return y;
    }

    /// Y = X * (*this), X dense.
    template <typename Scalar>
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
    apply_right(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& x) const {
        if (x.cols() != rows_) throw DomainError("BandedMatrix::apply_right: size mismatch");
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> y(x.rows(), cols_);
        y.setZero();
        for (const auto& [d, vals] : bands_) {
            const int i0 = std::max(0, -d);
            const int i1 = std::min(rows_, cols_ - d);
            for (int i = i0; i < i1; ++i)
                y.col(i + d) += vals[i - i0] * x.col(i);
        }
        return y;
    }

    /// y = (*this) * x for a vector.
    template <typename Scalar>
    Eigen::Vector<Scalar, Eigen::Dynamic>
    apply(const Eigen::Vector<Scalar, Eigen::Dynamic>& x) const {
        if (x.size() != cols_) throw DomainError("BandedMatrix::apply: size mismatch");
        Eigen::Vector<Scalar, Eigen::Dynamic> y(rows_);
        y.setZero();
        for (const auto& [d, vals] : bands_) {
            const int i0 = std::max(0, -d);
            const int i1 = std::min(rows_, cols_ - d);
            for (int i = i0; i < i1; ++i) y(i) += vals[i - i0] * x(i + d);
        }
        return y;
    }

private:
    int rows_ = 0, cols_ = 0;
    // offset -> diagonal values, entry t is (i0+t, i0+t+offset) with i0 = max(0,-offset)
    std::map<int, std::vector<double>> bands_;
};

/// Banded LU factorization with partial pivoting (row-oriented band storage,
/// working width kl + (kl+ku) + 1 to absorb pivoting fill).
/// Factors are real; solves accept real or complex right-hand sides.
class BandedLU {
public:
    BandedLU() = default;
    explicit BandedLU(const BandedMatrix& a) { factorize(a); }

    void factorize(const BandedMatrix& a);
    bool factorized() const { return n_ > 0; }
    int size() const { return n_; }

    /// In-place solve A X = B over the columns of B.
    template <typename Scalar>
    void solve_in_place(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b) const {
        if (b.rows() != n_) throw DomainError("BandedLU::solve: size mismatch");
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
            Scalar* x = b.col(c).data();
            // forward pass: apply permutations and multipliers
            for (int k = 0; k < n_; ++k) {
                if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
                const int iend = std::min(n_ - 1, k + kl_);
                for (int i = k + 1; i <= iend; ++i) x[i] -= band(i, k) * x[k];
            }
            // back substitution
            for (int k = n_ - 1; k >= 0; --k) {
                const int jend = std::min(n_ - 1, k + kl_ + ku_);
                Scalar s = x[k];
                for (int j = k + 1; j <= jend; ++j) s -= band(k, j) * x[j];
                x[k] = s / band(k, k);
            }
        }
    }

    template <typename Scalar>
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
    solve(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> b) const {
        solve_in_place(b);
        return b;
    }

private:
    // storage: row i holds columns [i-kl, i+kl+ku]
    double band(int i, int j) const { return w_[size_t(i) * width_ + size_t(j - i + kl_)]; }
    double& band(int i, int j) { return w_[size_t(i) * width_ + size_t(j - i + kl_)]; }

    int n_ = 0, kl_ = 0, ku_ = 0, width_ = 0;
    std::vector<double> w_;
    std::vector<int> piv_;
};

}  // namespace cylspec
