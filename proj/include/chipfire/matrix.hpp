#pragma once

// Dense row-major matrices and fraction-free (Bareiss) elimination.

#include "chipfire/number.hpp"

#include <cassert>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chipfire {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i)
            out(i, i) = T(1);
        return out;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    template <class U, class F>
    Matrix<U> map(F&& f) const {
        Matrix<U> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(i, j) = f((*this)(i, j));
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = (*this)(i, j);
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product: dimension mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) += a(i, k) * b(k, j);
            }
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        a.check_same_shape(b);
        for (std::size_t k = 0; k < a.data_.size(); ++k)
            a.data_[k] += b.data_[k];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        a.check_same_shape(b);
        for (std::size_t k = 0; k < a.data_.size(); ++k)
            a.data_[k] -= b.data_[k];
        return a;
    }

    friend Matrix operator*(const T& s, Matrix a) {
        for (auto& x : a.data_)
            x *= s;
        return a;
    }

private:
    void check_same_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw std::invalid_argument("matrix sum: dimension mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using RationalMatrix = Matrix<Rational>;

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& x) {
    if (a.cols() != x.size())
        throw std::invalid_argument("matrix-vector product: dimension mismatch");
    std::vector<T> out(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out[i] += a(i, j) * x[j];
    return out;
}

/// Integer inverse up to a common scalar: `matrix * scaled == denominator * I`.
/// `denominator` is +-det(matrix) and is kept positive.
struct ScaledInverse {
    IntMatrix scaled;
    BigInt denominator;

    RationalMatrix to_rational() const {
        return scaled.map<Rational>([&](const BigInt& x) {
            Rational r(x, denominator);
            r.canonicalize();
            return r;
        });
    }
};

/// Determinant by Bareiss elimination; every intermediate is a minor of the input.
inline BigInt determinant(IntMatrix a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != k) {
            a.swap_rows(p, k);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt t = a(k, k) * a(i, j) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return n == 0 ? BigInt(1) : BigInt(sign * prev);
}

/// Fraction-free Gauss-Jordan on [A | I]; returns nullopt for singular input.
inline std::optional<ScaledInverse> fraction_free_inverse(const IntMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = a.rows();
    IntMatrix w(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            w(i, j) = a(i, j);
        w(i, n + i) = 1;
    }
    BigInt prev = 1;
    BigInt t;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && w(p, k) == 0)
            ++p;
        if (p == n)
            return std::nullopt;
        w.swap_rows(p, k);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k)
                continue;
            for (std::size_t j = 0; j < 2 * n; ++j) {
                if (j == k)
                    continue;
                t = w(k, k) * w(i, j) - w(i, k) * w(k, j);
                mpz_divexact(w(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            w(i, k) = 0;
        }
        prev = w(k, k);
    }
    // Rows above the last pivot now all carry prev on the diagonal.
    ScaledInverse out{IntMatrix(n, n), n == 0 ? BigInt(1) : prev};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.scaled(i, j) = w(i, n + j);
    if (out.denominator < 0) {
        out.denominator = -out.denominator;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.scaled(i, j) = -out.scaled(i, j);
    }
    return out;
}

/// Exact rational inverse: clears denominators, then inverts fraction-free.
inline std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
    BigInt scale = 1;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(i, j).get_den_mpz_t());
    const IntMatrix scaled = a.map<BigInt>([&](const Rational& x) {
        return BigInt(x.get_num() * (scale / x.get_den()));
    });
    auto inv = fraction_free_inverse(scaled);
    if (!inv)
        return std::nullopt;
    const Rational factor(scale);
    RationalMatrix out = inv->to_rational();
    return factor * std::move(out);
}

} // namespace chipfire
