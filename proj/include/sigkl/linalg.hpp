#pragma once

#include <sigkl/rational.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sigkl {

/// Dense row-major matrix over a commutative ring.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    bool is_symmetric() const {
        if (r_ != c_) return false;
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = i + 1; j < c_; ++j)
                if (!((*this)(i, j) == (*this)(j, i))) return false;
        return true;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    template <class F>
    auto map(F f) const -> Matrix<decltype(f(std::declval<T>()))> {
        Matrix<decltype(f(std::declval<T>()))> m(r_, c_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
        return m;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

/// Determinant over Q by Gaussian elimination.
inline Rational determinant(Matrix<Rational> m) {
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m(piv, col) == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (m(i, col) == 0) continue;
            Rational f = m(i, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

/// Basis of the right kernel {v : m v = 0} over Q.
inline std::vector<std::vector<Rational>> nullspace(Matrix<Rational> m) {
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t piv = row;
        while (piv < R && m(piv, col) == 0) ++piv;
        if (piv == R) continue;
        for (std::size_t j = 0; j < C; ++j) std::swap(m(piv, j), m(row, j));
        Rational inv = 1 / m(row, col);
        for (std::size_t j = 0; j < C; ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rational f = m(i, col);
            for (std::size_t j = 0; j < C; ++j) m(i, j) -= f * m(row, j);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(C, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < C; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(C, Rational(0));
        v[free] = 1;
        for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -m(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

struct Signature {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    int value() const { return positive - negative; }
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Inertia of a symmetric rational matrix via symmetric congruence elimination.
inline Signature signature(Matrix<Rational> m) {
    std::size_t n = m.rows();
    std::vector<std::size_t> alive(n);
    for (std::size_t i = 0; i < n; ++i) alive[i] = i;
    Signature s;
    while (!alive.empty()) {
        // Find a nonzero diagonal pivot; otherwise make one from an off-diagonal entry.
        std::size_t p = n;
        for (auto i : alive)
            if (m(i, i) != 0) {
                p = i;
                break;
            }
        if (p == n) {
            std::size_t a = n, b = n;
            for (std::size_t x = 0; x < alive.size() && a == n; ++x)
                for (std::size_t y = x + 1; y < alive.size(); ++y)
                    if (m(alive[x], alive[y]) != 0) {
                        a = alive[x];
                        b = alive[y];
                        break;
                    }
            if (a == n) {
                s.zero += static_cast<int>(alive.size());
                break;
            }
            // Replace row/column a by a + b; the new diagonal entry is 2 m(a,b) != 0.
            for (auto j : alive) m(a, j) += m(b, j);
            for (auto i : alive) m(i, a) += m(i, b);
            p = a;
        }
        const Rational d = m(p, p);
        if (d > 0)
            ++s.positive;
        else
            ++s.negative;
        std::vector<std::size_t> rest;
        for (auto i : alive)
            if (i != p) rest.push_back(i);
        for (auto i : rest) {
            if (m(i, p) == 0) continue;
            Rational f = m(i, p) / d;
            for (auto j : rest) m(i, j) -= f * m(p, j);
        }
        for (auto i : rest) m(i, p) = m(p, i) = 0;
        alive = std::move(rest);
    }
    return s;
}

}  // namespace sigkl
