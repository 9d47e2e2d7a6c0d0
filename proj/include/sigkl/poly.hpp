#pragma once

#include <sigkl/rational.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace sigkl {

/// Polynomial in the deformation parameter t with rational coefficients.
class QPoly {
public:
    QPoly() = default;
    QPoly(int c) : QPoly(Rational(c)) {}
    QPoly(const Rational& c) {
        if (c != 0) c_.push_back(c);
    }
    explicit QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static QPoly linear(const Rational& c0, const Rational& c1) { return QPoly({c0, c1}); }
    static QPoly t() { return linear(0, 1); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    /// Lowest power of t with nonzero coefficient; -1 for the zero polynomial.
    int order() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) return static_cast<int>(i);
        return -1;
    }
    Rational coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
        return c_[k];
    }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    QPoly& operator+=(const QPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    QPoly& operator-=(const QPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    QPoly& operator*=(const QPoly& o) {
        *this = *this * o;
        return *this;
    }
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator-(QPoly a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return QPoly();
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return QPoly(std::move(r));
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

    /// Drop all terms of degree >= k.
    QPoly truncated(int k) const {
        if (static_cast<int>(c_.size()) <= k) return *this;
        return QPoly(std::vector<Rational>(c_.begin(), c_.begin() + std::max(k, 0)));
    }
    /// Divide by t^k; requires order() >= k.
    QPoly shifted_down(int k) const {
        if (k <= 0 || is_zero()) return *this;
        return QPoly(std::vector<Rational>(c_.begin() + std::min<std::size_t>(k, c_.size()), c_.end()));
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += "(" + to_string(c_[i]) + ")";
            if (i > 0) s += "t^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Product modulo t^k.
inline QPoly mul_trunc(const QPoly& a, const QPoly& b, int k) {
    if (a.is_zero() || b.is_zero() || k <= 0) return QPoly();
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<Rational> r(std::min<std::size_t>(x.size() + y.size() - 1, k));
    for (std::size_t i = 0; i < x.size() && static_cast<int>(i) < k; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size() && static_cast<int>(i + j) < k; ++j) r[i + j] += x[i] * y[j];
    }
    return QPoly(std::move(r));
}

/// Inverse of a t-adic unit modulo t^k.
inline QPoly inverse_trunc(const QPoly& u, int k) {
    const Rational u0 = u.coeff(0);
    if (u0 == 0) throw Error(ErrorKind::Internal, "inverse_trunc of a non-unit");
    std::vector<Rational> r(std::max(k, 0));
    for (int n = 0; n < k; ++n) {
        Rational acc = (n == 0) ? Rational(1) : Rational(0);
        for (int i = 1; i <= n; ++i) acc -= u.coeff(i) * r[n - i];
        r[n] = acc / u0;
    }
    return QPoly(std::move(r));
}

}  // namespace sigkl
