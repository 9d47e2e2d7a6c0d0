#pragma once

#include <sigkl/weyl.hpp>

#include <map>
#include <string>
#include <vector>

namespace sigkl {

/// Polynomial in q with integer coefficients (index = power of q), trailing zeros trimmed.
class KLPoly {
public:
    KLPoly() = default;
    explicit KLPoly(std::vector<long long> c) : c_(std::move(c)) { trim(); }
    static KLPoly constant(long long v) { return KLPoly({v}); }
    static KLPoly monomial(int k, long long v) {
        std::vector<long long> c(k + 1, 0);
        c[k] = v;
        return KLPoly(c);
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    long long coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : 0; }
    const std::vector<long long>& coeffs() const { return c_; }
    long long at_one() const {
        long long s = 0;
        for (auto x : c_) s += x;
        return s;
    }

    KLPoly& operator+=(const KLPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    KLPoly& operator-=(const KLPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend KLPoly operator+(KLPoly a, const KLPoly& b) { return a += b; }
    friend KLPoly operator-(KLPoly a, const KLPoly& b) { return a -= b; }
    friend KLPoly operator*(long long k, KLPoly a) {
        for (auto& x : a.c_) x *= k;
        a.trim();
        return a;
    }
    /// Multiply by q^k.
    KLPoly shifted(int k) const {
        if (is_zero()) return *this;
        std::vector<long long> c(k, 0);
        c.insert(c.end(), c_.begin(), c_.end());
        return KLPoly(c);
    }
    friend bool operator==(const KLPoly&, const KLPoly&) = default;

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            long long v = c_[i];
            if (!s.empty()) {
                s += v < 0 ? " - " : " + ";
                v = v < 0 ? -v : v;
            } else if (v < 0) {
                s += "-";
                v = -v;
            }
            if (i == 0 || v != 1) s += std::to_string(v);
            if (i > 0) s += i == 1 ? "q" : "q^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<long long> c_;
};

/// Coefficient of the level-j term of a polynomial indexed by (x, y): the coefficient of
/// q^{(l(x) - l(y) - j)/2}, zero on parity mismatch.
inline long long level_term(const KLPoly& p, int length_gap, int j) {
    int e = length_gap - j;
    if (e < 0 || e % 2) return 0;
    return p.coeff(e / 2);
}

enum class DescentChoice { First, Last };

/// Kazhdan-Lusztig polynomials of a reflection group, indexed as T(x, y) = P_{w0 x, w0 y}
/// (nonzero only for y <= x), computed by induction on l(x).
class KLTable {
public:
    explicit KLTable(GroupPtr W, DescentChoice choice = DescentChoice::First) : W_(std::move(W)) {
        const int n = W_->size();
        T_.assign(n, std::vector<KLPoly>(n));
        T_[W_->identity()][W_->identity()] = KLPoly::constant(1);
        for (int xp = 0; xp < n; ++xp) {
            if (xp == W_->identity()) continue;
            int s = pick_descent(xp, choice);
            int x = W_->mul_simple_right(xp, s);
            for (int y = 0; y < n; ++y) {
                int ys = W_->mul_simple_right(y, s);
                if (W_->length(ys) > W_->length(y)) {
                    T_[xp][y] = T_[x][y];
                    continue;
                }
                KLPoly acc = T_[x][ys] - T_[x][y].shifted(1);
                for (int z = 0; z < n; ++z) {
                    int gap = W_->length(z) - W_->length(y);
                    if (gap <= 0 || gap % 2 == 0) continue;
                    if (W_->length(W_->mul_simple_right(z, s)) < W_->length(z)) continue;
                    long long m = mu(z, y);
                    if (m) acc += m * T_[x][z].shifted((gap + 1) / 2);
                }
                T_[xp][y] = acc;
            }
        }
    }

    const ReflectionGroup& group() const { return *W_; }
    const GroupPtr& group_ptr() const { return W_; }
    const KLPoly& kl(int x, int y) const { return T_[x][y]; }
    /// Classical P_{u,v}.
    const KLPoly& classical(int u, int v) const {
        int w0 = W_->longest();
        return T_[W_->multiply(w0, u)][W_->multiply(w0, v)];
    }
    long long mu(int z, int y) const {
        int gap = W_->length(z) - W_->length(y);
        if (gap <= 0 || gap % 2 == 0) return 0;
        return T_[z][y].coeff((gap - 1) / 2);
    }

private:
    int pick_descent(int x, DescentChoice choice) const {
        int found = -1;
        for (int i = 0; i < W_->num_generators(); ++i)
            if (W_->length(W_->mul_simple_right(x, i)) < W_->length(x)) {
                found = i;
                if (choice == DescentChoice::First) break;
            }
        return found;
    }

    GroupPtr W_;
    std::vector<std::vector<KLPoly>> T_;
};

/// Classical P_{u,v} from the canonical basis of the Hecke algebra, built by triangular
/// correction of products C_s C_{sx}. Independent of KLTable.
inline std::vector<std::vector<KLPoly>> hecke_oracle(const ReflectionGroup& W) {
    constexpr int kMax = 120;
    if (W.size() > kMax) throw Error(ErrorKind::GroupTooLarge, "hecke_oracle: |W| = " + std::to_string(W.size()));
    using Laurent = std::map<int, long long>;  // power of v -> coefficient
    using Elem = std::map<int, Laurent>;       // group element -> coefficient of H_y
    auto add = [](Laurent& a, const Laurent& b, long long k, int shift) {
        for (auto& [e, c] : b) {
            a[e + shift] += k * c;
            if (a[e + shift] == 0) a.erase(e + shift);
        }
    };
    // (H_s + v) * b
    auto left_mul = [&](int s, const Elem& b) {
        Elem out;
        for (auto& [y, c] : b) {
            int sy = W.mul_simple_left(s, y);
            add(out[sy], c, 1, 0);
            if (W.length(sy) < W.length(y)) {
                add(out[y], c, 1, -1);
                add(out[y], c, -1, 1);
            }
            add(out[y], c, 1, 1);
        }
        for (auto it = out.begin(); it != out.end();) it = it->second.empty() ? out.erase(it) : std::next(it);
        return out;
    };
    const int n = W.size();
    std::vector<Elem> C(n);
    C[W.identity()][W.identity()] = Laurent{{0, 1}};
    for (int x = 0; x < n; ++x) {
        if (x == W.identity()) continue;
        int s = 0;
        while (!W.left_descent(x, s)) ++s;
        Elem b = left_mul(s, C[W.mul_simple_left(s, x)]);
        for (int y = n - 1; y >= 0; --y) {
            if (y == x || !b.count(y)) continue;
            auto it = b[y].find(0);
            if (it == b[y].end()) continue;
            long long k = it->second;
            for (auto& [z, c] : C[y]) {
                add(b[z], c, -k, 0);
                if (b[z].empty()) b.erase(z);
            }
        }
        C[x] = std::move(b);
    }
    std::vector<std::vector<KLPoly>> P(n, std::vector<KLPoly>(n));
    for (int x = 0; x < n; ++x)
        for (auto& [y, h] : C[x]) {
            int gap = W.length(x) - W.length(y);
            std::vector<long long> c(gap / 2 + 1, 0);
            for (auto& [e, v] : h) {
                int i2 = gap - e;
                if (i2 < 0 || i2 % 2) throw Error(ErrorKind::Internal, "hecke_oracle: unexpected exponent");
                c[i2 / 2] = v;
            }
            P[y][x] = KLPoly(c);
        }
    return P;
}

}  // namespace sigkl
