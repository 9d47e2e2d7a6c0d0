#pragma once

#include <sigkl/linalg.hpp>
#include <sigkl/rational.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace sigkl {

/// Integer vector in simple-root coordinates (element of the root lattice).
using RootVec = std::vector<int>;

inline int height(const RootVec& v) { return std::accumulate(v.begin(), v.end(), 0); }

inline bool is_nonnegative(const RootVec& v) {
    for (int x : v)
        if (x < 0) return false;
    return true;
}

inline RootVec operator+(RootVec a, const RootVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline RootVec operator-(RootVec a, const RootVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline RootVec operator*(int k, RootVec a) {
    for (auto& x : a) x *= k;
    return a;
}

/// Weight with exact rational coordinates in the simple-root basis.
class Weight {
public:
    Weight() = default;
    explicit Weight(std::size_t rank) : c_(rank, Rational(0)) {}
    explicit Weight(std::vector<Rational> coords) : c_(std::move(coords)) {}
    explicit Weight(const RootVec& v) {
        for (int x : v) c_.emplace_back(x);
    }

    std::size_t rank() const { return c_.size(); }
    const Rational& operator[](std::size_t i) const { return c_[i]; }
    Rational& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Rational>& coords() const { return c_; }

    bool in_root_lattice() const {
        for (const auto& x : c_)
            if (!is_integer(x)) return false;
        return true;
    }
    RootVec to_root_vec() const {
        if (!in_root_lattice()) throw Error(ErrorKind::NotInRootLattice, "weight " + str() + " is not in the root lattice");
        RootVec v;
        for (const auto& x : c_) v.push_back(static_cast<int>(to_long(x.get_num())));
        return v;
    }
    Rational height() const {
        Rational h = 0;
        for (const auto& x : c_) h += x;
        return h;
    }

    Weight& operator+=(const Weight& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Weight& operator-=(const Weight& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend Weight operator+(Weight a, const Weight& b) { return a += b; }
    friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
    friend Weight operator-(Weight a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Weight operator*(const Rational& k, Weight a) {
        for (auto& x : a.c_) x *= k;
        return a;
    }
    friend bool operator==(const Weight& a, const Weight& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }
    friend bool operator<(const Weight& a, const Weight& b) { return a.c_ < b.c_; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? ", " : "") + to_string(c_[i]);
        return s + ")";
    }

private:
    std::vector<Rational> c_;
};

/// Simple type (or direct sum of simple types) such as "A2", "C2", "A1xA1".
struct CartanType {
    std::vector<std::pair<char, int>> parts;

    static CartanType parse(const std::string& text) {
        CartanType t;
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::toupper(c)));
        std::size_t pos = 0;
        while (pos < s.size()) {
            char letter = s[pos++];
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (start == pos) throw Error(ErrorKind::UnknownType, "missing rank in '" + text + "'");
            int n = std::stoi(s.substr(start, pos - start));
            bool ok = false;
            switch (letter) {
                case 'A': ok = n >= 1; break;
                case 'B': ok = n >= 2; break;
                case 'C': ok = n >= 2; break;
                case 'D': ok = n >= 4; break;
                case 'E': ok = n >= 6 && n <= 8; break;
                case 'F': ok = n == 4; break;
                case 'G': ok = n == 2; break;
                default: ok = false;
            }
            if (!ok) throw Error(ErrorKind::UnknownType, "unknown Cartan type '" + text + "'");
            t.parts.emplace_back(letter, n);
            if (pos < s.size()) {
                if (s[pos] != 'X' && s[pos] != '+' && s[pos] != '*')
                    throw Error(ErrorKind::UnknownType, "bad separator in '" + text + "'");
                ++pos;
            }
        }
        if (t.parts.empty()) throw Error(ErrorKind::UnknownType, "empty Cartan type");
        return t;
    }

    int rank() const {
        int r = 0;
        for (auto& p : parts) r += p.second;
        return r;
    }

    std::string name() const {
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) s += "x";
            s += parts[i].first + std::to_string(parts[i].second);
        }
        return s;
    }
};

namespace detail {

// Gram matrix of the simple roots for one simple component (Bourbaki numbering).
inline std::vector<std::vector<int>> simple_gram(char type, int n) {
    std::vector<std::vector<int>> g(n, std::vector<int>(n, 0));
    auto link = [&](int i, int j, int v) { g[i][j] = g[j][i] = v; };
    switch (type) {
        case 'A':
            for (int i = 0; i < n; ++i) g[i][i] = 2;
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -1);
            break;
        case 'B':
            for (int i = 0; i < n; ++i) g[i][i] = (i == n - 1) ? 2 : 4;
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1, -2);
            break;
        case 'C':
            for (int i = 0; i < n; ++i) g[i][i] = (i == n - 1) ? 4 : 2;
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
            link(n - 2, n - 1, -2);
            break;
        case 'D':
            for (int i = 0; i < n; ++i) g[i][i] = 2;
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1, -1);
            link(n - 3, n - 1, -1);
            break;
        case 'E':
            for (int i = 0; i < n; ++i) g[i][i] = 2;
            link(0, 2, -1);
            link(1, 3, -1);
            link(2, 3, -1);
            for (int i = 3; i + 1 < n; ++i) link(i, i + 1, -1);
            break;
        case 'F':
            g[0][0] = g[1][1] = 4;
            g[2][2] = g[3][3] = 2;
            link(0, 1, -2);
            link(1, 2, -2);
            link(2, 3, -1);
            break;
        case 'G':
            g[0][0] = 2;
            g[1][1] = 6;
            link(0, 1, -3);
            break;
        default:
            throw Error(ErrorKind::UnknownType, std::string("type ") + type);
    }
    return g;
}

}  // namespace detail

/// Parity grading of the root lattice induced by the noncompact simple roots.
class Grading {
public:
    Grading() = default;
    explicit Grading(std::vector<bool> noncompact) : nc_(std::move(noncompact)) {}

    int eval(const RootVec& mu) const {
        int e = 0;
        for (std::size_t i = 0; i < nc_.size(); ++i)
            if (nc_[i]) e += mu[i];
        return ((e % 2) + 2) % 2;
    }
    int eval(const Weight& mu) const { return eval(mu.to_root_vec()); }
    /// (-1)^{eps(mu)}
    int sign(const RootVec& mu) const { return eval(mu) ? -1 : 1; }
    const std::vector<bool>& noncompact() const { return nc_; }

private:
    std::vector<bool> nc_;
};

/// Root system with a compactness marking on the simple roots.
class RootDatum {
public:
    RootDatum(const CartanType& type, std::vector<bool> noncompact) : type_(type) {
        const int r = type.rank();
        if (static_cast<int>(noncompact.size()) != r)
            throw Error(ErrorKind::InconsistentMarking, "marking has " + std::to_string(noncompact.size()) +
                                                            " entries, rank is " + std::to_string(r));
        gram_.assign(r, std::vector<int>(r, 0));
        int off = 0;
        for (auto [letter, n] : type.parts) {
            auto g = detail::simple_gram(letter, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) gram_[off + i][off + j] = g[i][j];
            off += n;
        }
        rank_ = r;
        grading_ = Grading(std::move(noncompact));
        build_roots();
        check_marking_closed();
    }

    /// Build from a compactness assignment on every positive root (indexed by root coordinates).
    /// The assignment must be closed under addition and agree with the parity grading.
    static RootDatum from_root_marking(const CartanType& type, const std::map<RootVec, bool>& noncompact_root) {
        std::vector<bool> simple(type.rank(), false);
        for (int i = 0; i < type.rank(); ++i) {
            RootVec e(type.rank(), 0);
            e[i] = 1;
            auto it = noncompact_root.find(e);
            if (it == noncompact_root.end()) throw Error(ErrorKind::InconsistentMarking, "simple root missing from marking");
            simple[i] = it->second;
        }
        RootDatum d(type, simple);
        for (int a = 0; a < d.num_positive(); ++a) {
            auto it = noncompact_root.find(d.root(a));
            if (it == noncompact_root.end()) throw Error(ErrorKind::InconsistentMarking, "positive root missing from marking");
        }
        for (int a = 0; a < d.num_positive(); ++a)
            for (int b = 0; b < d.num_positive(); ++b) {
                int c = d.root_index(d.root(a) + d.root(b));
                if (c < 0) continue;
                bool na = noncompact_root.at(d.root(a)), nb = noncompact_root.at(d.root(b)),
                     nc = noncompact_root.at(d.root(c));
                if (!na && !nb && nc) throw Error(ErrorKind::InconsistentMarking, "compact roots not closed under addition");
                if (nc != (na != nb)) throw Error(ErrorKind::InconsistentMarking, "marking is not a parity grading");
            }
        return d;
    }

    const CartanType& type() const { return type_; }
    int rank() const { return rank_; }
    int num_positive() const { return static_cast<int>(roots_.size()); }
    const RootVec& root(int i) const { return roots_[i]; }
    const std::vector<RootVec>& positive_roots() const { return roots_; }
    /// Index of a positive root in the fixed order, or -1.
    int root_index(const RootVec& v) const {
        auto it = index_.find(v);
        return it == index_.end() ? -1 : it->second;
    }
    int simple_root_index(int i) const { return simple_index_[i]; }
    int root_height(int i) const { return height(roots_[i]); }

    const Grading& grading() const { return grading_; }
    bool is_noncompact(int root) const { return grading_.eval(roots_[root]) == 1; }
    bool simple_noncompact(int i) const { return grading_.noncompact()[i]; }

    /// (alpha_i, alpha_j) with the normalization of the type tables.
    int simple_form(int i, int j) const { return gram_[i][j]; }
    /// Cartan integer (alpha_i, alpha_j^vee).
    int cartan(int i, int j) const { return 2 * gram_[i][j] / gram_[j][j]; }

    Rational form(const Weight& a, const Weight& b) const {
        Rational s = 0;
        for (int i = 0; i < rank_; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < rank_; ++j)
                if (gram_[i][j] != 0) s += a[i] * b[j] * gram_[i][j];
        }
        return s;
    }
    int form(const RootVec& a, const RootVec& b) const {
        int s = 0;
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j) s += a[i] * b[j] * gram_[i][j];
        return s;
    }
    int norm2(int root) const { return norm_[root]; }

    /// (mu, beta^vee) for the positive root with the given index.
    Rational pairing(const Weight& mu, int root) const {
        Rational s = 0;
        const auto& v = pair_vec_[root];
        for (int i = 0; i < rank_; ++i)
            if (v[i] != 0 && mu[i] != 0) s += mu[i] * v[i];
        return s;
    }
    int pairing(const RootVec& mu, int root) const {
        int s = 0;
        const auto& v = pair_vec_[root];
        for (int i = 0; i < rank_; ++i) s += mu[i] * v[i];
        return s;
    }
    /// Coordinates of beta^vee in the basis of simple coroots.
    const std::vector<int>& coroot_coords(int root) const { return coroot_[root]; }

    Weight reflect(int root, const Weight& mu) const {
        return mu - pairing(mu, root) * Weight(roots_[root]);
    }
    RootVec reflect(int root, const RootVec& mu) const {
        return mu - pairing(mu, root) * roots_[root];
    }

    const Weight& rho() const { return rho_; }
    const Weight& fundamental_weight(int i) const { return fund_[i]; }
    /// Index of the highest coroot among positive roots (the root whose coroot has maximal height).
    int highest_coroot() const { return highest_coroot_; }
    int highest_root() const { return num_positive() - 1; }

    /// Weight from coordinates in the fundamental-weight basis, i.e. prescribed (lambda, alpha_i^vee).
    Weight from_pairings(const std::vector<Rational>& a) const {
        Weight w(rank_);
        for (int i = 0; i < rank_; ++i) w += a[i] * fund_[i];
        return w;
    }

private:
    void build_roots() {
        // Orbit of simple roots under simple reflections, positive part.
        std::vector<RootVec> all;
        std::map<RootVec, int> seen;
        for (int i = 0; i < rank_; ++i) {
            RootVec e(rank_, 0);
            e[i] = 1;
            seen[e] = 1;
            all.push_back(e);
        }
        for (std::size_t k = 0; k < all.size(); ++k) {
            for (int i = 0; i < rank_; ++i) {
                RootVec v = all[k];
                int p = 0;
                for (int j = 0; j < rank_; ++j) p += v[j] * cartan(j, i);
                v[i] -= p;
                if (is_nonnegative(v) && height(v) > 0 && !seen.count(v)) {
                    seen[v] = 1;
                    all.push_back(v);
                }
            }
        }
        std::sort(all.begin(), all.end(), [](const RootVec& a, const RootVec& b) {
            int ha = height(a), hb = height(b);
            if (ha != hb) return ha < hb;
            return a > b;  // lex descending: alpha_1 before alpha_2
        });
        roots_ = all;
        for (int i = 0; i < num_positive(); ++i) index_[roots_[i]] = i;
        simple_index_.resize(rank_);
        for (int i = 0; i < rank_; ++i) {
            RootVec e(rank_, 0);
            e[i] = 1;
            simple_index_[i] = index_.at(e);
        }
        norm_.resize(roots_.size());
        pair_vec_.resize(roots_.size());
        coroot_.resize(roots_.size());
        for (int a = 0; a < num_positive(); ++a) {
            norm_[a] = form(roots_[a], roots_[a]);
            pair_vec_[a].resize(rank_);
            coroot_[a].resize(rank_);
            for (int i = 0; i < rank_; ++i) {
                RootVec e(rank_, 0);
                e[i] = 1;
                pair_vec_[a][i] = 2 * form(e, roots_[a]) / norm_[a];
                coroot_[a][i] = roots_[a][i] * gram_[i][i] / norm_[a];
            }
        }
        rho_ = Weight(rank_);
        for (auto& r : roots_) rho_ += Rational(1, 2) * Weight(r);
        // Fundamental weights: rows of the inverse Cartan matrix.
        Matrix<Rational> C(rank_, rank_);
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j) C(i, j) = cartan(i, j);
        fund_.clear();
        for (int i = 0; i < rank_; ++i) {
            // Solve c^T C = e_i^T.
            Matrix<Rational> aug(rank_, rank_ + 1);
            for (int k = 0; k < rank_; ++k) {
                for (int j = 0; j < rank_; ++j) aug(j, k) = C(k, j);
                aug(k, rank_) = (k == i) ? -1 : 0;
            }
            auto ker = nullspace(aug);
            std::vector<Rational> c(rank_);
            for (auto& v : ker)
                if (v[rank_] != 0) {
                    for (int k = 0; k < rank_; ++k) c[k] = v[k] / v[rank_];
                    break;
                }
            fund_.emplace_back(c);
        }
        highest_coroot_ = 0;
        for (int a = 0; a < num_positive(); ++a) {
            int h = std::accumulate(coroot_[a].begin(), coroot_[a].end(), 0);
            int hb = std::accumulate(coroot_[highest_coroot_].begin(), coroot_[highest_coroot_].end(), 0);
            if (h > hb) highest_coroot_ = a;
        }
    }

    void check_marking_closed() const {
        for (int a = 0; a < num_positive(); ++a)
            for (int b = 0; b < num_positive(); ++b) {
                if (is_noncompact(a) || is_noncompact(b)) continue;
                for (int sgn_b : {1, -1}) {
                    RootVec s = roots_[a] + sgn_b * roots_[b];
                    RootVec pos = is_nonnegative(s) ? s : (-1) * s;
                    int c = root_index(pos);
                    if (c >= 0 && is_noncompact(c))
                        throw Error(ErrorKind::InconsistentMarking, "compact roots not closed under addition");
                }
            }
    }

    CartanType type_;
    int rank_ = 0;
    std::vector<std::vector<int>> gram_;
    Grading grading_;
    std::vector<RootVec> roots_;
    std::map<RootVec, int> index_;
    std::vector<int> simple_index_;
    std::vector<int> norm_;
    std::vector<std::vector<int>> pair_vec_;
    std::vector<std::vector<int>> coroot_;
    Weight rho_;
    std::vector<Weight> fund_;
    int highest_coroot_ = 0;
};

using DatumPtr = std::shared_ptr<const RootDatum>;

inline DatumPtr build_root_datum(const std::string& type, const std::vector<bool>& noncompact) {
    return std::make_shared<const RootDatum>(CartanType::parse(type), noncompact);
}

/// Exponent vectors n (over positive roots, fixed order) with sum n_b * beta_b = mu.
inline std::vector<std::vector<int>> pbw_exponents(const RootDatum& d, const RootVec& mu) {
    std::vector<std::vector<int>> out;
    if (!is_nonnegative(mu)) return out;
    std::vector<int> cur(d.num_positive(), 0);
    // Assign exponents from the last root backward so the recursion ends on simple roots.
    std::function<void(int, RootVec)> rec = [&](int k, RootVec rem) {
        if (k < 0) {
            for (int x : rem)
                if (x != 0) return;
            out.push_back(cur);
            return;
        }
        const RootVec& b = d.root(k);
        int maxn = 1 << 20;
        for (int i = 0; i < d.rank(); ++i)
            if (b[i] > 0) maxn = std::min(maxn, rem[i] / b[i]);
        for (int n = 0; n <= maxn; ++n) {
            cur[k] = n;
            rec(k - 1, rem - n * b);
        }
        cur[k] = 0;
    };
    rec(d.num_positive() - 1, mu);
    std::sort(out.begin(), out.end());
    return out;
}

/// Kostant's partition function P(mu).
class KostantPartition {
public:
    explicit KostantPartition(DatumPtr d) : d_(std::move(d)) {}

    long long operator()(const RootVec& mu) const {
        if (!is_nonnegative(mu)) return 0;
        return count(mu, d_->num_positive() - 1);
    }
    long long operator()(const Weight& mu) const {
        if (!mu.in_root_lattice()) return 0;
        return (*this)(mu.to_root_vec());
    }

private:
    long long count(const RootVec& mu, int k) const {
        if (k < 0) {
            for (int x : mu)
                if (x) return 0;
            return 1;
        }
        auto key = std::make_pair(mu, k);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        long long total = 0;
        RootVec rem = mu;
        const RootVec& b = d_->root(k);
        while (is_nonnegative(rem)) {
            total += count(rem, k - 1);
            rem = rem - b;
        }
        memo_[key] = total;
        return total;
    }

    DatumPtr d_;
    mutable std::map<std::pair<RootVec, int>, long long> memo_;
};

inline long long kostant_partition(const RootDatum& d, const RootVec& mu) {
    auto p = std::make_shared<const RootDatum>(d);
    return KostantPartition(p)(mu);
}

/// Multiplicity of mu in the irreducible finite-dimensional module of highest weight `highest`
/// (Freudenthal's formula).
inline long long weight_multiplicity(const RootDatum& d, const Weight& highest, const Weight& mu) {
    for (int i = 0; i < d.rank(); ++i) {
        Rational p = 0;
        for (int j = 0; j < d.rank(); ++j) p += highest[j] * d.cartan(j, i);
        if (!is_integer(p) || p < 0) throw Error(ErrorKind::Config, "highest weight is not dominant integral");
    }
    Weight diff = highest - mu;
    if (!diff.in_root_lattice()) return 0;
    RootVec kappa = diff.to_root_vec();
    if (!is_nonnegative(kappa)) return 0;
    const Weight lr = highest + d.rho();
    const Rational top = d.form(lr, lr);
    std::map<RootVec, Rational> memo;
    std::function<Rational(const RootVec&)> m = [&](const RootVec& k) -> Rational {
        if (!is_nonnegative(k)) return 0;
        if (height(k) == 0) return 1;
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        Weight nu = highest - Weight(k);
        Weight nr = nu + d.rho();
        Rational denom = top - d.form(nr, nr);
        Rational val = 0;
        if (denom != 0) {
            Rational sum = 0;
            for (int a = 0; a < d.num_positive(); ++a) {
                const RootVec& al = d.root(a);
                RootVec kk = k - al;
                int step = 1;
                while (is_nonnegative(kk)) {
                    Weight shifted = nu + Rational(step) * Weight(al);
                    Rational mult = m(kk);
                    if (mult != 0) sum += d.form(shifted, Weight(al)) * mult;
                    kk = kk - al;
                    ++step;
                }
            }
            val = 2 * sum / denom;
        }
        memo[k] = val;
        return val;
    };
    Rational r = m(kappa);
    if (!is_integer(r)) throw Error(ErrorKind::Internal, "non-integral Freudenthal multiplicity");
    return to_long(r.get_num());
}

/// All mu in the positive root cone with height <= h (including 0), ordered by height then lex.
inline std::vector<RootVec> cone_elements(int rank, int h) {
    std::vector<RootVec> out;
    RootVec cur(rank, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == rank) {
            out.push_back(cur);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            cur[i] = x;
            rec(i + 1, left - x);
        }
        cur[i] = 0;
    };
    rec(0, h);
    std::stable_sort(out.begin(), out.end(), [](const RootVec& a, const RootVec& b) {
        int ha = height(a), hb = height(b);
        if (ha != hb) return ha < hb;
        return a > b;
    });
    return out;
}

}  // namespace sigkl
