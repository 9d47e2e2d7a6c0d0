#pragma once

#include <sigkl/linalg.hpp>
#include <sigkl/poly.hpp>
#include <sigkl/rootcore.hpp>

#include <algorithm>
#include <map>
#include <type_traits>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace sigkl {

/// Chevalley-basis structure constants [X_a, X_b] = N_{a,b} X_{a+b}.
/// Roots are indexed 0..2P-1: index a < P is the positive root a, index a + P is its negative.
/// Signs follow the extraspecial-pair convention (N = p + 1 on extraspecial pairs).
class StructureConstants {
public:
    explicit StructureConstants(DatumPtr d) : d_(std::move(d)) {
        P_ = d_->num_positive();
        for (int a = 0; a < 2 * P_; ++a) {
            vecs_.push_back(a < P_ ? d_->root(a) : (-1) * d_->root(a - P_));
            index_[vecs_.back()] = a;
        }
        table_.assign(4 * P_ * P_, kUnknown);
        extraspecial_.assign(P_, -1);
        for (int xi = 0; xi < P_; ++xi)
            for (int a = 0; a < P_; ++a) {
                RootVec rest = d_->root(xi) - d_->root(a);
                if (is_nonnegative(rest) && d_->root_index(rest) >= 0) {
                    extraspecial_[xi] = a;
                    break;
                }
            }
        for (int a = 0; a < 2 * P_; ++a)
            for (int b = 0; b < 2 * P_; ++b) compute(a, b);
    }

    const RootDatum& datum() const { return *d_; }
    int num_positive() const { return P_; }
    int num_roots() const { return 2 * P_; }
    bool positive(int a) const { return a < P_; }
    int neg(int a) const { return a < P_ ? a + P_ : a - P_; }
    int base(int a) const { return a < P_ ? a : a - P_; }
    const RootVec& vec(int a) const { return vecs_[a]; }
    int index(const RootVec& v) const {
        auto it = index_.find(v);
        return it == index_.end() ? -1 : it->second;
    }
    /// Index of a + b if it is a root, else -1.
    int sum(int a, int b) const { return index(vecs_[a] + vecs_[b]); }
    int N(int a, int b) const { return table_[a * 2 * P_ + b]; }
    int norm2(int a) const { return d_->norm2(base(a)); }

private:
    static constexpr int kUnknown = 1 << 30;

    int compute(int a, int b) {
        int& slot = table_[a * 2 * P_ + b];
        if (slot != kUnknown) return slot;
        int result = 0;
        int s = sum(a, b);
        if (a == b || a == neg(b) || s < 0) {
            result = 0;
        } else if (positive(a) && positive(b)) {
            if (a > b) {
                result = -compute(b, a);
            } else {
                int xi = s;
                int r1 = extraspecial_[xi];
                int s1 = index(vecs_[xi] - vecs_[r1]);
                int p = 0;
                while (index(vecs_[s1] - (p + 1) * vecs_[r1]) >= 0) ++p;
                if (a == r1) {
                    result = p + 1;
                } else {
                    Rational acc = 0;
                    if (sum(b, neg(r1)) >= 0)
                        acc += Rational(compute(b, neg(r1)) * compute(a, neg(s1))) / norm2(sum(b, neg(r1)));
                    if (sum(a, neg(r1)) >= 0)
                        acc += Rational(compute(neg(r1), a) * compute(b, neg(s1))) / norm2(sum(a, neg(r1)));
                    acc *= Rational(norm2(xi)) / (p + 1);
                    result = integral(acc);
                }
            }
        } else if (!positive(a) && !positive(b)) {
            result = -compute(neg(a), neg(b));
        } else {
            int c = neg(s);
            if (positive(b) == positive(c))
                result = integral(Rational(norm2(c) * compute(b, c)) / norm2(a));
            else
                result = integral(Rational(norm2(c) * compute(c, a)) / norm2(b));
        }
        table_[a * 2 * P_ + b] = result;
        return result;
    }

    static int integral(const Rational& r) {
        if (!is_integer(r)) throw Error(ErrorKind::Internal, "non-integral structure constant " + to_string(r));
        return static_cast<int>(to_long(r.get_num()));
    }

    DatumPtr d_;
    int P_ = 0;
    std::vector<RootVec> vecs_;
    std::map<RootVec, int> index_;
    std::vector<int> table_;
    std::vector<int> extraspecial_;
};

/// Root datum plus the derived tables every computation needs.
struct LieAlgebra {
    DatumPtr datum;
    std::shared_ptr<const StructureConstants> sc;
    std::shared_ptr<const KostantPartition> kostant;

    static std::shared_ptr<const LieAlgebra> make(DatumPtr d) {
        auto a = std::make_shared<LieAlgebra>();
        a->datum = d;
        a->sc = std::make_shared<const StructureConstants>(d);
        a->kostant = std::make_shared<const KostantPartition>(d);
        return a;
    }
    const RootDatum& d() const { return *datum; }
};
using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

enum class FormKind { Contravariant, Hermitian };

template <class R>
R ring_from(const Integer& z) {
    return R(Rational(z));
}
template <>
inline Integer ring_from<Integer>(const Integer& z) {
    return z;
}

/// Generators of U(g) used in words: Y_beta, H_i, X_beta.
struct Letter {
    enum Kind : int { Y = 0, H = 1, X = 2 };
    int kind;
    int idx;  // positive-root index for Y/X, simple index for H
    int key() const { return kind * 100000 + idx; }
    friend bool operator==(const Letter&, const Letter&) = default;
};

/// Element of U(g) in normal order (Y-part, H-part, X-part) with coefficients in R.
/// A normal word is stored as the exponent vector [y_0..y_{P-1}, h_0..h_{r-1}, x_0..x_{P-1}].
template <class R>
class UElement {
public:
    using Word = std::vector<int>;
    std::map<Word, R> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const Word& w, const R& c) {
        if (c == R(0)) return;
        auto it = terms.find(w);
        if (it == terms.end()) {
            terms.emplace(w, c);
        } else {
            it->second += c;
            if (it->second == R(0)) terms.erase(it);
        }
    }
    UElement& operator+=(const UElement& o) {
        for (auto& [w, c] : o.terms) add(w, c);
        return *this;
    }
    UElement& operator-=(const UElement& o) {
        for (auto& [w, c] : o.terms) add(w, R(0) - c);
        return *this;
    }
    UElement scaled(const R& k) const {
        UElement u;
        for (auto& [w, c] : terms) u.add(w, c * k);
        return u;
    }
    friend bool operator==(const UElement& a, const UElement& b) { return a.terms == b.terms; }
};

/// Straightening in U(g): rewrites products of letters into normal order.
class Enveloping {
public:
    explicit Enveloping(AlgebraPtr alg) : alg_(std::move(alg)) {
        P_ = alg_->d().num_positive();
        r_ = alg_->d().rank();
    }

    const LieAlgebra& algebra() const { return *alg_; }
    int word_size() const { return 2 * P_ + r_; }

    template <class R>
    UElement<R> letter(Letter l) const {
        UElement<R> u;
        u.add(word_of({l}), R(1));
        return u;
    }
    template <class R>
    UElement<R> one() const {
        UElement<R> u;
        u.add(std::vector<int>(word_size(), 0), R(1));
        return u;
    }

    /// Letters of a normal word, left to right.
    std::vector<Letter> letters(const std::vector<int>& w) const {
        std::vector<Letter> seq;
        for (int a = 0; a < P_; ++a)
            for (int k = 0; k < w[a]; ++k) seq.push_back({Letter::Y, a});
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < w[P_ + i]; ++k) seq.push_back({Letter::H, i});
        for (int a = 0; a < P_; ++a)
            for (int k = 0; k < w[P_ + r_ + a]; ++k) seq.push_back({Letter::X, a});
        return seq;
    }

    /// Normal form of an arbitrary product of letters.
    UElement<Integer> straighten_letters(const std::vector<Letter>& seq) const {
        std::vector<int> key;
        for (auto& l : seq) key.push_back(l.key());
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        UElement<Integer> out;
        std::size_t i = 0;
        while (i + 1 < seq.size() && seq[i].key() <= seq[i + 1].key()) ++i;
        if (i + 1 >= seq.size()) {
            out.add(word_of(seq), Integer(1));
        } else {
            // ab = ba + [a, b]
            std::vector<Letter> swapped = seq;
            std::swap(swapped[i], swapped[i + 1]);
            out += straighten_letters(swapped);
            for (auto& [l, c] : bracket(seq[i], seq[i + 1])) {
                std::vector<Letter> rep(seq.begin(), seq.begin() + i);
                rep.push_back(l);
                rep.insert(rep.end(), seq.begin() + i + 2, seq.end());
                out += straighten_letters(rep).scaled(Integer(c));
            }
        }
        memo_.emplace(key, out);
        return out;
    }

    template <class R>
    UElement<R> straighten(const UElement<R>& u) const {
        // Terms are kept in normal order by construction; re-straighten defensively.
        UElement<R> out;
        for (auto& [w, c] : u.terms)
            for (auto& [w2, c2] : straighten_letters(letters(w)).terms) out.add(w2, c * ring_from<R>(c2));
        return out;
    }

    template <class R>
    UElement<R> multiply(const UElement<R>& a, const UElement<R>& b) const {
        UElement<R> out;
        for (auto& [wa, ca] : a.terms)
            for (auto& [wb, cb] : b.terms) {
                auto seq = letters(wa);
                auto sb = letters(wb);
                seq.insert(seq.end(), sb.begin(), sb.end());
                R cab = ca * cb;
                for (auto& [w, c] : straighten_letters(seq).terms) out.add(w, cab * ring_from<R>(c));
            }
        return out;
    }

    /// Anti-involution fixing H: X_b -> sign(b) Y_b, Y_b -> sign(b) X_b, with sign = (-1)^{eps(b)}
    /// for star and +1 for sigma.
    template <class R>
    UElement<R> star(const UElement<R>& u) const {
        return anti(u, true);
    }
    template <class R>
    UElement<R> sigma(const UElement<R>& u) const {
        return anti(u, false);
    }

    /// Drop words with nonzero Y- or X-part and evaluate the H-part at lambda - rho.
    Rational project_h_and_eval(const UElement<Rational>& u, const Weight& lambda) const {
        const RootDatum& d = alg_->d();
        std::vector<Rational> h(r_);
        for (int i = 0; i < r_; ++i) h[i] = d.pairing(lambda, d.simple_root_index(i)) - 1;
        Rational total = 0;
        for (auto& [w, c] : u.terms) {
            bool pure = true;
            for (int a = 0; a < P_; ++a)
                if (w[a] || w[P_ + r_ + a]) pure = false;
            if (!pure) continue;
            Rational term = c;
            for (int i = 0; i < r_; ++i)
                for (int k = 0; k < w[P_ + i]; ++k) term *= h[i];
            total += term;
        }
        return total;
    }

    /// Lie bracket of two generators as a combination of generators.
    std::vector<std::pair<Letter, int>> bracket(Letter a, Letter b) const {
        const RootDatum& d = alg_->d();
        const StructureConstants& sc = *alg_->sc;
        std::vector<std::pair<Letter, int>> out;
        auto root_of = [&](Letter l) { return l.kind == Letter::X ? l.idx : sc.neg(l.idx); };
        auto letter_of = [&](int root) {
            return sc.positive(root) ? Letter{Letter::X, root} : Letter{Letter::Y, sc.base(root)};
        };
        if (a.kind == Letter::H && b.kind == Letter::H) return out;
        if (a.kind == Letter::H || b.kind == Letter::H) {
            bool flip = (b.kind == Letter::H);
            Letter h = flip ? b : a, e = flip ? a : b;
            int c = d.pairing(d.root(e.idx), d.simple_root_index(h.idx));
            if (e.kind == Letter::Y) c = -c;
            if (flip) c = -c;
            if (c) out.push_back({e, c});
            return out;
        }
        int ra = root_of(a), rb = root_of(b);
        if (ra == sc.neg(rb)) {
            // [X_b, Y_b] = H_b = sum_i c_i H_i
            int sign = sc.positive(ra) ? 1 : -1;
            const auto& cc = d.coroot_coords(sc.base(ra));
            for (int i = 0; i < r_; ++i)
                if (cc[i]) out.push_back({Letter{Letter::H, i}, sign * cc[i]});
            return out;
        }
        int s = sc.sum(ra, rb);
        if (s >= 0) out.push_back({letter_of(s), sc.N(ra, rb)});
        return out;
    }

private:
    std::vector<int> word_of(const std::vector<Letter>& seq) const {
        std::vector<int> w(word_size(), 0);
        for (auto& l : seq) {
            if (l.kind == Letter::Y) ++w[l.idx];
            if (l.kind == Letter::H) ++w[P_ + l.idx];
            if (l.kind == Letter::X) ++w[P_ + r_ + l.idx];
        }
        return w;
    }

    template <class R>
    UElement<R> anti(const UElement<R>& u, bool hermitian) const {
        const RootDatum& d = alg_->d();
        UElement<R> out;
        for (auto& [w, c] : u.terms) {
            auto seq = letters(w);
            std::reverse(seq.begin(), seq.end());
            int sign = 1;
            for (auto& l : seq) {
                if (l.kind == Letter::H) continue;
                if (hermitian && d.is_noncompact(l.idx)) sign = -sign;
                l.kind = (l.kind == Letter::X) ? Letter::Y : Letter::X;
            }
            R cs = (sign > 0) ? c : R(0) - c;
            for (auto& [w2, c2] : straighten_letters(seq).terms) out.add(w2, cs * ring_from<R>(c2));
        }
        return out;
    }

    AlgebraPtr alg_;
    int P_ = 0, r_ = 0;
    mutable std::map<std::vector<int>, UElement<Integer>> memo_;
};

/// Monomial basis Y_{b_0}^{n_0} ... Y_{b_{P-1}}^{n_{P-1}} of U(n^-) acting on the highest weight vector.
using Mono = std::vector<int>;

/// Verma module with highest weight given by (lambda - rho, alpha_i^vee) in the ring R.
/// Provides the action of root vectors on PBW monomials and Gram matrices of both forms.
template <class R>
class VermaModule {
public:
    using Vec = std::map<Mono, R>;
    static constexpr int kDefaultMaxHeight = 40;

    VermaModule(AlgebraPtr alg, std::vector<R> hw_minus_rho, int max_height = kDefaultMaxHeight)
        : alg_(std::move(alg)), hw_(std::move(hw_minus_rho)), max_height_(max_height) {
        P_ = alg_->d().num_positive();
    }

    /// M(lambda): highest weight lambda - rho.
    static VermaModule at(AlgebraPtr alg, const Weight& lambda, int max_height = kDefaultMaxHeight)
        requires std::is_same_v<R, Rational>
    {
        std::vector<Rational> hw;
        for (int i = 0; i < alg->d().rank(); ++i) hw.push_back(alg->d().pairing(lambda, alg->d().simple_root_index(i)) - 1);
        return VermaModule(alg, hw, max_height);
    }
    /// M(lambda0 + t delta) over Q[t].
    static VermaModule deformed(AlgebraPtr alg, const Weight& lambda0, const Weight& delta,
                                int max_height = kDefaultMaxHeight)
        requires std::is_same_v<R, QPoly>
    {
        std::vector<QPoly> hw;
        const RootDatum& d = alg->d();
        for (int i = 0; i < d.rank(); ++i) {
            int a = d.simple_root_index(i);
            hw.push_back(QPoly::linear(d.pairing(lambda0, a) - 1, d.pairing(delta, a)));
        }
        return VermaModule(alg, hw, max_height);
    }

    const LieAlgebra& algebra() const { return *alg_; }

    const std::vector<Mono>& basis(const RootVec& mu) const {
        auto it = basis_.find(mu);
        if (it != basis_.end()) return it->second;
        if (height(mu) > max_height_) throw Error(ErrorKind::CutoffExceeded, "weight height exceeds cutoff");
        auto b = pbw_exponents(alg_->d(), mu);
        std::map<Mono, int> idx;
        for (std::size_t k = 0; k < b.size(); ++k) idx[b[k]] = static_cast<int>(k);
        basis_index_[mu] = std::move(idx);
        return basis_.emplace(mu, std::move(b)).first->second;
    }
    int basis_position(const RootVec& mu, const Mono& m) const {
        basis(mu);
        return basis_index_.at(mu).at(m);
    }

    RootVec weight_of(const Mono& m) const {
        RootVec w(alg_->d().rank(), 0);
        for (int a = 0; a < P_; ++a)
            if (m[a]) w = w + m[a] * alg_->d().root(a);
        return w;
    }

    /// Y_gamma * m (product in U(n^-), expressed in the PBW basis).
    const Vec& applyY(int gamma, const Mono& m) const {
        auto key = std::make_pair(gamma, m);
        auto it = ymemo_.find(key);
        if (it != ymemo_.end()) return it->second;
        Vec out;
        int first = first_root(m);
        if (first < 0 || gamma <= first) {
            Mono n = m;
            ++n[gamma];
            out.emplace(n, R(1));
        } else {
            const StructureConstants& sc = *alg_->sc;
            Mono rest = m;
            --rest[first];
            // Y_g Y_f rest = Y_f (Y_g rest) + [Y_g, Y_f] rest
            for (auto& [k, c] : applyY(gamma, rest)) accumulate(out, applyY(first, k), c);
            int s = sc.sum(sc.neg(gamma), sc.neg(first));
            if (s >= 0) accumulate(out, applyY(sc.base(s), rest), R(sc.N(sc.neg(gamma), sc.neg(first))));
        }
        return ymemo_.emplace(key, std::move(out)).first->second;
    }

    /// X_gamma applied to m v.
    const Vec& applyX(int gamma, const Mono& m) const {
        auto key = std::make_pair(gamma, m);
        auto it = xmemo_.find(key);
        if (it != xmemo_.end()) return it->second;
        Vec out;
        int first = first_root(m);
        if (first >= 0) {
            const RootDatum& d = alg_->d();
            const StructureConstants& sc = *alg_->sc;
            Mono rest = m;
            --rest[first];
            // X_g Y_f rest v = Y_f X_g rest v + [X_g, Y_f] rest v
            for (auto& [k, c] : applyX(gamma, rest)) accumulate(out, applyY(first, k), c);
            if (gamma == first) {
                R h = h_value(first, weight_of(rest));
                if (!(h == R(0))) accumulate_one(out, rest, h);
            } else {
                int s = sc.sum(gamma, sc.neg(first));
                if (s >= 0) {
                    R n(sc.N(gamma, sc.neg(first)));
                    if (sc.positive(s))
                        accumulate(out, applyX(s, rest), n);
                    else
                        accumulate(out, applyY(sc.base(s), rest), n);
                }
            }
            (void)d;
        }
        return xmemo_.emplace(key, std::move(out)).first->second;
    }

    /// Gram matrix on the weight space lambda - rho - mu.
    const Matrix<R>& gram(FormKind kind, const RootVec& mu) const {
        auto key = std::make_pair(static_cast<int>(kind), mu);
        auto it = gmemo_.find(key);
        if (it != gmemo_.end()) return it->second;
        const auto& B = basis(mu);
        const int n = static_cast<int>(B.size());
        Matrix<R> G(n, n);
        if (height(mu) == 0) {
            G(0, 0) = R(1);
        } else {
            const RootDatum& d = alg_->d();
            for (int j = 0; j < n; ++j) {
                int f = first_root(B[j]);
                Mono rest = B[j];
                --rest[f];
                RootVec lower = mu - d.root(f);
                const Matrix<R>& Gl = gram(kind, lower);
                int col = basis_position(lower, rest);
                bool flip = (kind == FormKind::Hermitian) && d.is_noncompact(f);
                for (int i = 0; i < n; ++i) {
                    R acc(0);
                    for (auto& [k, c] : applyX(f, B[i])) acc += c * Gl(basis_position(lower, k), col);
                    G(i, j) = flip ? R(0) - acc : acc;
                }
            }
        }
        return gmemo_.emplace(key, std::move(G)).first->second;
    }

private:
    static int first_root(const Mono& m) {
        for (std::size_t a = 0; a < m.size(); ++a)
            if (m[a]) return static_cast<int>(a);
        return -1;
    }
    static void accumulate(Vec& out, const Vec& v, const R& c) {
        for (auto& [k, x] : v) accumulate_one(out, k, x * c);
    }
    static void accumulate_one(Vec& out, const Mono& k, const R& x) {
        if (x == R(0)) return;
        auto it = out.find(k);
        if (it == out.end()) {
            out.emplace(k, x);
        } else {
            it->second += x;
            if (it->second == R(0)) out.erase(it);
        }
    }
    /// (lambda - rho - nu, beta^vee)
    R h_value(int beta, const RootVec& nu) const {
        const RootDatum& d = alg_->d();
        const auto& cc = d.coroot_coords(beta);
        R acc(0);
        for (int i = 0; i < d.rank(); ++i)
            if (cc[i]) acc += hw_[i] * R(cc[i]);
        acc -= R(d.pairing(nu, beta));
        return acc;
    }

    AlgebraPtr alg_;
    std::vector<R> hw_;
    int max_height_;
    int P_ = 0;
    mutable std::map<RootVec, std::vector<Mono>> basis_;
    mutable std::map<RootVec, std::map<Mono, int>> basis_index_;
    mutable std::map<std::pair<int, Mono>, Vec> ymemo_, xmemo_;
    mutable std::map<std::pair<int, RootVec>, Matrix<R>> gmemo_;
};

inline Matrix<Rational> gram(AlgebraPtr alg, FormKind kind, const Weight& lambda, const RootVec& mu) {
    return VermaModule<Rational>::at(alg, lambda).gram(kind, mu);
}

inline Matrix<QPoly> gram_deformed(AlgebraPtr alg, FormKind kind, const Weight& lambda0, const Weight& delta,
                                   const RootVec& mu) {
    return VermaModule<QPoly>::deformed(alg, lambda0, delta).gram(kind, mu);
}

inline Rational shapovalov_determinant(AlgebraPtr alg, const Weight& lambda, const RootVec& mu) {
    return determinant(gram(alg, FormKind::Contravariant, lambda, mu));
}

/// prod_{alpha > 0} prod_{n >= 1} ((lambda, alpha^vee) - n)^{P(mu - n alpha)}
inline Rational det_product_formula(AlgebraPtr alg, const Weight& lambda, const RootVec& mu) {
    const RootDatum& d = alg->d();
    Rational prod = 1;
    for (int a = 0; a < d.num_positive(); ++a) {
        Rational p = d.pairing(lambda, a);
        for (int n = 1;; ++n) {
            RootVec rest = mu - n * d.root(a);
            if (!is_nonnegative(rest)) break;
            long long e = (*alg->kostant)(rest);
            Rational f = p - n;
            for (long long k = 0; k < e; ++k) prod *= f;
        }
    }
    return prod;
}

/// Normalized generator f of the radical of the contravariant form at weight N gamma.
struct SingularVector {
    RootVec weight;
    std::vector<Mono> monomials;      // basis of the weight space, in basis order
    std::vector<Integer> coefficients;  // coprime, first nonzero positive

    std::vector<Rational> as_rational() const {
        std::vector<Rational> v;
        for (auto& c : coefficients) v.emplace_back(c);
        return v;
    }
};

inline SingularVector singular_vector(AlgebraPtr alg, const Weight& lambda0, int gamma, int N) {
    const RootDatum& d = alg->d();
    if (N <= 0 || d.pairing(lambda0, gamma) != N)
        throw Error(ErrorKind::NotOnHyperplane, "point " + lambda0.str() + " is not on H_{gamma," + std::to_string(N) + "}");
    RootVec mu = N * d.root(gamma);
    auto M = VermaModule<Rational>::at(alg, lambda0);
    auto ker = nullspace(M.gram(FormKind::Contravariant, mu));
    if (ker.size() != 1)
        throw Error(ErrorKind::NullSpaceDimensionUnexpected,
                    "radical at weight " + Weight(mu).str() + " has dimension " + std::to_string(ker.size()));
    auto& v = ker[0];
    Integer l = 1;
    for (auto& x : v) l = lcm(l, Integer(x.get_den()));
    std::vector<Integer> c;
    Integer g = 0;
    for (auto& x : v) {
        Rational y = x * l;
        c.push_back(y.get_num());
        g = gcd(g, y.get_num());
    }
    int lead_sign = 0;
    for (auto& x : c)
        if (x != 0) {
            lead_sign = sgn(x);
            break;
        }
    for (auto& x : c) x = x / g * lead_sign;
    return SingularVector{mu, M.basis(mu), c};
}

}  // namespace sigkl
