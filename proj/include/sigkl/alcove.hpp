#pragma once

#include <sigkl/character.hpp>
#include <sigkl/jantzen.hpp>
#include <sigkl/weyl.hpp>

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace sigkl {

/// Region cut out by the reducibility hyperplanes H_{beta,n}, n >= 1.
/// The key records, for each positive root, how many of its hyperplanes lie below the region.
struct AlcoveDescriptor {
    Weight sample;
    std::vector<long> key;
    friend bool operator==(const AlcoveDescriptor& a, const AlcoveDescriptor& b) { return a.key == b.key; }
};

inline bool is_regular_point(const RootDatum& d, const Weight& p) {
    for (int b = 0; b < d.num_positive(); ++b) {
        Rational v = d.pairing(p, b);
        if (is_integer(v) && v >= 1) return false;
    }
    return true;
}

inline std::vector<long> region_key(const RootDatum& d, const Weight& p) {
    std::vector<long> k(d.num_positive());
    for (int b = 0; b < d.num_positive(); ++b) k[b] = std::max(0L, to_long(floor_of(d.pairing(p, b))));
    return k;
}

inline AlcoveDescriptor alcove_of(const RootDatum& d, const Weight& p) {
    if (!is_regular_point(d, p)) throw Error(ErrorKind::NotRegular, p.str() + " lies on a reducibility hyperplane");
    return AlcoveDescriptor{p, region_key(d, p)};
}

struct Crossing {
    int root;    // positive root index
    int level;   // hyperplane H_{root, level}
    Rational s;  // segment parameter in (0, 1)
    Weight point;
};

/// Hyperplanes H_{beta,m} met by the open segment from p to q, in order. With reducibility_only the levels
/// are m >= 1, otherwise every m != 0. Returns nullopt if a crossing point lies on a second hyperplane of
/// integral level.
inline std::optional<std::vector<Crossing>> segment_crossings(const RootDatum& d, const Weight& p, const Weight& q,
                                                              bool reducibility_only) {
    std::vector<Crossing> out;
    Weight dir = q - p;
    for (int b = 0; b < d.num_positive(); ++b) {
        Rational a = d.pairing(p, b), c = d.pairing(q, b);
        if (a == c) continue;
        Rational lo = a < c ? a : c, hi = a < c ? c : a;
        for (Integer m = floor_of(lo) + 1; m < hi; ++m) {
            if (reducibility_only ? m < 1 : m == 0) continue;
            if (Rational(m) == lo) continue;
            Rational s = (a - Rational(m)) / (a - c);
            out.push_back({b, static_cast<int>(to_long(m)), s, p + s * dir});
        }
    }
    for (auto& x : out)
        for (int g = 0; g < d.num_positive(); ++g)
            if (g != x.root && is_integer(d.pairing(x.point, g))) return std::nullopt;
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.s < b.s; });
    return out;
}

namespace detail {

inline Weight jitter(int rank, unsigned seed, const Rational& scale) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-997, 997);
    std::vector<Rational> c;
    for (int i = 0; i < rank; ++i) c.push_back(scale * Rational(num(rng)) / 997);
    return Weight(c);
}

}  // namespace detail

/// Path between sample points of two alcoves crossing reducibility hyperplanes one at a time.
inline std::vector<Crossing> crossing_path(const RootDatum& d, const AlcoveDescriptor& A, const AlcoveDescriptor& B,
                                           int max_attempts = 32) {
    if (A == B) return {};
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Weight q = B.sample;
        if (attempt > 0) {
            q = q + detail::jitter(d.rank(), 1000 + attempt, Rational(1) / (1000 * attempt));
            if (!is_regular_point(d, q) || region_key(d, q) != B.key) continue;
        }
        if (auto c = segment_crossings(d, A.sample, q, true)) return *c;
    }
    throw Error(ErrorKind::UnresolvablePerturbation, "no generic path from " + A.sample.str() + " to " + B.sample.str());
}

/// Signature characters of Verma modules at regular points, via alcove crossings.
class SignatureEngine {
public:
    using EpsilonHook = std::function<int(int root, int level, const Weight& point, int value)>;

    explicit SignatureEngine(AlgebraPtr alg) : alg_(std::move(alg)), W_(ReflectionGroup::full(alg_->datum)) {
        const RootDatum& d = alg_->d();
        for (int b = 0; b < d.num_positive(); ++b) {
            Weight target = d.reflect(b, d.rho());
            int found = -1;
            for (int w = 0; w < W_->size() && found < 0; ++w)
                if (W_->act(w, d.rho()) == target) found = w;
            reflection_.push_back(found);
        }
    }

    const LieAlgebra& algebra() const { return *alg_; }

    /// Replaces every crossing sign by hook(root, level, point, computed); used for fault injection.
    void set_epsilon_hook(EpsilonHook h) {
        hook_ = std::move(h);
        memo_.clear();
        eps_memo_.clear();
    }

    /// R^A(p) for the region A containing p, anchored at p - rho; recursion across the first wall on a
    /// straight path to a point deep in the Wallach region.
    FormalCharacter R_alcove(const Weight& p, int cutoff) {
        alcove_of(alg_->d(), p);
        return FormalCharacter(p - alg_->d().rho(), cutoff, coefficients(p, cutoff));
    }

    /// Closed subset-sum form: straight path from p to a small point of its Weyl chamber; each subset S of
    /// crossings contributes eps(S) 2^|S| times the Wallach series shifted by the accumulated reflection.
    FormalCharacter R_alcove_closed(const Weight& p, int cutoff) {
        const RootDatum& d = alg_->d();
        alcove_of(d, p);
        FormalCharacter out(p - d.rho(), cutoff);
        if (cutoff < 0) return out;
        auto path = chamber_path(p);
        FormalCharacter wall = wallach_series(d, cutoff);
        std::map<std::pair<int, int>, int> eps_cache;
        std::function<void(std::size_t, int, RootVec, long long)> dfs = [&](std::size_t from, int g, RootVec kappa,
                                                                           long long coef) {
            for (auto& [mu, c] : wall.terms()) out.add(mu + kappa, coef * c);
            for (std::size_t j = from; j < path.size(); ++j) {
                const Crossing& x = path[j];
                RootVec r = W_->act(g, d.root(x.root));
                int gamma, N;
                if (is_nonnegative(r)) {
                    gamma = d.root_index(r);
                    N = x.level;
                } else {
                    gamma = d.root_index((-1) * r);
                    N = -x.level;
                }
                if (N <= 0) continue;
                RootVec k2 = kappa + N * d.root(gamma);
                if (height(k2) > cutoff) continue;
                auto key = std::make_pair(g, static_cast<int>(j));
                auto it = eps_cache.find(key);
                int e;
                if (it != eps_cache.end()) {
                    e = it->second;
                } else {
                    Weight c = W_->act(g, x.point);
                    Weight eta = W_->act(g, p - x.point);
                    e = epsilon(gamma, N, c, eta);
                    eps_cache.emplace(key, e);
                }
                if (e == 0) continue;
                dfs(j + 1, W_->multiply(g, reflection_[x.root]), k2, 2 * e * coef);
            }
        };
        dfs(0, W_->identity(), RootVec(d.rank(), 0), 1);
        return out;
    }

private:
    int epsilon(int gamma, int N, const Weight& c, const Weight& eta) {
        int e = crossing_sign(alg_, gamma, N, c, eta);
        if (hook_) e = hook_(gamma, N, c, e);
        return e;
    }

    FormalCharacter::Terms coefficients(const Weight& p, int cutoff) {
        const RootDatum& d = alg_->d();
        if (cutoff < 0) return {};
        if (in_wallach_region(d, p)) return wallach_series(d, cutoff).terms();
        auto key = region_key(d, p);
        auto it = memo_.find(key);
        if (it != memo_.end() && it->second.first >= cutoff) return FormalCharacter(Weight(d.rank()), cutoff, it->second.second).terms();

        Weight target;
        std::optional<std::vector<Crossing>> path;
        for (int attempt = 0; attempt < 32 && !path; ++attempt) {
            target = Rational(-1) / 2 * d.rho() + detail::jitter(d.rank(), 77 + attempt, Rational(1) / 10);
            path = segment_crossings(d, p, target, true);
        }
        if (!path) throw Error(ErrorKind::UnresolvablePerturbation, "no generic path from " + p.str());
        const Crossing& x = path->front();
        Rational s2 = path->size() > 1 ? (*path)[1].s : Rational(1);
        Weight next = p + ((x.s + s2) / 2) * (target - p);

        FormalCharacter acc(Weight(d.rank()), cutoff, coefficients(next, cutoff));
        RootVec jump = x.level * d.root(x.root);
        int budget = cutoff - height(jump);
        if (budget >= 0) {
            std::vector<long> ek{x.root, x.level};
            for (int b = 0; b < d.num_positive(); ++b) ek.push_back(to_long(floor_of(d.pairing(x.point, b))));
            auto eit = eps_memo_.find(ek);
            int e;
            if (eit != eps_memo_.end()) {
                e = eit->second;
            } else {
                e = epsilon(x.root, x.level, x.point, p - x.point);
                eps_memo_.emplace(ek, e);
            }
            Weight below = x.point - Weight(jump);
            FormalCharacter sub(Weight(d.rank()), budget, coefficients(below, budget));
            for (auto& [mu, c] : sub.terms()) acc.add(mu + jump, 2 * e * c);
        }
        memo_[key] = {cutoff, acc.terms()};
        return acc.terms();
    }

    std::vector<Crossing> chamber_path(const Weight& p) {
        const RootDatum& d = alg_->d();
        Rational m = 1;
        for (int b = 0; b < d.num_positive(); ++b) {
            Rational v = d.pairing(p, b);
            if (v < 0) v = -v;
            if (v > m) m = v;
        }
        for (int attempt = 0; attempt < 32; ++attempt) {
            Weight q = (Rational(1) / 4 / m) * p + detail::jitter(d.rank(), 500 + attempt, Rational(1) / 64 / m);
            bool small = true;
            for (int b = 0; b < d.num_positive(); ++b) {
                Rational v = d.pairing(q, b);
                if (v >= 1 || v <= -1) small = false;
            }
            if (!small) continue;
            if (auto path = segment_crossings(d, p, q, false)) return *path;
        }
        throw Error(ErrorKind::UnresolvablePerturbation, "no generic chamber path from " + p.str());
    }

    AlgebraPtr alg_;
    GroupPtr W_;
    std::vector<int> reflection_;
    EpsilonHook hook_;
    std::map<std::vector<long>, std::pair<int, FormalCharacter::Terms>> memo_;
    std::map<std::vector<long>, int> eps_memo_;
};

}  // namespace sigkl
