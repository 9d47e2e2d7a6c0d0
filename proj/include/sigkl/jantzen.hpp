#pragma once

#include <sigkl/enveloping.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace sigkl {

struct OrderSign {
    int order;
    int sign;
    friend bool operator==(const OrderSign&, const OrderSign&) = default;
    friend auto operator<=>(const OrderSign&, const OrderSign&) = default;
};

namespace detail {

inline std::optional<std::vector<OrderSign>> diagonalize_mod(const Matrix<QPoly>& G, int K) {
    const std::size_t n = G.rows();
    Matrix<QPoly> a = G.map([K](const QPoly& p) { return p.truncated(K); });
    std::vector<std::size_t> alive(n);
    for (std::size_t i = 0; i < n; ++i) alive[i] = i;
    std::vector<OrderSign> out;
    constexpr int kInf = std::numeric_limits<int>::max();
    auto ord = [](const QPoly& p) { return p.is_zero() ? kInf : p.order(); };
    while (!alive.empty()) {
        int best = kInf;
        std::size_t bi = n, bj = n;
        for (std::size_t x = 0; x < alive.size(); ++x)
            for (std::size_t y = x; y < alive.size(); ++y) {
                int o = ord(a(alive[x], alive[y]));
                bool better = o < best || (o == best && x == y && bi != bj);
                if (better) {
                    best = o;
                    bi = alive[x];
                    bj = alive[y];
                }
            }
        if (best == kInf) return std::nullopt;
        if (bi != bj) {
            // Only an off-diagonal entry reaches the minimal order: replace e_i by e_i + e_j.
            for (auto l : alive) a(bi, l) += a(bj, l);
            for (auto l : alive) a(l, bi) += a(l, bj);
        }
        const std::size_t p = bi;
        const int k = ord(a(p, p));
        const QPoly u = a(p, p).shifted_down(k);
        out.push_back({k, sign_of(u.coeff(0))});
        const QPoly uinv = inverse_trunc(u, K - k);
        std::vector<std::size_t> rest;
        for (auto i : alive)
            if (i != p) rest.push_back(i);
        std::vector<QPoly> w(n);
        for (auto l : rest) w[l] = mul_trunc(a(p, l).shifted_down(k), uinv, K - k);
        for (auto j : rest) {
            if (a(j, p).is_zero()) continue;
            for (auto l : rest) a(j, l) = (a(j, l) - mul_trunc(a(j, p), w[l], K)).truncated(K);
        }
        alive = std::move(rest);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Congruence diagonalization over the local ring Q[t]_(t): returns (t-order, sign of unit at 0)
/// for each diagonal entry, sorted.
inline std::vector<OrderSign> t_adic_diagonalize(const Matrix<QPoly>& G) {
    if (!G.is_symmetric()) throw Error(ErrorKind::Internal, "t_adic_diagonalize: matrix not symmetric");
    if (G.rows() == 0) return {};
    int cap = 1;
    for (std::size_t i = 0; i < G.rows(); ++i) {
        int m = 0;
        for (std::size_t j = 0; j < G.cols(); ++j) m = std::max(m, G(i, j).degree());
        cap += m;
    }
    for (int K = std::min(8, cap);; K = std::min(2 * K, cap)) {
        if (auto r = detail::diagonalize_mod(G, K)) return *r;
        if (K >= cap) throw Error(ErrorKind::SingularOverFunctionField, "deformed Gram matrix is singular over Q(t)");
    }
}

struct LayerData {
    int dim = 0;
    int p = 0;
    int q = 0;
    friend bool operator==(const LayerData&, const LayerData&) = default;
};

using LayerMap = std::map<int, LayerData>;

struct JantzenLayers {
    Weight lambda0;
    Weight delta;
    std::map<RootVec, LayerMap> spaces;
};

inline LayerMap layers_from_diagonal(const std::vector<OrderSign>& diag) {
    LayerMap m;
    for (auto& [k, s] : diag) {
        auto& L = m[k];
        ++L.dim;
        (s > 0 ? L.p : L.q)++;
    }
    return m;
}

/// Raises DegenerateDirection if delta lies on a wall H_beta through lambda0 with (lambda0, beta^vee) in Z>=1.
inline void check_direction(const RootDatum& d, const Weight& lambda0, const Weight& delta) {
    for (int b = 0; b < d.num_positive(); ++b) {
        Rational v = d.pairing(lambda0, b);
        if (is_integer(v) && v >= 1 && d.pairing(delta, b) == 0)
            throw Error(ErrorKind::DegenerateDirection,
                        "direction " + delta.str() + " is orthogonal to a reducibility hyperplane through " + lambda0.str());
    }
}

inline JantzenLayers jantzen_layers(AlgebraPtr alg, const Weight& lambda0, const Weight& delta,
                                    const std::vector<RootVec>& weights) {
    check_direction(alg->d(), lambda0, delta);
    int h = 0;
    for (auto& mu : weights) h = std::max(h, height(mu));
    auto M = VermaModule<QPoly>::deformed(alg, lambda0, delta, std::max(h, 1));
    JantzenLayers J{lambda0, delta, {}};
    for (auto& mu : weights) J.spaces[mu] = layers_from_diagonal(t_adic_diagonalize(M.gram(FormKind::Hermitian, mu)));
    return J;
}

inline JantzenLayers jantzen_layers(AlgebraPtr alg, const Weight& lambda0, const Weight& delta, int height_cutoff) {
    return jantzen_layers(alg, lambda0, delta, cone_elements(alg->d().rank(), height_cutoff));
}

struct SideSignatures {
    Signature plus;   // t > 0
    Signature minus;  // t < 0
    friend bool operator==(const SideSignatures&, const SideSignatures&) = default;
};

inline SideSignatures side_signatures(const LayerMap& layers) {
    SideSignatures s;
    for (auto& [j, L] : layers) {
        s.plus.positive += L.p;
        s.plus.negative += L.q;
        bool odd = j % 2 != 0;
        s.minus.positive += odd ? L.q : L.p;
        s.minus.negative += odd ? L.p : L.q;
    }
    return s;
}

inline std::map<RootVec, SideSignatures> side_signatures(const JantzenLayers& J) {
    std::map<RootVec, SideSignatures> out;
    for (auto& [mu, L] : J.spaces) out[mu] = side_signatures(L);
    return out;
}

/// Half the smallest |t| != 0 at which lambda0 + t delta meets a reducibility hyperplane.
inline Rational side_step(const RootDatum& d, const Weight& lambda0, const Weight& delta) {
    std::optional<Rational> best;
    for (int b = 0; b < d.num_positive(); ++b) {
        Rational c = d.pairing(delta, b);
        if (c == 0) continue;
        Rational a = d.pairing(lambda0, b);
        Integer f = floor_of(a);
        for (Integer n = f - 1; n <= f + 2; ++n) {
            if (n < 1 || Rational(n) == a) continue;
            Rational t = (Rational(n) - a) / c;
            if (t < 0) t = -t;
            if (!best || t < *best) best = t;
        }
    }
    return best ? *best / 2 : Rational(1);
}

/// Sign of <f v, f v> at c + t eta for small t > 0, f the singular vector at c on H_{gamma,N}.
inline int crossing_sign(AlgebraPtr alg, int gamma, int N, const Weight& c, const Weight& eta) {
    auto f = singular_vector(alg, c, gamma, N);
    auto M = VermaModule<QPoly>::deformed(alg, c, eta, std::max(height(f.weight), 1));
    const auto& G = M.gram(FormKind::Hermitian, f.weight);
    QPoly val;
    const std::size_t n = f.coefficients.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (f.coefficients[i] == 0) continue;
        QPoly row;
        for (std::size_t j = 0; j < n; ++j)
            if (f.coefficients[j] != 0) row += G(i, j) * QPoly(Rational(f.coefficients[j]));
        val += row * QPoly(Rational(f.coefficients[i]));
    }
    if (val.is_zero()) throw Error(ErrorKind::Internal, "singular vector norm vanishes identically along the path");
    return sign_of(val.coeff(val.order()));
}

struct CrossingSign {
    int gamma;
    int N;
    Weight witness;  // point on H_{gamma,N} where the sign was evaluated
    int value;
};

/// True if (p, beta^vee) is a positive integer for some positive root other than gamma.
inline bool on_other_hyperplane(const RootDatum& d, const Weight& p, int gamma) {
    for (int b = 0; b < d.num_positive(); ++b) {
        if (b == gamma) continue;
        Rational v = d.pairing(p, b);
        if (is_integer(v) && v >= 1) return true;
    }
    return false;
}

/// epsilon(H_{gamma,N}, chamber of q): evaluated at the point where the ray through q meets H_{gamma,N},
/// approaching from the side (lambda, gamma^vee) > N.
inline CrossingSign epsilon_hyperplane(AlgebraPtr alg, int gamma, int N, const Weight& chamber_point,
                                       int max_attempts = 64) {
    const RootDatum& d = alg->d();
    if (d.pairing(chamber_point, gamma) <= 0)
        throw Error(ErrorKind::ChamberCrossing,
                    "H_{gamma," + std::to_string(N) + "} does not meet the chamber of " + chamber_point.str());
    std::vector<int> signs(d.num_positive());
    for (int b = 0; b < d.num_positive(); ++b) signs[b] = sign_of(d.pairing(chamber_point, b));
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> num(-97, 97);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Weight q = chamber_point;
        if (attempt > 0) {
            Rational scale = Rational(1, 64 * attempt);
            for (int i = 0; i < d.rank(); ++i) q[i] += scale * Rational(num(rng)) / 97;
        }
        bool same = true;
        for (int b = 0; b < d.num_positive() && same; ++b)
            if (signs[b] != 0 && sign_of(d.pairing(q, b)) != signs[b]) same = false;
        if (!same) continue;
        Weight c = (Rational(N) / d.pairing(q, gamma)) * q;
        if (on_other_hyperplane(d, c, gamma)) continue;
        return CrossingSign{gamma, N, c, crossing_sign(alg, gamma, N, c, c)};
    }
    throw Error(ErrorKind::MultipleHyperplanes,
                "no generic point of H_{gamma," + std::to_string(N) + "} found near " + chamber_point.str());
}

}  // namespace sigkl
