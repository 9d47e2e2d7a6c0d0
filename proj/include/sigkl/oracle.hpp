#pragma once

#include <sigkl/sigchar.hpp>

#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace sigkl {

/// Per-weight signature p - q of the form on M(lambda), zero eigenvalues dropped.
inline FormalCharacter direct_signature_character(AlgebraPtr alg, const Weight& lambda, int cutoff,
                                                  FormKind kind = FormKind::Hermitian) {
    if (cutoff > VermaModule<Rational>::kDefaultMaxHeight)
        throw Error(ErrorKind::CutoffExceeded, "cutoff " + std::to_string(cutoff) + " is beyond the Gram range");
    const RootDatum& d = alg->d();
    auto M = VermaModule<Rational>::at(alg, lambda, std::max(cutoff, 1));
    FormalCharacter ch(lambda - d.rho(), cutoff);
    for (auto& mu : cone_elements(d.rank(), cutoff)) ch.add(mu, signature(M.gram(kind, mu)).value());
    return ch;
}

inline std::string matrix_string(const Matrix<Rational>& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? " " : "") + to_string(m(i, j));
    }
    return s + "]";
}

/// Signed coefficients read off Jantzen layers: the signature character of layer j of M(x lambda) along
/// x lambda + t delta is decomposed greedily into direct ch_s L(y lambda), longest y first.
struct LayerDecomposition {
    std::vector<std::vector<KLPoly>> table;      // indexed like SignedKLTable
    std::vector<std::vector<bool>> determined;  // false when x lambda - y lambda is beyond the cutoff
    std::vector<FormalCharacter> residual;      // what is left per x; zero when the decomposition is exact
};

inline LayerDecomposition jantzen_signed_decomposition(const SignedContext& ctx, int cutoff) {
    const ReflectionGroup& W = ctx.group();
    const RootDatum& d = ctx.datum();
    const int n = W.size();
    std::vector<FormalCharacter> L;
    for (int y = 0; y < n; ++y) L.push_back(direct_signature_character(ctx.algebra_ptr(), ctx.point(y), cutoff));
    LayerDecomposition out;
    out.table.assign(n, std::vector<KLPoly>(n));
    out.determined.assign(n, std::vector<bool>(n, false));
    for (int x = 0; x < n; ++x) {
        Weight top = ctx.point(x) - d.rho();
        auto J = jantzen_layers(ctx.algebra_ptr(), ctx.point(x), ctx.delta(), cutoff);
        std::map<int, FormalCharacter> layer;
        for (auto& [mu, lm] : J.spaces)
            for (auto& [j, data] : lm) {
                auto it = layer.try_emplace(j, top, cutoff).first;
                it->second.add(mu, data.p - data.q);
            }
        for (int y = n - 1; y >= 0; --y) {
            Weight diff = top - (ctx.point(y) - d.rho());
            if (!diff.in_root_lattice()) continue;
            RootVec k = diff.to_root_vec();
            if (!is_nonnegative(k) || height(k) > cutoff) continue;
            out.determined[x][y] = true;
            std::vector<long long> coeffs;
            int gap = W.length(x) - W.length(y);
            for (auto& [j, F] : layer) {
                long long a = F[k];
                if (!a) continue;
                if (gap < j || (gap - j) % 2) throw Error(ErrorKind::Internal, "layer coefficient at a parity-violating level");
                std::size_t e = static_cast<std::size_t>((gap - j) / 2);
                if (coeffs.size() <= e) coeffs.resize(e + 1, 0);
                coeffs[e] = a;
                for (auto& [mu, c] : L[y].terms()) F.add(mu + k, -a * c);
            }
            out.table[x][y] = KLPoly(coeffs);
        }
        FormalCharacter rest(top, cutoff);
        for (auto& [j, F] : layer) rest += F;
        out.residual.push_back(rest);
    }
    return out;
}

/// det(Gram) divided by the product formula at each lambda; proportional means all ratios coincide.
struct DeterminantCheck {
    std::vector<Rational> ratios;
    bool proportional() const {
        for (auto& r : ratios)
            if (r == 0 || r != ratios.front()) return false;
        return !ratios.empty();
    }
};

inline DeterminantCheck determinant_check(AlgebraPtr alg, const RootVec& mu, const std::vector<Weight>& lambdas) {
    DeterminantCheck out;
    for (auto& l : lambdas) {
        Rational p = det_product_formula(alg, l, mu);
        if (p == 0) throw Error(ErrorKind::NotRegular, l.str() + " lies on a reducibility hyperplane");
        out.ratios.push_back(shapovalov_determinant(alg, l, mu) / p);
    }
    return out;
}

struct Witness {
    std::string lambda;
    std::string mu;
    std::string detail;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    int cases = 0;
    std::optional<Witness> witness;  // first failure
};

struct Report {
    std::string context;
    std::vector<CheckResult> checks;
    bool passed() const {
        for (auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const CheckResult* first_failure() const {
        for (auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

struct CompareOptions {
    SignatureEngine::EpsilonHook epsilon_hook;  // fault injection
};

namespace detail {

class Recorder {
public:
    explicit Recorder(std::string name) { r_.name = std::move(name); }
    /// Records one case; the first failure keeps its witness.
    void check(bool ok, const std::function<Witness()>& witness) {
        ++r_.cases;
        if (ok || !r_.passed) {
            if (!ok) r_.passed = false;
            return;
        }
        r_.passed = false;
        r_.witness = witness();
    }
    CheckResult result() const { return r_; }

private:
    CheckResult r_;
};

inline Witness character_witness(const FormalCharacter& got, const FormalCharacter& want, const Weight& lambda,
                                 const std::string& what) {
    auto mu = got.first_difference(want);
    Witness w{lambda.str(), mu ? Weight(*mu).str() : "-", what};
    if (mu) w.detail += ": got " + std::to_string(got[*mu]) + ", expected " + std::to_string(want[*mu]);
    return w;
}

}  // namespace detail

/// Cross-checks every formula on the block of ctx against the brute-force computations.
inline Report compare_all(std::shared_ptr<const SignedContext> ctx, int cutoff, const CompareOptions& opts = {}) {
    const RootDatum& d = ctx->datum();
    const ReflectionGroup& W = ctx->group();
    if (d.rank() > 2 || W.size() > 16 || cutoff > 6 || cutoff < 0)
        throw Error(ErrorKind::ResourceGuard, "compare_all is limited to rank <= 2, |W_lambda| <= 16, cutoff <= 6");
    const int n = W.size();
    AlgebraPtr alg = ctx->algebra_ptr();
    Report rep;
    std::string marking;
    for (int i = 0; i < d.rank(); ++i) marking += d.simple_noncompact(i) ? 'n' : 'c';
    rep.context = d.type().name() + "[" + marking + "] lambda=" + ctx->lambda().str() + " w=" + W.word_string(ctx->w());

    auto engine = std::make_shared<SignatureEngine>(alg);
    if (opts.epsilon_hook) engine->set_epsilon_hook(opts.epsilon_hook);
    SignatureCharacters sc(ctx, engine);

    std::vector<Weight> samples;
    for (int x = 0; x < n; ++x) samples.push_back(sc.alcove_point(x));
    std::vector<FormalCharacter> direct_m;
    for (auto& p : samples) direct_m.push_back(direct_signature_character(alg, p, cutoff));

    {
        detail::Recorder r("R_alcove_vs_direct");
        for (int x = 0; x < n; ++x) {
            auto got = engine->R_alcove(samples[x], cutoff);
            r.check(got.agrees_with(direct_m[x]), [&] {
                auto w = detail::character_witness(got, direct_m[x], samples[x], "R_alcove");
                if (auto mu = got.first_difference(direct_m[x]))
                    w.detail += " gram=" + matrix_string(gram(alg, FormKind::Hermitian, samples[x], *mu));
                return w;
            });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("R_alcove_closed_vs_direct");
        for (int x = 0; x < n; ++x) {
            auto got = engine->R_alcove_closed(samples[x], cutoff);
            r.check(got.agrees_with(direct_m[x]),
                    [&] { return detail::character_witness(got, direct_m[x], samples[x], "R_alcove_closed"); });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("signature_bounded_by_character");
        for (int x = 0; x < n; ++x) {
            FormalCharacter ch = ch_verma(d, *alg->kostant, samples[x], cutoff);
            bool ok = true;
            for (auto& [mu, c] : direct_m[x].terms())
                if (std::llabs(c) > ch[mu]) ok = false;
            r.check(ok, [&] { return Witness{samples[x].str(), "-", "|ch_s M| exceeds ch M"}; });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("kl_vs_hecke");
        auto P = hecke_oracle(W);
        int w0 = W.longest();
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const KLPoly& got = ctx->kl().kl(x, y);
                const KLPoly& want = P[W.multiply(w0, x)][W.multiply(w0, y)];
                r.check(got == want, [&] {
                    return Witness{ctx->lambda().str(), "-",
                                   "x=" + W.word_string(x) + " y=" + W.word_string(y) + " got " + got.str() + ", expected " + want.str()};
                });
            }
        rep.checks.push_back(r.result());
    }
    const SignedKLTable& S = sc.table();
    auto cell_witness = [&](int x, int y, const std::string& what) {
        return Witness{ctx->lambda().str(), "-",
                       "x=" + W.word_string(x) + " y=" + W.word_string(y) + " signed " + S.signed_kl(x, y).str() + ", KL " +
                           ctx->kl().kl(x, y).str() + " (" + what + ")"};
    };
    {
        detail::Recorder parity("signed_kl_mod_2");
        detail::Recorder bound("signed_kl_bound");
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const KLPoly& s = S.signed_kl(x, y);
                const KLPoly& k = ctx->kl().kl(x, y);
                bool par = true, bnd = true;
                int deg = std::max(s.degree(), k.degree());
                for (int i = 0; i <= deg; ++i) {
                    long long a = s.coeff(i), b = k.coeff(i);
                    if ((a - b) % 2 != 0) par = false;
                    if (std::llabs(a) > b) bnd = false;
                }
                parity.check(par, [&] { return cell_witness(x, y, "parity"); });
                bound.check(bnd, [&] { return cell_witness(x, y, "bound"); });
            }
        rep.checks.push_back(parity.result());
        rep.checks.push_back(bound.result());
    }
    {
        detail::Recorder r("signed_kl_vs_jantzen_layers");
        auto D = jantzen_signed_decomposition(*ctx, cutoff);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (!D.determined[x][y]) continue;
                r.check(D.table[x][y] == S.signed_kl(x, y), [&] {
                    auto w = cell_witness(x, y, "layers give " + D.table[x][y].str());
                    w.lambda = ctx->point(x).str();
                    return w;
                });
            }
        rep.checks.push_back(r.result());
    }
    std::vector<FormalCharacter> direct_l;
    for (int y = 0; y < n; ++y) direct_l.push_back(direct_signature_character(alg, ctx->point(y), cutoff));
    {
        detail::Recorder r("chamber_coherence");
        for (int x = 0; x < n; ++x) {
            FormalCharacter lhs = sc.R_at(x, cutoff);
            FormalCharacter rhs(lhs.anchor(), cutoff);
            for (int y = 0; y < n; ++y) {
                long long p = S.signed_kl(x, y).at_one();
                if (!p) continue;
                Weight diff = lhs.anchor() - direct_l[y].anchor();
                RootVec k = diff.to_root_vec();
                if (height(k) > cutoff) continue;
                rhs += p * lift_to(direct_l[y].truncated(cutoff - height(k)), lhs.anchor(), cutoff);
            }
            r.check(lhs.agrees_with(rhs), [&] { return detail::character_witness(lhs, rhs, ctx->point(x), "R vs sum P(1) ch_s L"); });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("ch_s_irreducible_vs_direct");
        for (int x = 0; x < n; ++x) {
            auto got = sc.ch_s_irreducible(x, cutoff);
            r.check(got.agrees_with(direct_l[x]), [&] { return detail::character_witness(got, direct_l[x], ctx->point(x), "ch_s L"); });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("chamber_independence");
        int other = W.size() > 1 ? W.mul_simple_right(ctx->w(), 0) : ctx->w();
        auto ctx2 = std::make_shared<SignedContext>(alg, ctx->lambda(), W.word(other));
        SignatureCharacters sc2(ctx2, engine);
        for (int x = 0; x < n; ++x) {
            auto a = sc.ch_s_irreducible(x, cutoff);
            auto b = sc2.ch_s_irreducible(x, cutoff);
            r.check(a.agrees_with(b), [&] {
                return detail::character_witness(a, b, ctx->point(x), "chambers " + W.word_string(ctx->w()) + " vs " + W.word_string(other));
            });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("ch_irreducible_vs_kl_inversion");
        for (int x = 0; x < n; ++x) {
            // dim L(x lambda)_mu = rank of the contravariant form
            FormalCharacter direct(ctx->point(x) - d.rho(), cutoff);
            auto M = VermaModule<Rational>::at(alg, ctx->point(x), std::max(cutoff, 1));
            for (auto& mu : cone_elements(d.rank(), cutoff)) {
                auto sgn = signature(M.gram(FormKind::Contravariant, mu));
                direct.add(mu, sgn.positive + sgn.negative);
            }
            auto got = ch_irreducible(*ctx, x, cutoff);
            r.check(got.agrees_with(direct), [&] { return detail::character_witness(got, direct, ctx->point(x), "ch L"); });
        }
        rep.checks.push_back(r.result());
    }
    {
        detail::Recorder r("determinant_proportionality");
        for (auto& mu : cone_elements(d.rank(), std::min(cutoff, 4))) {
            if (height(mu) == 0) continue;
            auto chk = determinant_check(alg, mu, samples);
            r.check(chk.proportional(), [&] { return Witness{samples.front().str(), Weight(mu).str(), "det / product formula not constant"}; });
        }
        rep.checks.push_back(r.result());
    }
    return rep;
}

}  // namespace sigkl
