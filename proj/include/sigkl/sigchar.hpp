#pragma once

#include <sigkl/alcove.hpp>
#include <sigkl/signedkl.hpp>

#include <map>
#include <memory>

namespace sigkl {

/// e^{new_anchor - ...} view of ch, where ch.anchor() - new_anchor lies in the positive root cone.
inline FormalCharacter lift_to(const FormalCharacter& ch, const Weight& new_anchor, int cutoff) {
    Weight diff = new_anchor - ch.anchor();
    if (!diff.in_root_lattice() || !is_nonnegative(diff.to_root_vec()))
        throw Error(ErrorKind::AnchorMismatch, "cannot move " + ch.anchor().str() + " up to " + new_anchor.str());
    RootVec k = diff.to_root_vec();
    FormalCharacter out(new_anchor, cutoff);
    for (auto& [mu, c] : ch.terms()) out.add(mu + k, c);
    return out;
}

/// A point of the alcove entered from p in the direction delta: p + t delta with t small enough to cross no
/// hyperplane H_{beta,m}, m integral.
inline Weight alcove_entry_point(const RootDatum& d, const Weight& p, const Weight& delta) {
    Rational t = Rational(1) / 4;
    for (int b = 0; b < d.num_positive(); ++b) {
        Rational v = abs(d.pairing(delta, b));
        if (v == 0) continue;
        Rational f = d.pairing(p, b) - floor_of(d.pairing(p, b));
        Rational room = f == 0 ? Rational(1) : std::min(f, Rational(1 - f));
        t = std::min(t, Rational(room / (2 * v)));
    }
    return p + t * delta;
}

/// Ordinary characters of M(x lambda) and L(x lambda) for lambda regular antidominant.
inline FormalCharacter ch_verma(const SignedContext& ctx, int x, int cutoff) {
    return ch_verma(ctx.datum(), *ctx.algebra().kostant, ctx.point(x), cutoff);
}

inline FormalCharacter ch_irreducible(const SignedContext& ctx, int x, int cutoff) {
    const ReflectionGroup& W = ctx.group();
    Weight top = ctx.point(x) - ctx.datum().rho();
    FormalCharacter out(top, cutoff);
    for (int y = 0; y < W.size(); ++y) {
        long long p = ctx.kl().classical(y, x).at_one();
        if (!p) continue;
        int sign = (W.length(x) + W.length(y)) % 2 ? -1 : 1;
        Weight low = ctx.point(y) - ctx.datum().rho();
        RootVec k = (top - low).to_root_vec();
        if (height(k) > cutoff) continue;
        FormalCharacter m = ch_verma(ctx, y, cutoff - height(k));
        out += (sign * p) * lift_to(m, top, cutoff);
    }
    return out;
}

/// Signature characters of irreducibles in the block of lambda, relative to the chamber of ctx.
class SignatureCharacters {
public:
    SignatureCharacters(std::shared_ptr<const SignedContext> ctx, std::shared_ptr<SignatureEngine> engine = nullptr)
        : ctx_(std::move(ctx)), table_(ctx_), engine_(engine ? std::move(engine) : std::make_shared<SignatureEngine>(ctx_->algebra_ptr())) {}

    const SignedContext& context() const { return *ctx_; }
    const SignedKLTable& table() const { return table_; }
    SignatureEngine& engine() { return *engine_; }

    /// A point of the alcove entered from x lambda in the direction delta.
    Weight alcove_point(int x) const { return alcove_entry_point(ctx_->datum(), ctx_->point(x), ctx_->delta()); }

    /// R^{A(x lambda, w)} written at the anchor x lambda - rho.
    FormalCharacter R_at(int x, int cutoff) {
        FormalCharacter r = engine_->R_alcove(alcove_point(x), cutoff);
        return FormalCharacter(ctx_->point(x) - ctx_->datum().rho(), cutoff, r.terms());
    }

    /// ch_s L(x lambda) = R^{A(x lambda, w)}(x lambda) - sum_{y < x} P^{lambda,w}_{w x, w y}(1) ch_s L(y lambda).
    FormalCharacter ch_s_irreducible(int x, int cutoff) {
        auto key = std::make_pair(x, cutoff);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const ReflectionGroup& W = ctx_->group();
        FormalCharacter out = R_at(x, cutoff);
        Weight top = out.anchor();
        for (int y = 0; y < W.size(); ++y) {
            if (y == x) continue;
            long long p = table_.signed_kl(x, y).at_one();
            if (!p) continue;
            RootVec k = (top - (ctx_->point(y) - ctx_->datum().rho())).to_root_vec();
            if (height(k) > cutoff) continue;
            out -= p * lift_to(ch_s_irreducible(y, cutoff - height(k)), top, cutoff);
        }
        memo_.emplace(key, out);
        return out;
    }

private:
    std::shared_ptr<const SignedContext> ctx_;
    SignedKLTable table_;
    std::shared_ptr<SignatureEngine> engine_;
    std::map<std::pair<int, int>, FormalCharacter> memo_;
};

}  // namespace sigkl
