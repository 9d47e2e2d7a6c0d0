#pragma once

#include <sigkl/rootcore.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sigkl {

/// Truncated formal sum  sum_mu c_mu e^{anchor - mu}  over mu in the positive root cone, ht(mu) <= cutoff.
class FormalCharacter {
public:
    using Terms = std::map<RootVec, long long>;

    FormalCharacter() = default;
    FormalCharacter(Weight anchor, int cutoff) : anchor_(std::move(anchor)), cutoff_(cutoff) {}
    FormalCharacter(Weight anchor, int cutoff, const Terms& terms) : anchor_(std::move(anchor)), cutoff_(cutoff) {
        for (auto& [mu, c] : terms) add(mu, c);
    }

    const Weight& anchor() const { return anchor_; }
    int cutoff() const { return cutoff_; }
    int rank() const { return static_cast<int>(anchor_.rank()); }
    const Terms& terms() const { return terms_; }
    long long operator[](const RootVec& mu) const {
        auto it = terms_.find(mu);
        return it == terms_.end() ? 0 : it->second;
    }
    void add(const RootVec& mu, long long c) {
        if (c == 0 || height(mu) > cutoff_) return;
        long long& slot = terms_[mu];
        slot += c;
        if (slot == 0) terms_.erase(mu);
    }

    FormalCharacter& operator+=(const FormalCharacter& o) { return combine(o, 1); }
    FormalCharacter& operator-=(const FormalCharacter& o) { return combine(o, -1); }
    friend FormalCharacter operator+(FormalCharacter a, const FormalCharacter& b) { return a += b; }
    friend FormalCharacter operator-(FormalCharacter a, const FormalCharacter& b) { return a -= b; }
    friend FormalCharacter operator*(long long k, FormalCharacter a) {
        FormalCharacter out(a.anchor_, a.cutoff_);
        for (auto& [mu, c] : a.terms_) out.add(mu, k * c);
        return out;
    }

    /// Multiply by e^{-beta}, beta in the positive root cone.
    FormalCharacter shifted(const RootVec& beta) const {
        FormalCharacter out(anchor_, cutoff_);
        for (auto& [mu, c] : terms_) out.add(mu + beta, c);
        return out;
    }
    FormalCharacter truncated(int h) const {
        FormalCharacter out(anchor_, std::min(h, cutoff_));
        for (auto& [mu, c] : terms_) out.add(mu, c);
        return out;
    }
    /// Same formal sum written against a lower anchor; anchor - new_anchor must lie in the positive root cone.
    FormalCharacter reanchored(const Weight& new_anchor) const {
        Weight diff = anchor_ - new_anchor;
        if (!diff.in_root_lattice() || !is_nonnegative(diff.to_root_vec()))
            throw Error(ErrorKind::AnchorMismatch, "cannot re-anchor " + anchor_.str() + " at " + new_anchor.str());
        RootVec k = diff.to_root_vec();
        FormalCharacter out(new_anchor, cutoff_ + height(k));
        for (auto& [mu, c] : terms_) out.add(mu + k, c);
        return out;
    }

    /// Multiply by (1 + sign e^{-alpha}).
    FormalCharacter times_binomial(const RootVec& alpha, int sign) const {
        FormalCharacter out = *this;
        for (auto& [mu, c] : terms_) out.add(mu + alpha, sign * c);
        return out;
    }
    /// Multiply by (1 + sign e^{-alpha})^{-1} as a truncated geometric series.
    FormalCharacter over_binomial(const RootVec& alpha, int sign) const {
        FormalCharacter out(anchor_, cutoff_);
        for (auto& mu : cone_elements(rank(), cutoff_)) {
            long long c = (*this)[mu];
            RootVec prev = mu - alpha;
            if (is_nonnegative(prev)) c -= sign * out[prev];
            out.add(mu, c);
        }
        return out;
    }

    /// Equality up to the common cutoff; anchors must match.
    bool agrees_with(const FormalCharacter& o) const {
        require_same_anchor(o);
        int h = std::min(cutoff_, o.cutoff_);
        return truncated(h).terms_ == o.truncated(h).terms_;
    }
    /// First weight (height order) where the two characters differ, if any.
    std::optional<RootVec> first_difference(const FormalCharacter& o) const {
        require_same_anchor(o);
        int h = std::min(cutoff_, o.cutoff_);
        for (auto& mu : cone_elements(rank(), h))
            if ((*this)[mu] != o[mu]) return mu;
        return std::nullopt;
    }

    std::string str() const {
        std::string s = "e^{" + anchor_.str() + "} * [";
        bool first = true;
        for (auto& mu : cone_elements(rank(), cutoff_)) {
            long long c = (*this)[mu];
            if (!c) continue;
            if (!first) s += ", ";
            first = false;
            s += Weight(mu).str() + ":" + std::to_string(c);
        }
        return s + "]";
    }

private:
    void require_same_anchor(const FormalCharacter& o) const {
        if (anchor_ != o.anchor_)
            throw Error(ErrorKind::AnchorMismatch, "anchors differ: " + anchor_.str() + " vs " + o.anchor_.str());
    }
    FormalCharacter& combine(const FormalCharacter& o, int sign) {
        require_same_anchor(o);
        cutoff_ = std::min(cutoff_, o.cutoff_);
        Terms keep;
        for (auto& [mu, c] : terms_)
            if (height(mu) <= cutoff_) keep[mu] = c;
        terms_ = std::move(keep);
        for (auto& [mu, c] : o.terms_) add(mu, sign * c);
        return *this;
    }

    Weight anchor_;
    int cutoff_ = 0;
    Terms terms_;
};

inline bool in_wallach_region(const RootDatum& d, const Weight& lambda) {
    for (int b = 0; b < d.num_positive(); ++b)
        if (d.pairing(lambda, b) >= 1) return false;
    return true;
}

/// Coefficients of 1 / (prod_nc (1 - e^{-a}) prod_c (1 + e^{-a})), anchored at 0.
inline FormalCharacter wallach_series(const RootDatum& d, int cutoff) {
    FormalCharacter ch(Weight(d.rank()), cutoff);
    ch.add(RootVec(d.rank(), 0), 1);
    for (int a = 0; a < d.num_positive(); ++a) ch = ch.over_binomial(d.root(a), d.is_noncompact(a) ? -1 : 1);
    return ch;
}

inline FormalCharacter wallach_character(const RootDatum& d, const Weight& lambda, int cutoff) {
    if (!in_wallach_region(d, lambda))
        throw Error(ErrorKind::NotInWallachRegion, lambda.str() + " is not in the Wallach region");
    return FormalCharacter(lambda - d.rho(), cutoff, wallach_series(d, cutoff).terms());
}

inline FormalCharacter ch_verma(const RootDatum& d, const KostantPartition& P, const Weight& lambda, int cutoff) {
    FormalCharacter ch(lambda - d.rho(), cutoff);
    for (auto& mu : cone_elements(d.rank(), cutoff)) ch.add(mu, P(mu));
    return ch;
}

}  // namespace sigkl
