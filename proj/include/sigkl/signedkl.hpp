#pragma once

#include <sigkl/jantzen.hpp>
#include <sigkl/klcore.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

namespace sigkl {

/// lambda regular antidominant for its integral root system, a chamber element w of W_lambda and
/// the chamber witness delta = w(-rho).
class SignedContext {
public:
    SignedContext(AlgebraPtr alg, Weight lambda, const std::vector<int>& w_word = {})
        : alg_(std::move(alg)), lambda_(std::move(lambda)) {
        const RootDatum& d = alg_->d();
        W_ = integral_weyl_group(alg_->datum, lambda_);
        for (int a : W_->subsystem_roots()) {
            Rational v = d.pairing(lambda_, a);
            if (v == 0) throw Error(ErrorKind::NotRegular, lambda_.str() + " is singular for an integral root");
            if (v > 0) throw Error(ErrorKind::NotAntidominant, lambda_.str() + " is not antidominant");
        }
        w_ = W_->from_word(w_word);
        delta_ = W_->act(w_, -d.rho());
        kl_ = std::make_shared<KLTable>(W_);
    }

    const LieAlgebra& algebra() const { return *alg_; }
    const AlgebraPtr& algebra_ptr() const { return alg_; }
    const RootDatum& datum() const { return alg_->d(); }
    const Weight& lambda() const { return lambda_; }
    const ReflectionGroup& group() const { return *W_; }
    const GroupPtr& group_ptr() const { return W_; }
    int w() const { return w_; }
    const Weight& delta() const { return delta_; }
    const KLTable& kl() const { return *kl_; }

    /// x lambda for x in W_lambda.
    Weight point(int x) const { return W_->act(x, lambda_); }
    /// Sign of (delta, beta^vee) for a root beta given in root coordinates.
    int delta_sign(const RootVec& beta) const {
        RootVec pos = is_nonnegative(beta) ? beta : (-1) * beta;
        int idx = datum().root_index(pos);
        if (idx < 0) throw Error(ErrorKind::Internal, "not a root");
        int s = sign_of(datum().pairing(delta_, idx));
        return is_nonnegative(beta) ? s : -s;
    }
    /// Element of W_lambda with the given reduced word; IntegralityMismatch when out of range.
    int element(const std::vector<int>& word) const {
        try {
            return W_->from_word(word);
        } catch (const Error&) {
            throw Error(ErrorKind::IntegralityMismatch, "word does not name an element of the integral Weyl group");
        }
    }

private:
    AlgebraPtr alg_;
    Weight lambda_;
    GroupPtr W_;
    int w_ = 0;
    Weight delta_;
    std::shared_ptr<KLTable> kl_;
};

/// Which recursion produced a table cell.
enum class SignedRule { Diagonal, Vanishing, CaseA, CaseB, CaseAPrime };

/// Signed polynomials indexed as S(x, y) = P^{lambda,w}_{w_lambda x, w_lambda y}, computed by induction
/// on l(x) through a right descent.
class SignedKLTable {
public:
    explicit SignedKLTable(std::shared_ptr<const SignedContext> ctx, DescentChoice choice = DescentChoice::First)
        : ctx_(std::move(ctx)) {
        const ReflectionGroup& W = ctx_->group();
        const int n = W.size();
        S_.assign(n, std::vector<KLPoly>(n));
        rule_.assign(n, std::vector<SignedRule>(n, SignedRule::Vanishing));
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return W.length(a) < W.length(b); });
        for (int xs : order) {
            S_[xs][xs] = KLPoly::constant(1);
            rule_[xs][xs] = SignedRule::Diagonal;
            if (xs == W.identity()) continue;
            for (int y = 0; y < n; ++y)
                if (y != xs) S_[xs][y] = cell(xs, y, choice);
        }
    }

    const SignedContext& context() const { return *ctx_; }
    const KLPoly& signed_kl(int x, int y) const { return S_[x][y]; }
    SignedRule rule(int x, int y) const { return rule_[x][y]; }
    /// a_{x,y,j}: coefficient of q^{(l(x)-l(y)-j)/2}.
    long long level_coefficient(int x, int y, int j) const {
        const ReflectionGroup& W = ctx_->group();
        return level_term(S_[x][y], W.length(x) - W.length(y), j);
    }

private:
    std::vector<int> descents(int x, DescentChoice choice, bool right) const {
        const ReflectionGroup& W = ctx_->group();
        std::vector<int> out;
        for (int i = 0; i < W.num_generators(); ++i)
            if (right ? W.right_descent(x, i) : W.left_descent(x, i)) out.push_back(i);
        if (choice == DescentChoice::Last) std::reverse(out.begin(), out.end());
        return out;
    }

    int delta_sign(int z, int s) const {
        const ReflectionGroup& W = ctx_->group();
        return ctx_->delta_sign(W.act(z, ctx_->datum().root(W.generator_root(s))));
    }

    /// Sign relating xs to x = xs * s (right) or x = s * xs (left) when the column y is unaffected:
    /// sgn(delta, gamma^vee) eps(H_{gamma,N}, chamber of xs lambda) with gamma the root reflecting x lambda to xs lambda.
    int step_sign(int xs, int s, bool right) {
        const ReflectionGroup& W = ctx_->group();
        const RootDatum& d = ctx_->datum();
        int x = right ? W.mul_simple_right(xs, s) : W.mul_simple_left(s, xs);
        RootVec gamma = right ? W.act(x, d.root(W.generator_root(s))) : d.root(W.generator_root(s));
        int g = d.root_index(gamma);
        Rational level = d.pairing(ctx_->point(xs), g);
        return ctx_->delta_sign(gamma) * crossing_epsilon(xs, g, static_cast<int>(to_long(floor_of(level))));
    }

    KLPoly cell(int xs, int y, DescentChoice choice) {
        const ReflectionGroup& W = ctx_->group();
        const RootDatum& d = ctx_->datum();
        auto right = descents(xs, choice, true);
        for (int s : right) {
            int x = W.mul_simple_right(xs, s);
            int ys = W.mul_simple_right(y, s);
            if (W.length(ys) > W.length(y)) {
                rule_[xs][y] = SignedRule::CaseA;
                return step_sign(xs, s, true) * S_[x][y];
            }
        }
        auto case_b = [&](int s) {
            int x = W.mul_simple_right(xs, s);
            int ys = W.mul_simple_right(y, s);
            const RootVec& alpha = d.root(W.generator_root(s));
            int N = -static_cast<int>(to_long(floor_of(d.pairing(ctx_->lambda(), W.generator_root(s)))));
            int grade = d.grading().eval(N * W.act(x, alpha)) ? -1 : 1;
            KLPoly acc = delta_sign(ys, s) * S_[x][ys] - delta_sign(x, s) * S_[x][y].shifted(1);
            for (int z = 0; z < W.size(); ++z) {
                int gap = W.length(z) - W.length(y);
                if (gap <= 0 || gap % 2 == 0) continue;
                if (W.right_descent(z, s)) continue;
                long long a = level_term(S_[z][y], gap, 1);
                if (a) acc += (delta_sign(z, s) * a) * S_[x][z].shifted((gap + 1) / 2);
            }
            rule_[xs][y] = SignedRule::CaseB;
            return (-grade) * acc;
        };
        for (int s : right) {
            int x = W.mul_simple_right(xs, s);
            if (x != y && W.bruhat_leq(y, x)) return case_b(s);
        }
        for (int s : descents(xs, choice, false)) {
            int x = W.mul_simple_left(s, xs);
            if (W.left_descent(y, s)) continue;
            rule_[xs][y] = SignedRule::CaseAPrime;
            return step_sign(xs, s, false) * S_[x][y];
        }
        // y below xs but not below any x = xs s: the same relation with the vanishing term S(x, y) dropped.
        if (W.bruhat_leq(y, xs)) return case_b(right.front());
        return KLPoly();
    }

    /// epsilon(H_{gamma,N}) for the chamber of xs lambda, read near xs lambda along xs(-rho).
    int crossing_epsilon(int xs, int gamma, int N) {
        auto key = std::make_pair(xs, gamma);
        auto it = eps_.find(key);
        if (it != eps_.end()) return it->second;
        const RootDatum& d = ctx_->datum();
        Weight p = ctx_->point(xs);
        Weight dir = ctx_->group().act(xs, -d.rho());
        Rational t = Rational(1) / 64;
        for (int b = 0; b < d.num_positive(); ++b) {
            Rational v = abs(d.pairing(dir, b)), room = abs(d.pairing(p, b));
            if (room == 0) room = 1;
            if (v != 0) t = std::min(t, Rational(room / (4 * v)));
        }
        int e = epsilon_hyperplane(ctx_->algebra_ptr(), gamma, N, p + t * dir).value;
        eps_.emplace(key, e);
        return e;
    }

    std::shared_ptr<const SignedContext> ctx_;
    std::vector<std::vector<KLPoly>> S_;
    std::vector<std::vector<SignedRule>> rule_;
    std::map<std::pair<int, int>, int> eps_;
};

}  // namespace sigkl
