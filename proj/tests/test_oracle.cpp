#include <sigkl/oracle.hpp>

#include <gtest/gtest.h>

using namespace sigkl;

namespace {

AlgebraPtr alg(const std::string& type, std::vector<bool> nc = {}) {
    auto t = CartanType::parse(type);
    if (nc.empty()) nc.assign(t.rank(), false);
    return LieAlgebra::make(build_root_datum(type, nc));
}

std::shared_ptr<SignedContext> context(AlgebraPtr A, std::vector<Rational> p, const std::string& w = "e") {
    return std::make_shared<SignedContext>(A, A->d().from_pairings(p), parse_word(w));
}

std::vector<long long> column(const FormalCharacter& ch) {
    std::vector<long long> out;
    for (int k = 0; k <= ch.cutoff(); ++k) out.push_back(ch[RootVec{k}]);
    return out;
}

std::string failures(const Report& r) {
    std::string s;
    for (auto& c : r.checks)
        if (!c.passed) s += c.name + " ";
    return s;
}

}  // namespace

TEST(Direct, RankOneOnHyperplanes) {
    // Signature of the irreducible quotient at n lambda_1 + rho: n leading terms, all +1 in the compact case.
    auto A = alg("A1");
    for (int n = 1; n <= 4; ++n) {
        auto ctx = context(A, {Rational(-n)}, "1");
        SignatureCharacters sc(ctx);
        int s1 = ctx->group().from_word({0});
        std::vector<long long> want(8, 0);
        for (int k = 0; k < n; ++k) want[k] = 1;
        EXPECT_EQ(column(sc.ch_s_irreducible(s1, 7)), want);
    }
}

TEST(Direct, RankOneOffHyperplanes) {
    auto C = alg("A1", {false});
    auto N = alg("A1", {true});
    Rational p = Rational(7) / 2;
    EXPECT_EQ(column(direct_signature_character(C, C->d().from_pairings({p}), 6)),
              (std::vector<long long>{1, 1, 1, 1, -1, 1, -1}));
    EXPECT_EQ(column(direct_signature_character(N, N->d().from_pairings({p}), 6)),
              (std::vector<long long>{1, -1, 1, -1, -1, -1, -1}));
    EXPECT_THROW(direct_signature_character(C, C->d().from_pairings({p}), 41), Error);
}

TEST(CompareAll, RankOnePasses) {
    for (bool nc : {false, true})
        for (int n = 1; n <= 3; ++n) {
            auto rep = compare_all(context(alg("A1", {nc}), {Rational(-n)}, "1"), 6);
            EXPECT_TRUE(rep.passed()) << rep.context << ": " << failures(rep);
            EXPECT_EQ(rep.checks.size(), 12u);
            for (auto& c : rep.checks) EXPECT_GT(c.cases, 0) << c.name;
        }
}

TEST(CompareAll, TypeAPasses) {
    auto A = alg("A2", {true, false});
    auto rep = compare_all(std::make_shared<SignedContext>(A, Rational(-1) * A->d().rho(), parse_word("1")), 3);
    EXPECT_TRUE(rep.passed()) << rep.context << ": " << failures(rep);
    EXPECT_EQ(rep.context, "A2[nc] lambda=" + (Rational(-1) * A->d().rho()).str() + " w=1");
}

TEST(CompareAll, ResourceGuard) {
    auto kind = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Internal;
    };
    auto B3 = alg("B3");
    auto big = std::make_shared<SignedContext>(B3, Rational(-1) * B3->d().rho());
    EXPECT_EQ(kind([&] { compare_all(big, 2); }), ErrorKind::ResourceGuard);
    EXPECT_EQ(kind([&] { compare_all(context(alg("A1"), {Rational(-1)}), 7); }), ErrorKind::ResourceGuard);
    EXPECT_EQ(kind([&] { compare_all(context(alg("A1"), {Rational(-1)}), -1); }), ErrorKind::ResourceGuard);
}

TEST(CompareAll, CorruptedEpsilonIsCaughtAtFirstCrossingCheck) {
    CompareOptions opts;
    opts.epsilon_hook = [](int, int level, const Weight&, int e) { return level == 1 ? -e : e; };
    auto rep = compare_all(context(alg("A1", {true}), {Rational(-2)}, "1"), 5, opts);
    ASSERT_FALSE(rep.passed());
    const CheckResult* f = rep.first_failure();
    ASSERT_NE(f, nullptr);
    EXPECT_EQ(f->name, "R_alcove_vs_direct");
    ASSERT_TRUE(f->witness.has_value());
    EXPECT_FALSE(f->witness->lambda.empty());
    EXPECT_NE(f->witness->mu, "-");
    EXPECT_NE(f->witness->detail.find("gram="), std::string::npos);
}

TEST(Determinant, ProportionalAcrossRegularPoints) {
    for (std::string type : {"A1", "A2", "B2"}) {
        auto A = alg(type, std::vector<bool>(CartanType::parse(type).rank(), true));
        const RootDatum& d = A->d();
        std::vector<Weight> ls;
        for (int k = 0; k < 3; ++k) {
            std::vector<Rational> p;
            for (int i = 0; i < d.rank(); ++i) p.push_back(Rational(3 * k + 2 * i + 1) / (11 + 2 * i) + Rational(k));
            ls.push_back(d.from_pairings(p));
        }
        for (auto& mu : cone_elements(d.rank(), 3)) {
            auto c = determinant_check(A, mu, ls);
            EXPECT_TRUE(c.proportional()) << type;
        }
    }
    auto A = alg("A1");
    EXPECT_THROW(determinant_check(A, RootVec{2}, {A->d().from_pairings({Rational(1)})}), Error);
}
