#include <sigkl/enveloping.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace sigkl;

namespace {

AlgebraPtr alg(const std::string& type, std::vector<bool> nc = {}) {
    auto t = CartanType::parse(type);
    if (nc.empty()) nc.assign(t.rank(), false);
    return LieAlgebra::make(build_root_datum(type, nc));
}

// Lie algebra elements as sparse combinations of generators.
using LieVec = std::map<std::pair<int, int>, long long>;

LieVec lie_bracket(const Enveloping& U, const LieVec& a, const LieVec& b) {
    LieVec out;
    for (auto& [la, ca] : a)
        for (auto& [lb, cb] : b)
            for (auto& [l, c] : U.bracket(Letter{la.first, la.second}, Letter{lb.first, lb.second}))
                out[{l.kind, l.idx}] += ca * cb * c;
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == 0) ? out.erase(it) : std::next(it);
    return out;
}

std::vector<Letter> generators(const RootDatum& d) {
    std::vector<Letter> g;
    for (int a = 0; a < d.num_positive(); ++a) g.push_back({Letter::Y, a});
    for (int i = 0; i < d.rank(); ++i) g.push_back({Letter::H, i});
    for (int a = 0; a < d.num_positive(); ++a) g.push_back({Letter::X, a});
    return g;
}

Weight random_weight(std::mt19937& rng, int rank) {
    std::uniform_int_distribution<int> num(-40, 40), den(1, 7);
    std::vector<Rational> c;
    for (int i = 0; i < rank; ++i) {
        Rational x(num(rng), den(rng));
        x.canonicalize();
        c.push_back(x);
    }
    return Weight(c);
}

}  // namespace

TEST(StructureConstants, MagnitudeIsPPlusOne) {
    for (std::string t : {"A1", "A2", "B2", "G2", "A3", "B3", "C3"}) {
        auto A = alg(t);
        const auto& sc = *A->sc;
        for (int a = 0; a < sc.num_roots(); ++a)
            for (int b = 0; b < sc.num_roots(); ++b) {
                if (sc.sum(a, b) < 0) {
                    EXPECT_EQ(sc.N(a, b), 0);
                    continue;
                }
                int p = 0;
                while (sc.index(sc.vec(b) - (p + 1) * sc.vec(a)) >= 0) ++p;
                EXPECT_EQ(std::abs(sc.N(a, b)), p + 1) << t;
                EXPECT_EQ(sc.N(a, b), -sc.N(b, a));
                EXPECT_EQ(sc.N(sc.neg(a), sc.neg(b)), -sc.N(a, b));
            }
    }
}

TEST(Enveloping, JacobiIdentity) {
    for (std::string t : {"A1", "A2", "B2", "G2", "A3", "B3", "C3", "A1xA2"}) {
        auto A = alg(t);
        Enveloping U(A);
        auto gens = generators(A->d());
        auto single = [](Letter l) { return LieVec{{{l.kind, l.idx}, 1}}; };
        for (auto& x : gens)
            for (auto& y : gens)
                for (auto& z : gens) {
                    LieVec X = single(x), Y = single(y), Z = single(z);
                    LieVec total;
                    for (auto part : {lie_bracket(U, X, lie_bracket(U, Y, Z)), lie_bracket(U, Y, lie_bracket(U, Z, X)),
                                      lie_bracket(U, Z, lie_bracket(U, X, Y))})
                        for (auto& [k, c] : part) total[k] += c;
                    for (auto& [k, c] : total) ASSERT_EQ(c, 0) << t;
                }
    }
}

TEST(Enveloping, StraightenSl2) {
    auto A = alg("A1");
    Enveloping U(A);
    auto X = U.letter<Integer>({Letter::X, 0});
    auto Y = U.letter<Integer>({Letter::Y, 0});
    auto H = U.letter<Integer>({Letter::H, 0});
    // XY = YX + H
    UElement<Integer> expect = U.multiply(Y, X);
    expect += H;
    EXPECT_EQ(U.multiply(X, Y), expect);
    // HX = XH + 2X
    UElement<Integer> hx = U.multiply(X, H);
    hx += X.scaled(2);
    EXPECT_EQ(U.multiply(H, X), hx);
    // X Y^2 = Y^2 X + 2 Y H - 2 Y
    auto YY = U.multiply(Y, Y);
    UElement<Integer> rhs = U.multiply(YY, X);
    rhs += U.multiply(Y, H).scaled(2);
    rhs -= Y.scaled(2);
    EXPECT_EQ(U.multiply(X, YY), rhs);
}

TEST(Enveloping, AssociativityAndAntiInvolutions) {
    for (std::string t : {"A2", "B2"}) {
        auto A = alg(t, {true, false});
        Enveloping U(A);
        auto gens = generators(A->d());
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
        auto rand_elem = [&] {
            UElement<Integer> u = U.one<Integer>();
            for (int k = 0; k < 3; ++k) u = U.multiply(u, U.letter<Integer>(gens[pick(rng)]));
            return u;
        };
        for (int trial = 0; trial < 20; ++trial) {
            auto a = rand_elem(), b = rand_elem(), c = rand_elem();
            EXPECT_EQ(U.multiply(U.multiply(a, b), c), U.multiply(a, U.multiply(b, c)));
            EXPECT_EQ(U.star(U.star(a)), a);
            EXPECT_EQ(U.sigma(U.sigma(a)), a);
            EXPECT_EQ(U.star(U.multiply(a, b)), U.multiply(U.star(b), U.star(a)));
            EXPECT_EQ(U.sigma(U.multiply(a, b)), U.multiply(U.sigma(b), U.sigma(a)));
        }
    }
}

TEST(Verma, GramAgreesWithEnvelopingProjection) {
    std::mt19937 rng(11);
    for (std::string t : {"A1", "A2", "B2", "G2"}) {
        auto A = alg(t, std::vector<bool>(CartanType::parse(t).rank(), false));
        std::vector<bool> nc(A->d().rank(), false);
        nc[0] = true;
        auto An = LieAlgebra::make(build_root_datum(t, nc));
        Enveloping U(An);
        Weight lambda = random_weight(rng, An->d().rank());
        auto M = VermaModule<Rational>::at(An, lambda);
        for (auto& mu : cone_elements(An->d().rank(), 3)) {
            const auto& B = M.basis(mu);
            auto as_elem = [&](const Mono& m) {
                UElement<Rational> u = U.one<Rational>();
                for (auto& l : U.letters([&] {
                         std::vector<int> w(U.word_size(), 0);
                         for (std::size_t a = 0; a < m.size(); ++a) w[a] = m[a];
                         return w;
                     }()))
                    u = U.multiply(u, U.letter<Rational>(l));
                return u;
            };
            const auto& Gc = M.gram(FormKind::Contravariant, mu);
            const auto& Gh = M.gram(FormKind::Hermitian, mu);
            ASSERT_TRUE(Gc.is_symmetric());
            ASSERT_TRUE(Gh.is_symmetric());
            for (std::size_t i = 0; i < B.size(); ++i)
                for (std::size_t j = 0; j < B.size(); ++j) {
                    auto ui = as_elem(B[i]), uj = as_elem(B[j]);
                    EXPECT_EQ(Gc(i, j), U.project_h_and_eval(U.multiply(U.sigma(uj), ui), lambda)) << t;
                    EXPECT_EQ(Gh(i, j), U.project_h_and_eval(U.multiply(U.star(uj), ui), lambda)) << t;
                }
        }
    }
}

TEST(Verma, CompactFormsCoincide) {
    auto A = alg("B2");
    auto M = VermaModule<Rational>::at(A, Weight({Rational(-3, 2), Rational(2, 3)}));
    for (auto& mu : cone_elements(2, 4))
        EXPECT_EQ(M.gram(FormKind::Contravariant, mu), M.gram(FormKind::Hermitian, mu));
}

TEST(Verma, DeterminantProportionalToProductFormula) {
    std::mt19937 rng(3);
    for (std::string t : {"A1", "A2", "B2", "G2"}) {
        auto A = alg(t);
        int r = A->d().rank();
        for (auto& mu : cone_elements(r, 4)) {
            Rational ratio;
            for (int trial = 0; trial < 3; ++trial) {
                Weight lambda = random_weight(rng, r);
                while (det_product_formula(A, lambda, mu) == 0) lambda = random_weight(rng, r);
                Rational det = shapovalov_determinant(A, lambda, mu);
                Rational prod = det_product_formula(A, lambda, mu);
                ASSERT_NE(prod, 0);
                Rational q = det / prod;
                EXPECT_NE(q, 0);
                if (trial == 0)
                    ratio = q;
                else
                    EXPECT_EQ(q, ratio) << t << " " << Weight(mu).str();
            }
        }
    }
}

TEST(Verma, DeformedSpecializesAtZero) {
    auto A = alg("A2", {false, true});
    Weight l0({Rational(-1), Rational(-2)});
    Weight delta({Rational(1, 3), Rational(-2, 5)});
    auto Md = VermaModule<QPoly>::deformed(A, l0, delta);
    auto M0 = VermaModule<Rational>::at(A, l0);
    auto M1 = VermaModule<Rational>::at(A, l0 + Rational(2) * delta);
    for (auto& mu : cone_elements(2, 4))
        for (auto kind : {FormKind::Contravariant, FormKind::Hermitian}) {
            const auto& G = Md.gram(kind, mu);
            EXPECT_EQ(G.map([](const QPoly& p) { return p.eval(0); }), M0.gram(kind, mu));
            EXPECT_EQ(G.map([](const QPoly& p) { return p.eval(2); }), M1.gram(kind, mu));
        }
}

TEST(Verma, SingularVectorIsHighestWeight) {
    struct Case {
        std::string type;
        std::vector<Rational> pairings;
        int root;
        int N;
    };
    std::vector<Case> cases = {
        {"A1", {Rational(3)}, 0, 3},
        {"A2", {Rational(2), Rational(1, 2)}, 0, 2},
        {"A2", {Rational(1, 3), Rational(5, 3)}, 2, 2},
        {"B2", {Rational(1, 2), Rational(3, 4)}, 2, 2},
        {"G2", {Rational(1, 7), Rational(2, 7)}, 5, 1},
    };
    for (auto& c : cases) {
        auto A = alg(c.type);
        Weight l0 = A->d().from_pairings(c.pairings);
        if (A->d().pairing(l0, c.root) != c.N) {
            // Move onto the hyperplane along the root direction.
            Rational shift = (Rational(c.N) - A->d().pairing(l0, c.root)) / 2;
            l0 = l0 + shift * Weight(A->d().root(c.root));
        }
        auto f = singular_vector(A, l0, c.root, c.N);
        auto M = VermaModule<Rational>::at(A, l0);
        ASSERT_EQ(f.monomials.size(), f.coefficients.size());
        bool positive_lead = false;
        for (auto& x : f.coefficients)
            if (x != 0) {
                positive_lead = x > 0;
                break;
            }
        EXPECT_TRUE(positive_lead);
        for (int i = 0; i < A->d().rank(); ++i) {
            std::map<Mono, Rational> image;
            for (std::size_t k = 0; k < f.monomials.size(); ++k)
                for (auto& [m, x] : M.applyX(A->d().simple_root_index(i), f.monomials[k])) image[m] += x * Rational(f.coefficients[k]);
            for (auto& [m, x] : image) EXPECT_EQ(x, 0) << c.type;
        }
    }
}

TEST(Verma, SingularVectorRejectsOffHyperplane) {
    auto A = alg("A1");
    try {
        singular_vector(A, Weight({Rational(1, 3)}), 0, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotOnHyperplane);
    }
}

TEST(Verma, HermitianIsGradedMultipleOfContravariant) {
    std::mt19937 rng(19);
    for (std::string t : {"A2", "B2", "G2"}) {
        for (std::vector<bool> nc : {std::vector<bool>{true, false}, {false, true}, {true, true}}) {
            auto A = alg(t, nc);
            auto M = VermaModule<Rational>::at(A, random_weight(rng, 2));
            for (auto& mu : cone_elements(2, 4)) {
                Rational s = A->d().grading().eval(mu) ? -1 : 1;
                EXPECT_EQ(M.gram(FormKind::Hermitian, mu),
                          M.gram(FormKind::Contravariant, mu).map([&](const Rational& x) { return Rational(s * x); }));
            }
        }
    }
}

TEST(Verma, SingularExactlyBelowEmbeddedVermas) {
    // Gram at weight nu is singular iff nu dominates lambda - mu for some M(mu) reachable by reflections.
    for (std::string t : {"A1", "A2"}) {
        auto A = alg(t);
        const auto& d = A->d();
        int r = d.rank();
        std::vector<std::vector<int>> pts;
        for (int a = -2; a <= 3; ++a) {
            if (r == 1) {
                pts.push_back({a});
                continue;
            }
            for (int b = -2; b <= 3; ++b) pts.push_back({a, b});
        }
        for (auto& p : pts) {
            std::vector<Rational> pr(p.begin(), p.end());
            Weight lambda = d.from_pairings(pr);
            std::set<Weight> reach{lambda};
            std::vector<Weight> stack{lambda};
            while (!stack.empty()) {
                Weight x = stack.back();
                stack.pop_back();
                for (int b = 0; b < d.num_positive(); ++b) {
                    Rational n = d.pairing(x, b);
                    if (n >= 1 && is_integer(n) && reach.insert(d.reflect(b, x)).second) stack.push_back(d.reflect(b, x));
                }
            }
            auto M = VermaModule<Rational>::at(A, lambda);
            for (auto& nu : cone_elements(r, 5)) {
                bool expect = false;
                for (auto& m : reach) {
                    if (m == lambda) continue;
                    RootVec diff = (lambda - m).to_root_vec();
                    if (is_nonnegative(nu - diff)) expect = true;
                }
                EXPECT_EQ(determinant(M.gram(FormKind::Contravariant, nu)) == 0, expect) << t << " " << lambda.str();
            }
        }
    }
}
