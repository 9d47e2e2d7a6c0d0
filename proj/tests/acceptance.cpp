#include <sigkl/cli.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace sigkl;
using sigkl::cli::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

AlgebraPtr alg(const std::string& type, std::vector<bool> nc = {}) {
    auto t = CartanType::parse(type);
    if (nc.empty()) nc.assign(t.rank(), false);
    return LieAlgebra::make(build_root_datum(type, nc));
}

std::string marking_name(const std::vector<bool>& nc) {
    std::string s;
    for (bool b : nc) s += b ? 'n' : 'c';
    return s;
}

cli::Config rank_one_config(bool noncompact, const Rational& pairing, const std::string& chamber, const std::string& x, int cutoff) {
    cli::Config c;
    c.type = "A1";
    c.noncompact = {noncompact};
    c.lambda = {pairing / 2};
    c.chamber = parse_word(chamber);
    c.x = parse_word(x);
    c.cutoff = cutoff;
    return c;
}

std::vector<long long> column(const FormalCharacter& ch) {
    std::vector<long long> out;
    for (int k = 0; k <= ch.cutoff(); ++k) out.push_back(ch[RootVec{k}]);
    return out;
}

std::string vec_str(const std::vector<long long>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

FormalCharacter character_of(const json& doc) { return cli::character_from_json(doc.at("character")); }

// Random point whose coroot pairings all lie strictly inside (lo, hi) and off the integers.
Weight random_point(const RootDatum& d, std::mt19937& rng, int lo, int hi) {
    std::uniform_int_distribution<int> num(lo * 13, hi * 13);
    for (;;) {
        std::vector<Rational> p;
        for (int i = 0; i < d.rank(); ++i) p.push_back(Rational(num(rng)) / 13);
        Weight w = d.from_pairings(p);
        bool ok = true;
        for (int b = 0; b < d.num_positive() && ok; ++b) {
            Rational v = d.pairing(w, b);
            ok = !is_integer(v) && v > lo && v < hi;
        }
        if (ok) return w;
    }
}

// ---------------------------------------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    for (int n = 0; n <= 4; ++n)
        for (const Rational& f : std::vector<Rational>{Rational(1) / 3, Rational(5) / 7}) {
            auto c = rank_one_config(false, Rational(n) + f, "e", "e", 12);
            FormalCharacter ch = character_of(cli::character_document("sig-m", c));
            std::vector<long long> want;
            for (int k = 0; k <= 12; ++k) want.push_back(k < n ? 1 : ((k - n) % 2 ? -1 : 1));
            if (column(ch) != want) o.fail("n=" + std::to_string(n) + ": got " + vec_str(column(ch)) + ", want " + vec_str(want));
            if (ch.anchor() != Weight(c.lambda) - Weight(std::vector<Rational>{Rational(1) / 2})) o.fail("anchor is not lambda - rho");
        }
    return o;
}

Outcome criterion2() {
    Outcome o;
    for (int n = 1; n <= 5; ++n) {
        auto c = rank_one_config(false, Rational(-n), "1", "1", n + 4);
        auto col = column(character_of(cli::character_document("sig-l", c)));
        std::vector<long long> want(n + 5, 0);
        for (int k = 0; k < n; ++k) want[k] = 1;
        if (col != want) o.fail("n=" + std::to_string(n) + ": got " + vec_str(col));
    }
    return o;
}

Outcome criterion3() {
    Outcome o;
    for (int n = 0; n <= 4; ++n)
        for (const Rational& f : std::vector<Rational>{Rational(1) / 3, Rational(5) / 7}) {
            auto c = rank_one_config(true, Rational(n) + f, "e", "e", 12);
            auto col = column(character_of(cli::character_document("sig-m", c)));
            std::vector<long long> want;
            for (int k = 0; k <= 12; ++k) want.push_back(k < n ? (k % 2 ? -1 : 1) : (n % 2 ? -1 : 1));
            if (col != want) o.fail("sig-m n=" + std::to_string(n) + ": got " + vec_str(col) + ", want " + vec_str(want));
        }
    for (int n = 1; n <= 5; ++n) {
        auto c = rank_one_config(true, Rational(-n), "1", "1", n + 4);
        auto col = column(character_of(cli::character_document("sig-l", c)));
        std::vector<long long> want(n + 5, 0);
        for (int k = 0; k < n; ++k) want[k] = k % 2 ? -1 : 1;
        if (col != want) o.fail("sig-l n=" + std::to_string(n) + ": got " + vec_str(col));
        auto entries = cli::poly_table_from_json(cli::skl_document(c).at("pairs"));
        long long sign = n % 2 ? -1 : 1;
        bool found = false;
        for (auto& e : entries)
            if (e.x == "1" && e.y == "e") {
                found = true;
                if (e.levels != std::map<int, long long>{{1, sign}}) o.fail("P(w0 s1, w0) != (-1)^n at n=" + std::to_string(n));
            }
        if (!found) o.fail("P(w0 s1, w0) missing at n=" + std::to_string(n));
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    std::mt19937 rng(4004);
    std::uniform_int_distribution<int> whole(-2, 5), frac(1, 10);
    for (bool nc : {false, true}) {
        auto A = alg("A1", {nc});
        const RootDatum& d = A->d();
        SignatureEngine E(A);
        for (int i = 0; i < 20; ++i) {
            Rational p = Rational(whole(rng)) + Rational(frac(rng)) / 11;
            Weight l = d.from_pairings({p});
            auto direct = direct_signature_character(A, l, 8);
            auto r = E.R_alcove(l, 8), rc = E.R_alcove_closed(l, 8);
            if (!r.agrees_with(direct) || !rc.agrees_with(direct))
                o.fail(std::string(nc ? "noncompact" : "compact") + " pairing " + to_string(p) + ": direct " + vec_str(column(direct)) +
                       ", R " + vec_str(column(r)) + ", closed " + vec_str(column(rc)));
        }
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::mt19937 rng(5005);
    std::vector<std::pair<std::string, std::vector<bool>>> configs = {{"C2", {true, false}}, {"C2", {false, true}}, {"A2", {false, false}}};
    for (auto& [type, nc] : configs) {
        auto A = alg(type, nc);
        const RootDatum& d = A->d();
        SignatureEngine E(A);
        for (int i = 0; i < 5; ++i) {
            Weight l = random_point(d, rng, -2, 3);
            auto direct = direct_signature_character(A, l, 5);
            auto r = E.R_alcove(l, 5);
            if (!r.agrees_with(direct)) {
                auto mu = r.first_difference(direct);
                o.fail(type + "[" + marking_name(nc) + "] lambda=" + l.str() + " mu=" + Weight(*mu).str() + ": R " +
                       std::to_string(r[*mu]) + ", direct " + std::to_string(direct[*mu]));
            }
        }
    }
    return o;
}

Outcome criterion6() {
    Outcome o;
    const KLPoly one_plus_q({1, 1});
    for (std::string t : {"A1", "A2", "B2", "A3"}) {
        auto W = ReflectionGroup::full(build_root_datum(t, std::vector<bool>(CartanType::parse(t).rank(), false)));
        KLTable T(W);
        auto P = hecke_oracle(*W);
        int w0 = W->longest();
        std::set<std::pair<int, int>> got, want;
        for (int x = 0; x < W->size(); ++x)
            for (int y = 0; y < W->size(); ++y) {
                const KLPoly& h = P[W->multiply(w0, x)][W->multiply(w0, y)];
                if (T.kl(x, y) != h) o.fail(t + " x=" + W->word_string(x) + " y=" + W->word_string(y));
                if (T.kl(x, y) == one_plus_q) got.insert({x, y});
                if (h == one_plus_q) want.insert({x, y});
            }
        if (t == "A3" && (got != want || got.size() != 6))
            o.fail("A3 has " + std::to_string(got.size()) + " cells equal to 1 + q, oracle has " + std::to_string(want.size()));
        if (t != "A3" && !got.empty()) o.fail(t + " has a non-constant polynomial");
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    auto A = alg("A2");
    const RootDatum& d = A->d();
    auto ctx = std::make_shared<SignedContext>(A, Rational(-2) * d.rho());
    const ReflectionGroup& W = ctx->group();
    const int h = 5;
    std::vector<FormalCharacter> L;
    for (int y = 0; y < W.size(); ++y) L.push_back(ch_irreducible(*ctx, y, h));
    for (int x = 0; x < W.size(); ++x) {
        Weight top = ctx->point(x) - d.rho();
        auto J = jantzen_layers(A, ctx->point(x), ctx->delta(), h);
        std::map<int, FormalCharacter> predicted;
        for (int y = 0; y < W.size(); ++y) {
            RootVec k = (top - (ctx->point(y) - d.rho())).to_root_vec();
            if (!is_nonnegative(k) || height(k) > h) continue;
            int gap = W.length(x) - W.length(y);
            for (int j = 0; j <= gap; ++j) {
                long long a = level_term(ctx->kl().kl(x, y), gap, j);
                if (!a) continue;
                auto it = predicted.try_emplace(j, top, h).first;
                it->second += a * lift_to(L[y].truncated(h - height(k)), top, h);
            }
        }
        for (auto& mu : cone_elements(d.rank(), h)) {
            const LayerMap& lm = J.spaces.at(mu);
            std::set<int> levels;
            for (auto& [j, _] : lm) levels.insert(j);
            for (auto& [j, _] : predicted) levels.insert(j);
            for (int j : levels) {
                long long want = predicted.count(j) ? predicted.at(j)[mu] : 0;
                long long got = lm.count(j) ? lm.at(j).dim : 0;
                if (got != want)
                    o.fail("x=" + W.word_string(x) + " mu=" + Weight(mu).str() + " j=" + std::to_string(j) + ": layer " +
                           std::to_string(got) + ", predicted " + std::to_string(want));
            }
        }
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    struct Ctx {
        std::string type;
        std::vector<bool> nc;
        std::vector<Rational> pairings;
        int cutoff;
    };
    std::vector<Ctx> contexts;
    for (bool nc : {false, true})
        for (int n = 1; n <= 5; ++n) contexts.push_back({"A1", {nc}, {Rational(-n)}, 6});
    for (auto& [type, nc] : std::vector<std::pair<std::string, std::vector<bool>>>{
             {"C2", {true, false}}, {"C2", {false, true}}, {"A2", {false, false}}}) {
        contexts.push_back({type, nc, {Rational(-1), Rational(-1)}, 5});
        contexts.push_back({type, nc, {Rational(-2), Rational(-1)}, 5});
        contexts.push_back({type, nc, {Rational(-1), Rational(-1) / 2}, 5});
    }
    const std::set<std::string> laws = {"signed_kl_mod_2", "signed_kl_bound", "chamber_coherence", "chamber_independence"};
    int failed = 0;
    for (auto& c : contexts) {
        auto A = alg(c.type, c.nc);
        auto ctx = std::make_shared<SignedContext>(A, A->d().from_pairings(c.pairings));
        Report rep = compare_all(ctx, c.cutoff);
        for (auto& chk : rep.checks) {
            if (!laws.count(chk.name) || chk.passed) continue;
            ++failed;
            std::string w = chk.witness ? " at lambda=" + chk.witness->lambda + " mu=" + chk.witness->mu + ": " + chk.witness->detail : "";
            std::cout << "    " << rep.context << " " << chk.name << w << "\n";
            o.fail(rep.context + " " + chk.name);
        }
    }
    if (failed) o.detail += " (" + std::to_string(failed) + " law violations in " + std::to_string(contexts.size()) + " contexts)";
    return o;
}

Outcome criterion9() {
    Outcome o;
    json doc = cli::det_check_document(4, 1);
    for (auto& t : doc.at("types"))
        for (auto& c : t.at("cells"))
            if (!c.at("proportional").get<bool>()) o.fail(t.at("type").get<std::string>() + " mu=" + c.at("mu").dump());
    return o;
}

using LieVec = std::map<std::pair<int, int>, long long>;

LieVec lie_bracket(const Enveloping& U, const LieVec& a, const LieVec& b) {
    LieVec out;
    for (auto& [la, ca] : a)
        for (auto& [lb, cb] : b)
            for (auto& [l, c] : U.bracket(Letter{la.first, la.second}, Letter{lb.first, lb.second})) out[{l.kind, l.idx}] += ca * cb * c;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

Outcome criterion10() {
    Outcome o;
    for (std::string t : {"A1", "A2", "B2", "G2", "A3", "B3", "C3"}) {
        auto A = alg(t);
        Enveloping U(A);
        std::vector<LieVec> gens;
        const RootDatum& d = A->d();
        for (int a = 0; a < d.num_positive(); ++a) gens.push_back({{{Letter::Y, a}, 1}});
        for (int i = 0; i < d.rank(); ++i) gens.push_back({{{Letter::H, i}, 1}});
        for (int a = 0; a < d.num_positive(); ++a) gens.push_back({{{Letter::X, a}, 1}});
        for (auto& x : gens)
            for (auto& y : gens)
                for (auto& z : gens) {
                    LieVec total;
                    for (auto part : {lie_bracket(U, x, lie_bracket(U, y, z)), lie_bracket(U, y, lie_bracket(U, z, x)),
                                      lie_bracket(U, z, lie_bracket(U, x, y))})
                        for (auto& [k, c] : part) total[k] += c;
                    for (auto& [k, c] : total)
                        if (c) o.fail("Jacobi identity fails in " + t);
                }
    }

    std::mt19937 rng(1010);
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (std::string t : {"A2", "B2", "G2"}) {
        auto A = alg(t);
        const RootDatum& d = A->d();
        FormalCharacter f(-d.rho(), 6);
        for (auto& mu : cone_elements(d.rank(), 6)) f.add(mu, coeff(rng));
        for (int b = 0; b < d.num_positive(); ++b)
            for (int s : {1, -1})
                if (!f.over_binomial(d.root(b), s).times_binomial(d.root(b), s).agrees_with(f)) o.fail("remultiplication fails in " + t);
    }

    for (auto& [t, nc] : std::vector<std::pair<std::string, std::vector<bool>>>{{"A2", {true, false}}, {"C2", {false, true}}}) {
        auto A = alg(t, nc);
        const RootDatum& d = A->d();
        Weight l0 = d.from_pairings({Rational(1), Rational(2)});
        Weight d1 = -d.rho(), d2 = d.from_pairings({Rational(2), Rational(-5)});
        auto J1 = jantzen_layers(A, l0, d1, 5), J2 = jantzen_layers(A, l0, d2, 5);
        for (auto& [mu, L] : J1.spaces) {
            const LayerMap& L2 = J2.spaces.at(mu);
            std::map<int, int> a, b;
            for (auto& [j, x] : L) a[j] = x.dim;
            for (auto& [j, x] : L2) b[j] = x.dim;
            if (a != b) o.fail("layer dimensions depend on the direction in " + t + " at mu=" + Weight(mu).str());
        }
        for (auto& [J, delta] : {std::pair{J1, d1}, std::pair{J2, d2}}) {
            Rational s = side_step(d, l0, delta);
            auto Mp = VermaModule<Rational>::at(A, l0 + s * delta);
            auto Mm = VermaModule<Rational>::at(A, l0 - s * delta);
            for (auto& [mu, L] : J.spaces) {
                auto side = side_signatures(L);
                if (signature(Mp.gram(FormKind::Hermitian, mu)) != side.plus || signature(Mm.gram(FormKind::Hermitian, mu)) != side.minus)
                    o.fail("side signatures disagree in " + t + " at mu=" + Weight(mu).str());
            }
        }
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> expected_failures, only;
    app.add_option("--expect-fail", expected_failures, "criteria known to fail; the exit status is 0 when exactly these fail")
        ->delimiter(',');
    app.add_option("--only", only, "run a subset")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        int id;
        std::string title;
        double limit;  // seconds
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "su(2) Verma signature characters, n = 0..4, height 12", 1, criterion1},
        {2, "su(2) irreducibles at -n lambda_1: n terms, all +1", 1, criterion2},
        {3, "sl(2,R) alternating analogues and P(w0 s1, w0) = (-1)^n", 1, criterion3},
        {4, "rank 1: direct = R_alcove = R_alcove_closed, 2 x 20 points, cutoff 8", 10, criterion4},
        {5, "rank 2: direct = R_alcove for C2 (1,0), C2 (0,1), A2 compact, cutoff 5", 300, criterion5},
        {6, "KL tables equal the Hecke oracle for A1, A2, B2, A3", 30, criterion6},
        {7, "A2 at -2 rho: Jantzen layer dimensions equal KL predictions, height 5", 120, criterion7},
        {8, "signed table laws: parity, bound, coherence, chamber independence", 1e9, criterion8},
        {9, "determinant proportionality, ranks 1-2, height 4", 60, criterion9},
        {10, "structure: Jacobi, remultiplication, direction independence, side signatures", 1e9, criterion10},
    };

    std::set<int> failed;
    for (auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit) o.fail("took " + std::to_string(secs) + " s");
        if (!o.pass) failed.insert(c.id);
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << std::fixed << std::setprecision(2) << secs << " s";
        if (c.limit < 1e9) line << ", limit " << std::setprecision(0) << c.limit << " s";
        line << ")";
        if (!o.pass) line << ": " << o.detail;
        std::cout << line.str() << std::endl;
    }
    std::set<int> expected(expected_failures.begin(), expected_failures.end());
    if (!only.empty()) {
        std::set<int> sel(only.begin(), only.end()), e2;
        for (int e : expected)
            if (sel.count(e)) e2.insert(e);
        expected = e2;
    }
    if (failed == expected) return 0;
    for (int e : expected)
        if (!failed.count(e)) std::cout << "criterion " << e << " was expected to fail but passed\n";
    return 1;
}
