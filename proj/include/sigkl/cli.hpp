#pragma once

#include <sigkl/oracle.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace sigkl::cli {

using json = nlohmann::json;

enum ExitCode { Ok = 0, ConfigError = 1, ComputationError = 2, VerificationFailure = 3 };

// ---------------------------------------------------------------- config

struct Config {
    std::string type;
    std::vector<bool> noncompact;
    std::vector<Rational> lambda;  // simple-root coordinates
    std::vector<int> chamber;      // 0-based generators of W_lambda
    std::vector<int> x;
    int cutoff = 4;
};

inline std::string word_text(const std::vector<int>& w) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k] + 1);
    return s.empty() ? "e" : s;
}

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()), 10);
    throw Error(ErrorKind::Config, "rationals must be strings \"p/q\" or integers, got " + j.dump());
}

inline json weight_json(const Weight& w) {
    json a = json::array();
    for (auto& c : w.coords()) a.push_back(to_string(c));
    return a;
}

inline Weight weight_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::Config, "weight must be an array of rationals");
    std::vector<Rational> c;
    for (auto& e : j) c.push_back(rational_from_json(e));
    return Weight(c);
}

inline Config parse_config(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Config, "config must be an object");
    Config c;
    try {
        c.type = j.at("type").get<std::string>();
        int r = CartanType::parse(c.type).rank();
        if (j.contains("marking")) {
            for (auto& m : j.at("marking")) {
                std::string s = m.get<std::string>();
                if (s == "c" || s == "compact")
                    c.noncompact.push_back(false);
                else if (s == "n" || s == "noncompact")
                    c.noncompact.push_back(true);
                else
                    throw Error(ErrorKind::Config, "marking entries are \"c\" or \"n\", got '" + s + "'");
            }
        } else {
            c.noncompact.assign(r, false);
        }
        if (static_cast<int>(c.noncompact.size()) != r) throw Error(ErrorKind::Config, "marking needs one entry per simple root");
        if (j.contains("lambda")) {
            c.lambda = weight_from_json(j.at("lambda")).coords();
            if (static_cast<int>(c.lambda.size()) != r) throw Error(ErrorKind::Config, "lambda needs one coordinate per simple root");
        }
        if (j.contains("chamber")) c.chamber = parse_word(j.at("chamber").get<std::string>());
        if (j.contains("x")) c.x = parse_word(j.at("x").get<std::string>());
        if (j.contains("cutoff")) c.cutoff = j.at("cutoff").get<int>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    if (c.cutoff < 0) throw Error(ErrorKind::Config, "cutoff must be nonnegative");
    return c;
}

inline json config_json(const Config& c) {
    json m = json::array();
    for (bool b : c.noncompact) m.push_back(b ? "n" : "c");
    return json{{"type", c.type},
                {"marking", m},
                {"lambda", weight_json(Weight(c.lambda))},
                {"chamber", word_text(c.chamber)},
                {"x", word_text(c.x)},
                {"cutoff", c.cutoff}};
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, "config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------- documents

inline json character_json(const FormalCharacter& ch) {
    json terms = json::array();
    for (auto& mu : cone_elements(ch.rank(), ch.cutoff())) {
        long long c = ch[mu];
        if (c) terms.push_back(json{{"mu", mu}, {"coeff", c}});
    }
    return json{{"anchor", weight_json(ch.anchor())}, {"cutoff", ch.cutoff()}, {"terms", terms}};
}

inline FormalCharacter character_from_json(const json& j) {
    FormalCharacter ch(weight_from_json(j.at("anchor")), j.at("cutoff").get<int>());
    for (auto& t : j.at("terms")) ch.add(t.at("mu").get<RootVec>(), t.at("coeff").get<long long>());
    return ch;
}

struct PolyEntry {
    std::string x, y;
    std::map<int, long long> levels;  // j -> coefficient of q^{(l(x)-l(y)-j)/2}
    friend bool operator==(const PolyEntry&, const PolyEntry&) = default;
};

/// Elements sorted by length, then by reduced word.
inline std::vector<int> canonical_order(const ReflectionGroup& W) {
    std::vector<int> order(W.size());
    for (int i = 0; i < W.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (W.length(a) != W.length(b)) return W.length(a) < W.length(b);
        return W.word(a) < W.word(b);
    });
    return order;
}

inline std::vector<PolyEntry> poly_entries(const ReflectionGroup& W, const std::function<KLPoly(int, int)>& f) {
    std::vector<PolyEntry> out;
    auto order = canonical_order(W);
    for (int x : order)
        for (int y : order) {
            KLPoly p = f(x, y);
            if (p.is_zero()) continue;
            PolyEntry e{W.word_string(x), W.word_string(y), {}};
            int gap = W.length(x) - W.length(y);
            for (int k = 0; k <= p.degree(); ++k)
                if (p.coeff(k)) e.levels[gap - 2 * k] = p.coeff(k);
            out.push_back(e);
        }
    return out;
}

inline json poly_table_json(const std::vector<PolyEntry>& entries) {
    json pairs = json::array();
    for (auto& e : entries) {
        json lv = json::object();
        for (auto& [j, c] : e.levels) lv[std::to_string(j)] = c;
        pairs.push_back(json{{"x", e.x}, {"y", e.y}, {"coeffs_by_level", lv}});
    }
    return pairs;
}

inline std::vector<PolyEntry> poly_table_from_json(const json& pairs) {
    std::vector<PolyEntry> out;
    for (auto& p : pairs) {
        PolyEntry e{p.at("x").get<std::string>(), p.at("y").get<std::string>(), {}};
        for (auto& [k, v] : p.at("coeffs_by_level").items()) e.levels[std::stoi(k)] = v.get<long long>();
        out.push_back(e);
    }
    return out;
}

inline json layers_json(const JantzenLayers& J) {
    json spaces = json::array();
    for (auto& [mu, lm] : J.spaces) {
        json layers = json::object();
        for (auto& [j, L] : lm) layers[std::to_string(j)] = json{{"dim", L.dim}, {"p", L.p}, {"q", L.q}};
        spaces.push_back(json{{"mu", mu}, {"layers", layers}});
    }
    return json{{"lambda0", weight_json(J.lambda0)}, {"delta", weight_json(J.delta)}, {"spaces", spaces}};
}

inline json report_json(const Report& r) {
    json checks = json::array();
    for (auto& c : r.checks) {
        json cj{{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}};
        if (c.witness) cj["witness"] = json{{"lambda", c.witness->lambda}, {"mu", c.witness->mu}, {"detail", c.witness->detail}};
        checks.push_back(cj);
    }
    return json{{"context", r.context}, {"passed", r.passed()}, {"checks", checks}};
}

// ---------------------------------------------------------------- text rendering

inline std::string poly_text(const PolyEntry& e, int gap) {
    std::string s;
    for (auto it = e.levels.rbegin(); it != e.levels.rend(); ++it) {
        int k = (gap - it->first) / 2;
        long long c = it->second;
        std::string mono = k == 0 ? "" : (k == 1 ? "q" : "q^" + std::to_string(k));
        std::string mag = (std::llabs(c) == 1 && k > 0) ? "" : std::to_string(std::llabs(c));
        if (s.empty())
            s = (c < 0 ? "-" : "") + mag + mono;
        else
            s += (c < 0 ? " - " : " + ") + mag + mono;
    }
    return s;
}

inline int word_length(const std::string& w) { return static_cast<int>(parse_word(w).size()); }

inline std::string render_table(const json& doc) {
    std::ostringstream os;
    std::size_t wx = 1, wy = 1;
    auto entries = poly_table_from_json(doc.at("pairs"));
    for (auto& e : entries) {
        wx = std::max(wx, e.x.size());
        wy = std::max(wy, e.y.size());
    }
    os << std::left << std::setw(static_cast<int>(wx)) << "x" << "  " << std::setw(static_cast<int>(wy)) << "y" << "  P\n";
    for (auto& e : entries)
        os << std::setw(static_cast<int>(wx)) << e.x << "  " << std::setw(static_cast<int>(wy)) << e.y << "  "
           << poly_text(e, word_length(e.x) - word_length(e.y)) << "\n";
    return os.str();
}

inline std::string render_character(const json& doc) {
    std::ostringstream os;
    FormalCharacter ch = character_from_json(doc.at("character"));
    os << "anchor " << ch.anchor().str() << ", cutoff " << ch.cutoff() << "\n";
    for (auto& mu : cone_elements(ch.rank(), ch.cutoff())) {
        long long c = ch[mu];
        if (c) os << "  " << Weight(mu).str() << "  " << (c > 0 ? "+" : "") << c << "\n";
    }
    return os.str();
}

inline std::string render_layers(const json& doc) {
    std::ostringstream os;
    os << "lambda0 " << weight_from_json(doc.at("lambda0")).str() << ", delta " << weight_from_json(doc.at("delta")).str() << "\n";
    for (auto& s : doc.at("spaces")) {
        os << "  " << Weight(s.at("mu").get<RootVec>()).str() << " ";
        for (auto& [j, L] : s.at("layers").items())
            os << " j=" << j << ": dim " << L.at("dim").get<int>() << " (" << L.at("p").get<int>() << "+, " << L.at("q").get<int>() << "-)";
        os << "\n";
    }
    return os.str();
}

inline std::string render_reports(const json& doc) {
    std::ostringstream os;
    for (auto& r : doc.at("reports")) {
        os << (r.at("passed").get<bool>() ? "PASS " : "FAIL ") << r.at("context").get<std::string>() << "\n";
        for (auto& c : r.at("checks")) {
            os << "  " << (c.at("passed").get<bool>() ? "pass " : "FAIL ") << c.at("name").get<std::string>() << " ("
               << c.at("cases").get<int>() << " cases)";
            if (c.contains("witness")) {
                auto& w = c.at("witness");
                os << " at lambda=" << w.at("lambda").get<std::string>() << " mu=" << w.at("mu").get<std::string>() << ": "
                   << w.at("detail").get<std::string>();
            }
            os << "\n";
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- cache

inline std::string content_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

/// Documents keyed by a hash of the request, stored under SKL_CACHE_DIR when set.
class DocumentCache {
public:
    DocumentCache() {
        if (const char* dir = std::getenv("SKL_CACHE_DIR"); dir && *dir) dir_ = dir;
    }
    json get_or_compute(const json& request, const std::function<json()>& compute) {
        if (dir_.empty()) return compute();
        std::string key = request.dump();
        auto path = std::filesystem::path(dir_) / (content_hash(key) + ".json");
        if (std::ifstream in(path); in) {
            try {
                json stored = json::parse(in);
                if (stored.at("request") == request) return stored.at("document");
            } catch (const json::exception&) {
            }
        }
        json doc = compute();
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        auto tmp = path;
        tmp += ".tmp";
        if (std::ofstream out(tmp); out) {
            out << json{{"request", request}, {"document", doc}}.dump() << "\n";
            out.close();
            std::filesystem::rename(tmp, path, ec);
        }
        return doc;
    }

private:
    std::string dir_;
};

// ---------------------------------------------------------------- computations

inline void parallel_for(int n, int threads, const std::function<void(int)>& f) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline AlgebraPtr make_algebra(const Config& c) { return LieAlgebra::make(build_root_datum(c.type, c.noncompact)); }

inline Weight config_lambda(const Config& c) {
    if (c.lambda.empty()) throw Error(ErrorKind::Config, "config has no lambda");
    return Weight(c.lambda);
}

inline int element_of(const ReflectionGroup& W, const std::vector<int>& word) {
    try {
        return W.from_word(word);
    } catch (const Error&) {
        throw Error(ErrorKind::IntegralityMismatch, "word " + word_text(word) + " does not name an element of the integral Weyl group");
    }
}

inline json kl_document(const std::string& type) {
    auto t = CartanType::parse(type);
    auto W = ReflectionGroup::full(build_root_datum(type, std::vector<bool>(t.rank(), false)));
    KLTable T(W);
    auto entries = poly_entries(*W, [&](int x, int y) { return T.kl(x, y); });
    return json{{"type", t.name()}, {"pairs", poly_table_json(entries)}};
}

inline json skl_document(const Config& c) {
    auto ctx = std::make_shared<SignedContext>(make_algebra(c), config_lambda(c), c.chamber);
    SignedKLTable T(ctx);
    auto entries = poly_entries(ctx->group(), [&](int x, int y) { return T.signed_kl(x, y); });
    json doc = config_json(c);
    doc.erase("x");
    doc.erase("cutoff");
    doc["pairs"] = poly_table_json(entries);
    return doc;
}

/// kind is one of char-m, char-l, sig-m, sig-l.
inline json character_document(const std::string& kind, const Config& c) {
    AlgebraPtr A = make_algebra(c);
    const RootDatum& d = A->d();
    Weight lambda = config_lambda(c);
    FormalCharacter ch;
    if (kind == "char-m" || kind == "sig-m") {
        auto W = integral_weyl_group(A->datum, lambda);
        Weight p = W->act(element_of(*W, c.x), lambda);
        if (kind == "char-m") {
            ch = ch_verma(d, *A->kostant, p, c.cutoff);
        } else {
            SignatureEngine E(A);
            Weight q = p;
            if (!is_regular_point(d, p)) q = alcove_entry_point(d, p, W->act(element_of(*W, c.chamber), -d.rho()));
            ch = FormalCharacter(p - d.rho(), c.cutoff, E.R_alcove(q, c.cutoff).terms());
        }
    } else {
        auto ctx = std::make_shared<SignedContext>(A, lambda, c.chamber);
        int x = ctx->element(c.x);
        if (kind == "char-l") {
            ch = ch_irreducible(*ctx, x, c.cutoff);
        } else {
            SignatureCharacters sc(ctx);
            ch = sc.ch_s_irreducible(x, c.cutoff);
        }
    }
    json doc = config_json(c);
    doc["kind"] = kind;
    doc["character"] = character_json(ch);
    return doc;
}

inline json jantzen_document(const Config& c, const std::vector<int>& delta_word) {
    AlgebraPtr A = make_algebra(c);
    const RootDatum& d = A->d();
    Weight lambda = config_lambda(c);
    auto W = integral_weyl_group(A->datum, lambda);
    Weight p = W->act(element_of(*W, c.x), lambda);
    Weight delta = W->act(element_of(*W, delta_word), -d.rho());
    json doc = config_json(c);
    doc.erase("chamber");
    doc["delta_chamber"] = word_text(delta_word);
    doc.update(layers_json(jantzen_layers(A, p, delta, c.cutoff)));
    return doc;
}

inline std::vector<Weight> random_regular_points(const RootDatum& d, std::mt19937& rng, int count, int max_pairing) {
    std::uniform_int_distribution<int> num(-7 * max_pairing, 7 * max_pairing);
    std::vector<Weight> out;
    while (static_cast<int>(out.size()) < count) {
        std::vector<Rational> p;
        for (int i = 0; i < d.rank(); ++i) p.push_back(Rational(num(rng)) / 7 + Rational(1) / 31);
        Weight w = d.from_pairings(p);
        if (is_regular_point(d, w)) out.push_back(w);
    }
    return out;
}

/// det(Gram)/product formula at three random regular points per type, every weight of height <= max_height.
inline json det_check_document(int max_height, int threads) {
    const std::vector<std::string> types = {"A1", "A2", "B2", "G2"};
    std::vector<json> per(types.size());
    parallel_for(static_cast<int>(types.size()), threads, [&](int i) {
        auto t = CartanType::parse(types[i]);
        AlgebraPtr A = LieAlgebra::make(build_root_datum(types[i], std::vector<bool>(t.rank(), false)));
        std::mt19937 rng(20260 + i);
        auto ls = random_regular_points(A->d(), rng, 3, 4);
        json lj = json::array();
        for (auto& l : ls) lj.push_back(weight_json(l));
        json cells = json::array();
        bool ok = true;
        for (auto& mu : cone_elements(t.rank(), max_height)) {
            if (height(mu) == 0) continue;
            auto c = determinant_check(A, mu, ls);
            json ratios = json::array();
            for (auto& r : c.ratios) ratios.push_back(to_string(r));
            cells.push_back(json{{"mu", mu}, {"ratios", ratios}, {"proportional", c.proportional()}});
            ok = ok && c.proportional();
        }
        per[i] = json{{"type", types[i]}, {"lambdas", lj}, {"cells", cells}, {"passed", ok}};
    });
    bool ok = std::all_of(per.begin(), per.end(), [](const json& j) { return j.at("passed").get<bool>(); });
    return json{{"max_height", max_height}, {"types", per}, {"passed", ok}};
}

inline std::string render_det(const json& doc) {
    std::ostringstream os;
    for (auto& t : doc.at("types")) {
        int n = 0, bad = 0;
        for (auto& c : t.at("cells")) {
            ++n;
            bad += !c.at("proportional").get<bool>();
        }
        os << (t.at("passed").get<bool>() ? "PASS " : "FAIL ") << t.at("type").get<std::string>() << ": " << n - bad << "/" << n
           << " weight spaces proportional\n";
    }
    return os.str();
}

struct SuiteContext {
    std::string type;
    std::vector<bool> noncompact;
    std::vector<Rational> pairings;  // coroot pairings of lambda
    std::string chamber;
    int cutoff;
};

inline std::vector<SuiteContext> oracle_suite(const std::string& name) {
    std::vector<SuiteContext> out;
    for (bool nc : {false, true})
        for (int n = 1; n <= (name == "full" ? 5 : 3); ++n) out.push_back({"A1", {nc}, {Rational(-n)}, "1", 6});
    out.push_back({"A2", {false, false}, {Rational(-1), Rational(-1)}, "e", 3});
    if (name == "quick") return out;
    if (name != "full") throw Error(ErrorKind::Config, "unknown suite '" + name + "' (expected quick or full)");
    out.push_back({"A2", {false, false}, {Rational(-1), Rational(-1)}, "1", 5});
    out.push_back({"A2", {false, false}, {Rational(-1), Rational(-1) / 2}, "e", 5});
    out.push_back({"C2", {true, false}, {Rational(-1), Rational(-1)}, "e", 5});
    out.push_back({"C2", {false, true}, {Rational(-1), Rational(-1)}, "e", 5});
    out.push_back({"C2", {true, false}, {Rational(-1), Rational(-1)}, "1", 5});
    out.push_back({"C2", {false, true}, {Rational(-1), Rational(-1)}, "1", 5});
    return out;
}

inline json oracle_document(const std::string& suite, int threads) {
    auto contexts = oracle_suite(suite);
    std::vector<json> reports(contexts.size());
    parallel_for(static_cast<int>(contexts.size()), threads, [&](int i) {
        const SuiteContext& s = contexts[i];
        AlgebraPtr A = LieAlgebra::make(build_root_datum(s.type, s.noncompact));
        auto ctx = std::make_shared<SignedContext>(A, A->d().from_pairings(s.pairings), parse_word(s.chamber));
        reports[i] = report_json(compare_all(ctx, s.cutoff));
    });
    bool ok = std::all_of(reports.begin(), reports.end(), [](const json& r) { return r.at("passed").get<bool>(); });
    return json{{"suite", suite}, {"reports", reports}, {"passed", ok}};
}

// ---------------------------------------------------------------- entry point

inline void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Signature characters and signed Kazhdan-Lusztig polynomials", "sigkl"};
    app.require_subcommand(1);
    std::string json_path, config_path, type, x_word, delta_word, suite = "quick";
    int threads = 1, cutoff = -1;
    app.add_option("--json", json_path, "write the structured document to PATH");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    auto* kl = app.add_subcommand("kl", "Kazhdan-Lusztig table of a Weyl group");
    kl->add_option("--type", type, "Cartan type, e.g. A2")->required();
    auto* skl = app.add_subcommand("skl", "signed Kazhdan-Lusztig table of a context");
    skl->add_option("--config", config_path)->required();
    std::vector<CLI::App*> chars;
    for (std::string name : {"char-m", "char-l", "sig-m", "sig-l"}) {
        auto* sc = app.add_subcommand(name, std::string(name[0] == 'c' ? "character" : "signature character") + " of " +
                                                (name.back() == 'm' ? "M(x lambda)" : "L(x lambda)"));
        sc->add_option("--config", config_path)->required();
        sc->add_option("--x", x_word, "reduced word of x (overrides config)");
        sc->add_option("--cutoff", cutoff, "height cutoff (overrides config)");
        chars.push_back(sc);
    }
    auto* jz = app.add_subcommand("jantzen", "Jantzen layers of M(x lambda) along delta = w(-rho)");
    jz->add_option("--config", config_path)->required();
    jz->add_option("--x", x_word);
    jz->add_option("--delta", delta_word, "reduced word of the chamber w")->required();
    jz->add_option("--cutoff", cutoff);
    auto* det = app.add_subcommand("det-check", "determinant formula proportionality");
    det->add_option("--cutoff", cutoff, "maximal weight height (default 4)");
    auto* orc = app.add_subcommand("oracle", "cross-check every formula against brute force");
    orc->add_option("--suite", suite)->check(CLI::IsMember({"quick", "full"}));
    for (auto* sub : {kl, skl, jz, det, orc}) sub->fallthrough();
    for (auto* sub : chars) sub->fallthrough();

    std::vector<char*> argv;
    std::string prog = "sigkl";
    argv.push_back(prog.data());
    for (auto& a : args) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Ok : ConfigError;
    }

    try {
        DocumentCache cache;
        json doc;
        std::string text;
        int code = Ok;
        auto load = [&] {
            Config c = load_config(config_path);
            if (!x_word.empty()) c.x = parse_word(x_word);
            if (cutoff >= 0) c.cutoff = cutoff;
            return c;
        };
        if (kl->parsed()) {
            doc = cache.get_or_compute(json{{"cmd", "kl"}, {"type", CartanType::parse(type).name()}}, [&] { return kl_document(type); });
            text = render_table(doc);
        } else if (skl->parsed()) {
            Config c = load();
            json req{{"cmd", "skl"}, {"config", config_json(c)}};
            doc = cache.get_or_compute(req, [&] { return skl_document(c); });
            text = render_table(doc);
        } else if (jz->parsed()) {
            Config c = load();
            auto dw = parse_word(delta_word);
            json req{{"cmd", "jantzen"}, {"config", config_json(c)}, {"delta", word_text(dw)}};
            doc = cache.get_or_compute(req, [&] { return jantzen_document(c, dw); });
            text = render_layers(doc);
        } else if (det->parsed()) {
            doc = det_check_document(cutoff >= 0 ? cutoff : 4, threads);
            text = render_det(doc);
            if (!doc.at("passed").get<bool>()) code = VerificationFailure;
        } else if (orc->parsed()) {
            doc = oracle_document(suite, threads);
            text = render_reports(doc);
            if (!doc.at("passed").get<bool>()) code = VerificationFailure;
        } else {
            for (auto* sc : chars) {
                if (!sc->parsed()) continue;
                Config c = load();
                std::string kind = sc->get_name();
                json req{{"cmd", kind}, {"config", config_json(c)}};
                doc = cache.get_or_compute(req, [&] { return character_document(kind, c); });
                text = render_character(doc);
            }
        }
        out << text;
        if (!json_path.empty()) write_json(json_path, doc);
        return code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Config:
            case ErrorKind::UnknownType:
            case ErrorKind::InconsistentMarking:
                return ConfigError;
            default:
                return ComputationError;
        }
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return ConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ComputationError;
    }
}

}  // namespace sigkl::cli
