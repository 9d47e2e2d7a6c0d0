#pragma once

#include <sigkl/rootcore.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sigkl {

/// Value view of a group element.
struct WeylElement {
    std::vector<int> reduced_word;  // generator indices, lex-least
    std::vector<int> matrix;        // rank x rank, row-major, acting on simple-root coordinates
    int length = 0;
};

/// Finite reflection group generated by reflections in a simple system of a root subsystem.
/// Elements are stored by index; index 0 is the identity.
class ReflectionGroup {
public:
    static constexpr std::size_t kMaxOrder = 5000;

    ReflectionGroup(DatumPtr datum, std::vector<int> simple_roots)
        : d_(std::move(datum)), gens_(std::move(simple_roots)) {
        r_ = d_->rank();
        build_subsystem();
        enumerate();
    }

    /// Full Weyl group of the datum.
    static std::shared_ptr<const ReflectionGroup> full(DatumPtr d) {
        std::vector<int> g;
        for (int i = 0; i < d->rank(); ++i) g.push_back(d->simple_root_index(i));
        return std::make_shared<const ReflectionGroup>(d, g);
    }

    const RootDatum& datum() const { return *d_; }
    DatumPtr datum_ptr() const { return d_; }
    int size() const { return static_cast<int>(mats_.size()); }
    int num_generators() const { return static_cast<int>(gens_.size()); }
    /// Positive root (datum index) of generator i.
    int generator_root(int i) const { return gens_[i]; }
    /// Positive roots of the subsystem (datum indices).
    const std::vector<int>& subsystem_roots() const { return sub_; }

    int identity() const { return 0; }
    int length(int w) const { return len_[w]; }
    const std::vector<int>& word(int w) const { return words_[w]; }
    const std::vector<int>& matrix(int w) const { return mats_[w]; }
    int mul_simple_right(int w, int i) const { return right_[w][i]; }
    int mul_simple_left(int i, int w) const { return left_[w][i]; }
    bool right_descent(int w, int i) const { return len_[right_[w][i]] < len_[w]; }
    bool left_descent(int w, int i) const { return len_[left_[w][i]] < len_[w]; }
    int longest() const { return longest_; }

    int multiply(int a, int b) const {
        int w = a;
        for (int i : words_[b]) w = right_[w][i];
        return w;
    }
    int inverse(int a) const {
        int w = 0;
        for (int i : words_[a]) w = left_[w][i];
        return w;
    }
    int from_word(const std::vector<int>& word) const {
        int w = 0;
        for (int i : word) {
            if (i < 0 || i >= num_generators())
                throw Error(ErrorKind::Config, "generator index " + std::to_string(i + 1) + " out of range");
            w = right_[w][i];
        }
        return w;
    }
    /// Element with the given action matrix, or -1.
    int find(const std::vector<int>& m) const {
        auto it = index_.find(m);
        return it == index_.end() ? -1 : it->second;
    }

    WeylElement element(int w) const { return WeylElement{words_[w], mats_[w], len_[w]}; }

    Weight act(int w, const Weight& mu) const {
        Weight out(r_);
        const auto& m = mats_[w];
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j)
                if (m[i * r_ + j] != 0) out[i] += mu[j] * m[i * r_ + j];
        return out;
    }
    RootVec act(int w, const RootVec& mu) const {
        RootVec out(r_, 0);
        const auto& m = mats_[w];
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) out[i] += m[i * r_ + j] * mu[j];
        return out;
    }

    /// Bruhat order x <= y.
    bool bruhat_leq(int x, int y) const {
        if (bruhat_.empty()) bruhat_.assign(static_cast<std::size_t>(size()) * size(), -1);
        return leq(x, y);
    }

    std::string word_string(int w) const {
        std::string s;
        for (std::size_t k = 0; k < words_[w].size(); ++k) s += (k ? "," : "") + std::to_string(words_[w][k] + 1);
        return s.empty() ? "e" : s;
    }

private:
    void build_subsystem() {
        // Positive roots of the subsystem: the W'-orbit of the generators intersected with positive roots.
        std::vector<int> seen(d_->num_positive(), 0);
        std::vector<RootVec> queue;
        for (int g : gens_) {
            if (!seen[g]) {
                seen[g] = 1;
                queue.push_back(d_->root(g));
            }
        }
        for (std::size_t k = 0; k < queue.size(); ++k)
            for (int g : gens_) {
                RootVec v = d_->reflect(g, queue[k]);
                RootVec pos = is_nonnegative(v) ? v : (-1) * v;
                int idx = d_->root_index(pos);
                if (idx >= 0 && !seen[idx]) {
                    seen[idx] = 1;
                    queue.push_back(pos);
                }
            }
        for (int a = 0; a < d_->num_positive(); ++a)
            if (seen[a]) sub_.push_back(a);
    }

    std::vector<int> reflection_matrix(int root) const {
        std::vector<int> m(r_ * r_, 0);
        for (int j = 0; j < r_; ++j) {
            RootVec e(r_, 0);
            e[j] = 1;
            RootVec img = d_->reflect(root, e);
            for (int i = 0; i < r_; ++i) m[i * r_ + j] = img[i];
        }
        return m;
    }

    std::vector<int> matmul(const std::vector<int>& a, const std::vector<int>& b) const {
        std::vector<int> c(r_ * r_, 0);
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < r_; ++k) {
                int x = a[i * r_ + k];
                if (!x) continue;
                for (int j = 0; j < r_; ++j) c[i * r_ + j] += x * b[k * r_ + j];
            }
        return c;
    }

    int count_length(const std::vector<int>& m) const {
        int l = 0;
        for (int a : sub_) {
            const RootVec& b = d_->root(a);
            int h = 0;
            for (int i = 0; i < r_; ++i)
                for (int j = 0; j < r_; ++j) h += m[i * r_ + j] * b[j];
            // Images of roots are roots: the sign of the height decides positivity.
            if (h < 0) ++l;
        }
        return l;
    }

    void enumerate() {
        const int n = num_generators();
        std::vector<std::vector<int>> S;
        for (int g : gens_) S.push_back(reflection_matrix(g));
        std::vector<int> id(r_ * r_, 0);
        for (int i = 0; i < r_; ++i) id[i * r_ + i] = 1;
        mats_.push_back(id);
        index_[id] = 0;
        for (std::size_t k = 0; k < mats_.size(); ++k) {
            for (int i = 0; i < n; ++i) {
                auto m = matmul(mats_[k], S[i]);
                if (!index_.count(m)) {
                    if (mats_.size() >= kMaxOrder) throw Error(ErrorKind::GroupTooLarge, "reflection group exceeds size limit");
                    index_[m] = static_cast<int>(mats_.size());
                    mats_.push_back(m);
                }
            }
        }
        const int N = size();
        len_.resize(N);
        for (int w = 0; w < N; ++w) len_[w] = count_length(mats_[w]);
        // Re-sort by length so that index order refines length; keep identity first.
        std::vector<int> order(N);
        for (int w = 0; w < N; ++w) order[w] = w;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return len_[a] < len_[b]; });
        std::vector<std::vector<int>> m2;
        std::vector<int> l2;
        for (int w : order) {
            m2.push_back(mats_[w]);
            l2.push_back(len_[w]);
        }
        mats_ = std::move(m2);
        len_ = std::move(l2);
        index_.clear();
        for (int w = 0; w < N; ++w) index_[mats_[w]] = w;
        right_.assign(N, std::vector<int>(n));
        left_.assign(N, std::vector<int>(n));
        for (int w = 0; w < N; ++w)
            for (int i = 0; i < n; ++i) {
                right_[w][i] = index_.at(matmul(mats_[w], S[i]));
                left_[w][i] = index_.at(matmul(S[i], mats_[w]));
            }
        words_.assign(N, {});
        longest_ = 0;
        for (int w = 1; w < N; ++w) {
            int first = -1;
            for (int i = 0; i < n; ++i)
                if (len_[left_[w][i]] < len_[w]) {
                    first = i;
                    break;
                }
            words_[w].push_back(first);
            const auto& rest = words_[left_[w][first]];
            words_[w].insert(words_[w].end(), rest.begin(), rest.end());
            if (len_[w] > len_[longest_]) longest_ = w;
        }
    }

    bool leq(int x, int y) const {
        if (x == y) return true;
        if (len_[x] >= len_[y]) return false;
        if (x == 0) return true;
        auto& memo = bruhat_[static_cast<std::size_t>(x) * size() + y];
        if (memo >= 0) return memo;
        int s = words_[y][0];  // a left descent of y
        int sy = left_[y][s];
        int sx = left_[x][s];
        bool r = (len_[sx] < len_[x]) ? leq(sx, sy) : leq(x, sy);
        memo = r ? 1 : 0;
        return r;
    }

    DatumPtr d_;
    std::vector<int> gens_;
    int r_ = 0;
    std::vector<int> sub_;
    std::vector<std::vector<int>> mats_;
    std::map<std::vector<int>, int> index_;
    std::vector<int> len_;
    std::vector<std::vector<int>> right_, left_, words_;
    int longest_ = 0;
    mutable std::vector<signed char> bruhat_;
};

using GroupPtr = std::shared_ptr<const ReflectionGroup>;

/// Simple roots (datum indices, in root order) of the integral root subsystem of lambda.
inline std::vector<int> integral_simple_roots(const RootDatum& d, const Weight& lambda) {
    std::vector<int> integral;
    for (int a = 0; a < d.num_positive(); ++a)
        if (is_integer(d.pairing(lambda, a))) integral.push_back(a);
    std::vector<int> simple;
    for (int b : integral) {
        int sent_negative = 0;
        for (int a : integral) {
            RootVec img = d.reflect(b, d.root(a));
            if (!is_nonnegative(img)) ++sent_negative;
        }
        if (sent_negative == 1) simple.push_back(b);
    }
    return simple;
}

inline GroupPtr integral_weyl_group(DatumPtr d, const Weight& lambda) {
    return std::make_shared<const ReflectionGroup>(d, integral_simple_roots(*d, lambda));
}

/// Parse "1,2,1", "121", "s1s2s1" or "e" into 0-based generator indices.
inline std::vector<int> parse_word(const std::string& text) {
    std::vector<int> w;
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != 's' && c != 'S') s.push_back(c);
    if (s.empty() || s == "e") return w;
    if (s.find(',') != std::string::npos) {
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t next = s.find(',', pos);
            if (next == std::string::npos) next = s.size();
            std::string tok = s.substr(pos, next - pos);
            if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
                throw Error(ErrorKind::Config, "malformed word '" + text + "'");
            w.push_back(std::stoi(tok) - 1);
            pos = next + 1;
        }
    } else {
        for (char c : s) {
            if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0') throw Error(ErrorKind::Config, "malformed word '" + text + "'");
            w.push_back(c - '1');
        }
    }
    return w;
}

}  // namespace sigkl
