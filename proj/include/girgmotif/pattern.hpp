#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "errors.hpp"

namespace girgmotif {

/// General counts/optimizes copies containing H; Induced requires exactly H.
enum class Variant { General, Induced };

inline const char* to_string(Variant v) { return v == Variant::General ? "general" : "induced"; }

inline Variant parse_variant(std::string_view s) {
    if (s == "general" || s == "sub") return Variant::General;
    if (s == "induced" || s == "ind") return Variant::Induced;
    throw ConfigError("mode must be 'general' or 'induced', got '" + std::string(s) + "'");
}

/// Index of the pair (i,j), 1 <= i < j <= k, in the row-major upper triangle
/// (1,2),(1,3),...,(1,k),(2,3),...
inline int pair_index(int k, int i, int j) {
    if (i > j) std::swap(i, j);
    return (i - 1) * k - (i - 1) * i / 2 + (j - i - 1);
}

inline int pair_count(int k) { return k * (k - 1) / 2; }

/// Small simple graph on vertices 1..k. Edges are stored sorted with i < j;
/// the bitmask adjacency is 0-based.
class Pattern {
public:
    static constexpr int max_k = 32;

    Pattern() = default;

    Pattern(int k, std::vector<std::pair<int, int>> edges) : k_(k) {
        if (k < 1 || k > max_k) throw ConfigError("pattern size must be in [1, 32], got " + std::to_string(k));
        adj_.assign(k, 0);
        for (auto [i, j] : edges) {
            if (i == j) throw ConfigError("self-loop at vertex " + std::to_string(i));
            if (i > j) std::swap(i, j);
            if (i < 1 || j > k) throw ConfigError("edge endpoint out of range: " + std::to_string(i) + "-" + std::to_string(j));
            if (adj_[i - 1] >> (j - 1) & 1u)
                throw ConfigError("duplicate edge " + std::to_string(i) + "-" + std::to_string(j));
            adj_[i - 1] |= 1u << (j - 1);
            adj_[j - 1] |= 1u << (i - 1);
            edges_.emplace_back(i, j);
        }
        std::sort(edges_.begin(), edges_.end());
    }

    int k() const noexcept { return k_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

    bool has_edge(int i, int j) const { return adj_[i - 1] >> (j - 1) & 1u; }
    int degree(int i) const { return std::popcount(adj_[i - 1]); }

    /// Neighbour bitmask of the 0-based vertex v.
    std::uint32_t adj_mask(int v) const { return adj_[v]; }

    bool connected() const {
        if (k_ == 0) return false;
        std::uint32_t seen = 1u, frontier = 1u;
        while (frontier) {
            std::uint32_t next = 0;
            for (int v = 0; v < k_; ++v)
                if (frontier >> v & 1u) next |= adj_[v];
            frontier = next & ~seen;
            seen |= next;
        }
        return std::popcount(seen) == k_;
    }

    bool is_tree() const { return connected() && edge_count() == k_ - 1; }

    /// "k=<k>; edges=i-j,..." with 1-based labels.
    std::string to_string() const {
        std::string s = "k=" + std::to_string(k_) + "; edges=";
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (e) s += ',';
            s += std::to_string(edges_[e].first) + "-" + std::to_string(edges_[e].second);
        }
        return s;
    }

    friend bool operator==(const Pattern& a, const Pattern& b) { return a.k_ == b.k_ && a.edges_ == b.edges_; }

private:
    int k_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::uint32_t> adj_;
};

namespace detail {

class PatternParser {
public:
    explicit PatternParser(std::string_view text) : s_(text) {}

    Pattern parse() {
        skip_ws();
        expect_word("k");
        expect('=');
        std::size_t kpos = pos_;
        long k = number();
        if (k < 1 || k > Pattern::max_k) throw PatternParseError("pattern size out of range", kpos);
        skip_ws();
        expect(';');
        skip_ws();
        expect_word("edges");
        expect('=');
        std::vector<std::pair<int, int>> edges;
        std::set<std::pair<int, int>> seen;
        skip_ws();
        if (pos_ < s_.size()) {
            for (;;) {
                std::size_t epos = pos_;
                long i = number();
                skip_ws();
                expect('-');
                long j = number();
                if (i == j) throw PatternParseError("self-loop " + std::to_string(i) + "-" + std::to_string(j), epos);
                if (i < 1 || j < 1 || i > k || j > k)
                    throw PatternParseError("endpoint out of range in " + std::to_string(i) + "-" + std::to_string(j), epos);
                std::pair<int, int> key{static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j))};
                if (!seen.insert(key).second)
                    throw PatternParseError("duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second), epos);
                edges.push_back(key);
                skip_ws();
                if (pos_ == s_.size()) break;
                expect(',');
            }
        }
        return Pattern(static_cast<int>(k), std::move(edges));
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw PatternParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    void expect_word(std::string_view w) {
        if (s_.substr(pos_, w.size()) != w) throw PatternParseError("expected '" + std::string(w) + "'", pos_);
        pos_ += w.size();
    }

    long number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 6) throw PatternParseError("expected integer", start);
        return std::stol(std::string(s_.substr(start, pos_ - start)));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Pattern parse_pattern(std::string_view text) { return detail::PatternParser(text).parse(); }

inline Pattern make_clique(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) e.emplace_back(i, j);
    return {k, e};
}

inline Pattern make_path(int k) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < k; ++i) e.emplace_back(i, i + 1);
    return {k, e};
}

inline Pattern make_cycle(int k) {
    if (k < 3) throw ConfigError("cycle needs at least 3 vertices");
    auto e = make_path(k).edges();
    e.emplace_back(1, k);
    return {k, e};
}

/// Star with `leaves` leaves 1..leaves and the centre last.
inline Pattern make_star(int leaves) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= leaves; ++i) e.emplace_back(i, leaves + 1);
    return {leaves + 1, e};
}

inline Pattern make_paw() { return {4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}}}; }
inline Pattern make_diamond() { return {4, {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}}; }

inline Pattern pattern_from_json(const nlohmann::json& j);

/// Pattern from a name (edge, triangle, paw, diamond, K<k>, P<k>, C<k>, star<leaves>),
/// the text grammar, or the JSON form.

inline Pattern pattern_from_spec(std::string_view spec) {
    std::string s(spec);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    if (s.rfind("k=", 0) == 0 || s.rfind("k =", 0) == 0) return parse_pattern(s);
    if (!s.empty() && s.front() == '{') {
        try {
            return pattern_from_json(nlohmann::json::parse(s));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad pattern JSON: ") + e.what());
        }
    }
    auto suffix = [&](std::size_t from) -> int {
        if (from >= s.size() || !std::all_of(s.begin() + from, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ConfigError("unknown pattern name '" + s + "'");
        return std::stoi(s.substr(from));
    };
    if (s == "edge") return make_clique(2);
    if (s == "triangle") return make_clique(3);
    if (s == "paw") return make_paw();
    if (s == "diamond") return make_diamond();
    if (s.rfind("star", 0) == 0) return make_star(suffix(4));
    if (s.size() > 1 && s[0] == 'K') return make_clique(suffix(1));
    if (s.size() > 1 && s[0] == 'P') return make_path(suffix(1));
    if (s.size() > 1 && s[0] == 'C') return make_cycle(suffix(1));
    throw ConfigError("unknown pattern name '" + s + "'");
}

inline nlohmann::json to_json(const Pattern& p) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [i, j] : p.edges()) edges.push_back({i, j});
    return {{"k", p.k()}, {"edges", edges}};
}

inline Pattern pattern_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("edges")) throw ConfigError("pattern JSON needs 'k' and 'edges'");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ConfigError("pattern JSON edge must be [i, j]");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return {j.at("k").get<int>(), edges};
}

inline bool is_hamiltonian_pattern(const Pattern& p) {
    const int k = p.k();
    if (k > 10) throw ConfigError("hamiltonicity check limited to k <= 10");
    if (k < 3) return false;
    for (int v = 0; v < k; ++v)
        if (std::popcount(p.adj_mask(v)) < 2) return false;
    const std::uint32_t all = (1u << k) - 1;
    // paths from vertex 0
    auto dfs = [&](auto&& self, int v, std::uint32_t used) -> bool {
        if (used == all) return p.adj_mask(v) & 1u;
        for (std::uint32_t m = p.adj_mask(v) & ~used; m; m &= m - 1) {
            int u = std::countr_zero(m);
            if (self(self, u, used | 1u << u)) return true;
        }
        return false;
    };
    return dfs(dfs, 0, 1u);
}

/// Applies the 0-based permutation perm (vertex v -> perm[v]) to p.
inline Pattern relabel(const Pattern& p, const std::vector<int>& perm) {
    std::vector<std::pair<int, int>> e;
    for (auto [i, j] : p.edges()) e.emplace_back(perm[i - 1] + 1, perm[j - 1] + 1);
    return {p.k(), e};
}

inline std::uint64_t automorphism_count(const Pattern& p) {
    const int k = p.k();
    if (k > 8) throw ConfigError("automorphism count limited to k <= 8");
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (int v = 0; v < k && ok; ++v) {
            std::uint32_t image = 0;
            for (std::uint32_t m = p.adj_mask(v); m; m &= m - 1) image |= 1u << perm[std::countr_zero(m)];
            ok = image == p.adj_mask(perm[v]);
        }
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

/// Vertex order (1-based) in which every vertex after the first is adjacent to an
/// earlier one. Greedy: most links into the placed set, then highest degree.
inline std::vector<int> connected_ordering(const Pattern& p) {
    if (!p.connected()) throw ConfigError("pattern is disconnected: " + p.to_string());
    const int k = p.k();
    std::vector<int> order;
    std::uint32_t placed = 0;
    for (int step = 0; step < k; ++step) {
        int best = -1, best_links = -1, best_deg = -1;
        for (int v = 0; v < k; ++v) {
            if (placed >> v & 1u) continue;
            int links = std::popcount(p.adj_mask(v) & placed);
            if (step > 0 && links == 0) continue;
            int deg = std::popcount(p.adj_mask(v));
            if (links > best_links || (links == best_links && deg > best_deg)) {
                best = v;
                best_links = links;
                best_deg = deg;
            }
        }
        placed |= 1u << best;
        order.push_back(best + 1);
    }
    return order;
}

inline bool is_connected_ordering(const Pattern& p, const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != p.k()) return false;
    std::uint32_t placed = 0;
    for (std::size_t t = 0; t < order.size(); ++t) {
        int v = order[t] - 1;
        if (v < 0 || v >= p.k() || (placed >> v & 1u)) return false;
        if (t > 0 && !(p.adj_mask(v) & placed)) return false;
        placed |= 1u << v;
    }
    return true;
}

namespace detail {

// Bit for pair (i,j) with (1,2) as the most significant position.
inline std::uint32_t pair_bit(int k, int i, int j) {
    return 1u << (pair_count(k) - 1 - pair_index(k, i + 1, j + 1));
}

inline std::uint32_t code_under(int k, const std::vector<std::uint32_t>& adj, const std::vector<int>& perm) {
    std::uint32_t code = 0;
    for (int i = 0; i < k; ++i)
        for (std::uint32_t m = adj[i]; m; m &= m - 1) {
            int j = std::countr_zero(m);
            if (i < j) code |= pair_bit(k, perm[i], perm[j]);
        }
    return code;
}

} // namespace detail

/// Smallest adjacency code over all relabelings.
inline std::uint32_t canonical_code(const Pattern& p) {
    const int k = p.k();
    if (k > 8) throw ConfigError("canonical code limited to k <= 8");
    std::vector<std::uint32_t> adj(k);
    for (int v = 0; v < k; ++v) adj[v] = p.adj_mask(v);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint32_t best = ~0u;
    do best = std::min(best, detail::code_under(k, adj, perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline Pattern pattern_from_code(int k, std::uint32_t code) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (code & detail::pair_bit(k, i, j)) e.emplace_back(i + 1, j + 1);
    return {k, e};
}

/// One representative per isomorphism class (the labeling with the smallest
/// code), ordered by edge count, then code.
inline std::vector<Pattern> enumerate_patterns(int k, bool connected_only) {
    if (k < 1 || k > 6) throw ConfigError("pattern enumeration limited to 1 <= k <= 6");
    const int m = pair_count(k);
    std::vector<std::pair<int, std::uint32_t>> keys;
    std::vector<int> perm(k);
    for (std::uint32_t code = 0; code < (1u << m); ++code) {
        Pattern p = pattern_from_code(k, code);
        std::vector<std::uint32_t> adj(k);
        for (int v = 0; v < k; ++v) adj[v] = p.adj_mask(v);
        std::iota(perm.begin(), perm.end(), 0);
        bool minimal = true;
        while (minimal && std::next_permutation(perm.begin(), perm.end()))
            minimal = detail::code_under(k, adj, perm) >= code;
        if (!minimal) continue;
        if (connected_only && !p.connected()) continue;
        keys.emplace_back(p.edge_count(), code);
    }
    std::sort(keys.begin(), keys.end());
    std::vector<Pattern> out;
    for (auto [e, code] : keys) out.push_back(pattern_from_code(k, code));
    return out;
}

} // namespace girgmotif
