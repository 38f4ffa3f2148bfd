#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "girg.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "pattern.hpp"

namespace girgmotif {

/// Weight/distance exponent windows of a class; beta is the row-major upper triangle.
struct VertexClassSpec {
    std::vector<double> alpha;
    std::vector<double> beta;
    double eps = 0.5;

    void validate(int k) const {
        if (static_cast<int>(alpha.size()) != k || static_cast<int>(beta.size()) != pair_count(k))
            throw ConfigError("class spec dimensions do not match the pattern");
        if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("class window eps must lie in (0,1)");
        for (double a : alpha)
            if (!std::isfinite(a)) throw ConfigError("class alpha must be finite");
        for (double b : beta)
            if (!std::isfinite(b)) throw ConfigError("class beta must be finite");
    }
};

/// Half-open window [eps n^zeta, n^zeta / eps).
struct Window {
    double lo, hi;
    Window(double n, double zeta, double eps) : lo(eps * std::pow(n, zeta)), hi(std::pow(n, zeta) / eps) {}
    bool contains(double x) const { return lo <= x && x < hi; }
};

/// `tuple[i]` is the host vertex playing pattern vertex i+1.
inline bool class_membership(const GirgGraph& g, const std::vector<Vertex>& tuple, const VertexClassSpec& spec) {
    const int k = static_cast<int>(tuple.size());
    spec.validate(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (tuple[i] == tuple[j]) throw ConfigError("class_membership: repeated vertex in tuple");
    const double n = static_cast<double>(g.params.n);
    for (int i = 0; i < k; ++i)
        if (!Window(n, spec.alpha[i], spec.eps).contains(g.weights[tuple[i]])) return false;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (!Window(n, spec.beta[pair_index(k, i + 1, j + 1)], spec.eps)
                     .contains(torus_distance(g.position(tuple[i]), g.position(tuple[j]))))
                return false;
    return true;
}

namespace detail {

inline void checked_add(std::uint64_t& acc, std::uint64_t x) {
    if (__builtin_add_overflow(acc, x, &acc)) throw NumericalError("subgraph count overflows 64 bits");
}

struct AllVertices {
    bool operator()(int, Vertex) const { return true; }
};
struct AllPairs {
    bool operator()(int, int, Vertex, Vertex) const { return true; }
};

/// Backtracking over a connected ordering of h. vf(i, v) restricts which host
/// vertices may play pattern vertex i (0-based); pf(i, j, u, v) restricts pairs.
template <class VertexFilter, class PairFilter>
class Embedder {
public:
    Embedder(const Graph& g, const Pattern& h, Variant mode, const VertexFilter& vf, const PairFilter& pf)
        : g_(g), mode_(mode), vf_(vf), pf_(pf), k_(h.k()) {
        if (!h.connected()) throw ConfigError("exact counting needs a connected pattern: " + h.to_string());
        if (static_cast<std::size_t>(k_) > g.n()) throw ConfigError("pattern has more vertices than the host");
        for (int v : connected_ordering(h)) order_.push_back(v - 1);
        back_adj_.resize(k_);
        back_non_.resize(k_);
        for (int t = 1; t < k_; ++t)
            for (int s = 0; s < t; ++s)
                (h.adj_mask(order_[t]) >> order_[s] & 1u ? back_adj_ : back_non_)[t].push_back(s);
    }

    /// Count with the first pattern vertex ranging over `first` in [begin, end).
    std::uint64_t count_range(const std::vector<Vertex>& first, std::size_t begin, std::size_t end) const {
        std::vector<Vertex> img(k_);
        std::uint64_t total = 0;
        for (std::size_t idx = begin; idx < end; ++idx) {
            img[0] = first[idx];
            if (!vf_(order_[0], img[0])) continue;
            if (k_ == 1)
                ++total;
            else
                extend(1, img, total);
        }
        return total;
    }

    int first_pattern_vertex() const { return order_[0]; }

private:
    void extend(int t, std::vector<Vertex>& img, std::uint64_t& total) const {
        const auto& back = back_adj_[t];
        int anchor = back[0];
        for (int s : back)
            if (g_.degree(img[s]) < g_.degree(img[anchor])) anchor = s;
        const int pv = order_[t];
        if constexpr (unfiltered) {
            // last vertex hangs off one earlier vertex only: count its free neighbours
            if (t + 1 == k_ && back.size() == 1 && (mode_ == Variant::General || back_non_[t].empty())) {
                std::uint64_t taken = 0;
                for (int s = 0; s < t; ++s) taken += s != anchor && g_.has_edge(img[s], img[anchor]);
                checked_add(total, g_.degree(img[anchor]) - taken);
                return;
            }
        }
        for (Vertex v : g_.neighbors(img[anchor])) {
            if (!accept(t, pv, v, anchor, img)) continue;
            if (t + 1 == k_) {
                checked_add(total, 1);
            } else {
                img[t] = v;
                extend(t + 1, img, total);
            }
        }
    }

    bool accept(int t, int pv, Vertex v, int anchor, const std::vector<Vertex>& img) const {
        for (int s = 0; s < t; ++s)
            if (img[s] == v) return false;
        if (!vf_(pv, v)) return false;
        for (int s : back_adj_[t])
            if (s != anchor && !g_.has_edge(img[s], v)) return false;
        if (mode_ == Variant::Induced)
            for (int s : back_non_[t])
                if (g_.has_edge(img[s], v)) return false;
        for (int s = 0; s < t; ++s)
            if (!pf_(order_[s], pv, img[s], v)) return false;
        return true;
    }

    static constexpr bool unfiltered = std::is_same_v<VertexFilter, AllVertices> && std::is_same_v<PairFilter, AllPairs>;

    const Graph& g_;
    Variant mode_;
    const VertexFilter& vf_;
    const PairFilter& pf_;
    int k_;
    std::vector<int> order_;
    std::vector<std::vector<int>> back_adj_, back_non_;
};

template <class VertexFilter, class PairFilter>
std::uint64_t count_filtered(const Graph& g, const Pattern& h, Variant mode, const VertexFilter& vf,
                             const PairFilter& pf, const std::vector<Vertex>& first, unsigned threads) {
    Embedder<VertexFilter, PairFilter> e(g, h, mode, vf, pf);
    std::vector<std::uint64_t> partial(std::max(1u, threads), 0);
    parallel_blocks(first.size(), threads, 256, [&](unsigned worker, std::size_t begin, std::size_t end) {
        checked_add(partial[worker], e.count_range(first, begin, end));
    });
    std::uint64_t total = 0;
    for (auto c : partial) checked_add(total, c);
    return total;
}

inline std::vector<Vertex> all_vertices(std::size_t n) {
    std::vector<Vertex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Vertex>(i);
    return v;
}

} // namespace detail

/// Ordered injective k-tuples realizing h (general) or exactly h (induced).
inline std::uint64_t count_ordered(const Graph& g, const Pattern& h, Variant mode, unsigned threads = 1) {
    detail::AllVertices vf;
    detail::AllPairs pf;
    return detail::count_filtered(g, h, mode, vf, pf, detail::all_vertices(g.n()), threads);
}

/// count_ordered restricted to tuples in the class described by `spec`.
inline std::uint64_t count_in_class(const GirgGraph& g, const Pattern& h, Variant mode, const VertexClassSpec& spec,
                                    unsigned threads = 1) {
    const int k = h.k();
    spec.validate(k);
    const double n = static_cast<double>(g.params.n);
    std::vector<std::vector<char>> allowed(k, std::vector<char>(g.params.n, 0));
    for (int i = 0; i < k; ++i) {
        Window w(n, spec.alpha[i], spec.eps);
        for (std::size_t v = 0; v < g.params.n; ++v) allowed[i][v] = w.contains(g.weights[v]);
    }
    std::vector<Window> dist;
    for (double b : spec.beta) dist.emplace_back(n, b, spec.eps);
    auto vf = [&](int i, Vertex v) { return allowed[i][v] != 0; };
    auto pf = [&](int i, int j, Vertex u, Vertex v) {
        return dist[pair_index(k, i + 1, j + 1)].contains(torus_distance(g.position(u), g.position(v)));
    };
    // only candidates of the first pattern vertex in the ordering seed the search
    const int first_pv = connected_ordering(h)[0] - 1;
    std::vector<Vertex> first;
    for (std::size_t v = 0; v < g.params.n; ++v)
        if (allowed[first_pv][v]) first.push_back(static_cast<Vertex>(v));
    return detail::count_filtered(g.graph, h, mode, vf, pf, first, threads);
}

enum class FilterBy { Degree, Weight };

/// Keeps vertices whose degree (or weight) lies in a window [eps n^a, n^a/eps)
/// for some a in alpha_star, then counts exactly on the induced subgraph.
inline std::uint64_t approx_count_degree_filtered(const Graph& g, const std::vector<double>& node_values, const Pattern& h,
                                                  Variant mode, const std::vector<double>& alpha_star, double eps,
                                                  unsigned threads = 1) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0,1)");
    if (!h.connected()) throw ConfigError("exact counting needs a connected pattern: " + h.to_string());
    const double n = static_cast<double>(g.n());
    std::vector<Window> windows;
    for (double a : alpha_star) windows.emplace_back(n, a, eps);
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.n(); ++v)
        for (const auto& w : windows)
            if (w.contains(node_values[v])) {
                keep.push_back(v);
                break;
            }
    if (keep.size() < static_cast<std::size_t>(h.k())) return 0;
    return count_ordered(g.induced_subgraph(keep), h, mode, threads);
}

inline std::uint64_t approx_count_degree_filtered(const Graph& g, const Pattern& h, Variant mode,
                                                  const std::vector<double>& alpha_star, double eps, unsigned threads = 1) {
    std::vector<double> deg(g.n());
    for (Vertex v = 0; v < g.n(); ++v) deg[v] = static_cast<double>(g.degree(v));
    return approx_count_degree_filtered(g, deg, h, mode, alpha_star, eps, threads);
}

inline std::uint64_t approx_count_filtered(const GirgGraph& g, const Pattern& h, Variant mode,
                                           const std::vector<double>& alpha_star, double eps, FilterBy by,
                                           unsigned threads = 1) {
    if (by == FilterBy::Degree) return approx_count_degree_filtered(g.graph, h, mode, alpha_star, eps, threads);
    return approx_count_degree_filtered(g.graph, g.weights, h, mode, alpha_star, eps, threads);
}

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_count_csv_header(std::ostream& os) { os << "n,seed,pattern,mode,count,elapsed_ms\n"; }

inline void write_count_csv_row(std::ostream& os, std::size_t n, std::uint64_t seed, const Pattern& h, Variant mode,
                                std::uint64_t count, double elapsed_ms) {
    os << n << ',' << seed << ',' << csv_quote(h.to_string()) << ',' << to_string(mode) << ',' << count << ','
       << elapsed_ms << '\n';
}

} // namespace girgmotif
