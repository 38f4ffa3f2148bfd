#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace girgmotif {

using Vertex = std::uint32_t;

/// Immutable simple undirected graph in CSR form with sorted neighbour lists.
class Graph {
public:
    Graph() : offsets_(1, 0) {}

    Graph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges) : n_(n) {
        for (auto& [u, v] : edges) {
            if (u == v) throw ConfigError("self-loop at vertex " + std::to_string(u));
            if (u >= n || v >= n) throw ConfigError("edge endpoint out of range");
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        m_ = edges.size();
        offsets_.assign(n + 1, 0);
        for (auto [u, v] : edges) {
            ++offsets_[u + 1];
            ++offsets_[v + 1];
        }
        for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
        adj_.resize(2 * m_);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (auto [u, v] : edges) {
            adj_[fill[u]++] = v;
            adj_[fill[v]++] = u;
        }
        for (std::size_t i = 0; i < n; ++i) std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return m_; }
    std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }

    bool has_edge(Vertex u, Vertex v) const {
        if (degree(u) > degree(v)) std::swap(u, v);
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    std::vector<std::pair<Vertex, Vertex>> edge_list() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        out.reserve(m_);
        for (Vertex u = 0; u < n_; ++u)
            for (Vertex v : neighbors(u))
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    /// Subgraph induced on `keep` (renumbered 0..keep.size()-1 in the given order).
    Graph induced_subgraph(const std::vector<Vertex>& keep) const {
        std::vector<std::int64_t> index(n_, -1);
        for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<std::int64_t>(i);
        std::vector<std::pair<Vertex, Vertex>> e;
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (Vertex v : neighbors(keep[i]))
                if (index[v] > static_cast<std::int64_t>(i)) e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(index[v]));
        return {keep.size(), std::move(e)};
    }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> adj_;
};

} // namespace girgmotif
