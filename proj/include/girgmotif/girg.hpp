#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace girgmotif {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct GirgParams {
    std::size_t n = 1000;
    int d = 1;
    double tau = 2.5;
    double gamma = 2.0; ///< may be `infinity` for the threshold model
    double w0 = 1.0;
    std::uint64_t seed = 1;

    /// Analytic mean of the Pareto weight law.
    double mu() const { return (tau - 1.0) / (tau - 2.0); }

    void validate() const {
        if (n < 2) throw ConfigError("n must be at least 2");
        if (d < 1) throw ConfigError("d must be at least 1");
        if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3), got " + std::to_string(tau));
        if (!(gamma > 1.0)) throw ConfigError("gamma must be > 1 or inf, got " + std::to_string(gamma));
        if (w0 != 1.0) throw ConfigError("only w0 = 1 is supported");
    }
};

struct GirgGraph {
    GirgParams params;
    std::vector<double> weights;
    std::vector<double> positions; ///< n*d, row-major
    double mu = 0.0;
    Graph graph;

    std::span<const double> position(std::size_t v) const {
        const auto d = static_cast<std::size_t>(params.d);
        return {positions.data() + v * d, d};
    }
};

struct IrgGraph {
    GirgParams params;
    std::vector<double> weights;
    double mu = 0.0;
    Graph graph;
};

/// Inverse transform of P(W > x) = x^{1-tau}; u in (0,1].
inline double pareto_inverse(double u, double tau) { return std::pow(u, -1.0 / (tau - 1.0)); }

template <class Rng>
std::vector<double> sample_weights(std::size_t n, double tau, Rng& rng) {
    if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3)");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> w(n);
    for (auto& x : w) x = pareto_inverse(1.0 - unif(rng), tau);
    return w;
}

template <class Rng>
std::vector<double> sample_positions(std::size_t n, int d, Rng& rng) {
    if (d < 1) throw ConfigError("d must be at least 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(n * static_cast<std::size_t>(d));
    for (auto& c : x) c = unif(rng);
    return x;
}

inline double torus_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("torus_distance: dimension mismatch");
    double r = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double a = std::abs(x[j] - y[j]);
        r = std::max(r, std::min(a, 1.0 - a));
    }
    return r;
}

/// Connection probability of the GIRG kernel with the analytic mu.
inline double edge_probability(double wu, double wv, double dist, const GirgParams& p) {
    if (wu < 0 || wv < 0 || dist < 0) throw ConfigError("edge_probability: negative input");
    const double scale = static_cast<double>(p.n) * p.mu() * std::pow(dist, p.d);
    const double prod = wu * wv;
    if (std::isinf(p.gamma)) return prod > scale ? 1.0 : 0.0;
    if (prod >= scale) return 1.0;
    return std::pow(prod / scale, p.gamma);
}

namespace detail {
inline constexpr std::uint64_t weight_stream = 1, position_stream = 2, edge_stream = 3, irg_stream = 4;
}

/// Per-pair sampler shared by the naive loop and tests. Returns whether {u,v} is an edge.
class GirgPairRule {
public:
    GirgPairRule(const GirgParams& p, std::span<const double> w, std::span<const double> x)
        : p_(p), w_(w), x_(x), scale_(static_cast<double>(p.n) * p.mu()),
          seed_(derive_seed(p.seed, detail::edge_stream)), threshold_(std::isinf(p.gamma)) {}

    bool operator()(std::size_t u, std::size_t v) const {
        const std::size_t d = static_cast<std::size_t>(p_.d);
        double r = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double a = std::abs(x_[u * d + j] - x_[v * d + j]);
            r = std::max(r, std::min(a, 1.0 - a));
        }
        double rd = r;
        for (std::size_t j = 1; j < d; ++j) rd *= r;
        const double prod = w_[u] * w_[v];
        const double denom = scale_ * rd;
        if (threshold_) return prod > denom;
        if (prod >= denom) return true;
        const double x = prod / denom;
        const double U = pair_uniform(seed_, u, v);
        if (U >= x) return false; // x^gamma < x
        return U < std::pow(x, p_.gamma);
    }

private:
    const GirgParams& p_;
    std::span<const double> w_, x_;
    double scale_;
    std::uint64_t seed_;
    bool threshold_;
};

/// GIRG on the given weights; positions and edges use the seed's streams.
inline GirgGraph sample_girg_with_weights(const GirgParams& params, std::vector<double> weights, unsigned threads = 1) {
    params.validate();
    if (weights.size() != params.n) throw ConfigError("weight vector length differs from n");
    GirgGraph g;
    g.params = params;
    g.mu = params.mu();
    g.weights = std::move(weights);
    std::mt19937_64 xrng(derive_seed(params.seed, detail::position_stream));
    g.positions = sample_positions(params.n, params.d, xrng);
    GirgPairRule rule(params, g.weights, g.positions);
    const std::size_t n = params.n;
    std::vector<std::vector<std::pair<Vertex, Vertex>>> parts(std::max(1u, threads));
    parallel_blocks(n, threads, 64, [&](unsigned worker, std::size_t begin, std::size_t end) {
        auto& out = parts[worker];
        for (std::size_t u = begin; u < end; ++u)
            for (std::size_t v = u + 1; v < n; ++v)
                if (rule(u, v)) out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    });
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto& part : parts) edges.insert(edges.end(), part.begin(), part.end());
    g.graph = Graph(n, std::move(edges));
    return g;
}

/// O(n^2) sampler; the result does not depend on `threads`.
inline GirgGraph sample_girg(const GirgParams& params, unsigned threads = 1) {
    params.validate();
    std::mt19937_64 wrng(derive_seed(params.seed, detail::weight_stream));
    return sample_girg_with_weights(params, sample_weights(params.n, params.tau, wrng), threads);
}

/// Rank-one inhomogeneous random graph on the given weights.
inline IrgGraph sample_irg_with_weights(const GirgParams& params, std::vector<double> weights, unsigned threads = 1) {
    params.validate();
    if (weights.size() != params.n) throw ConfigError("weight vector length differs from n");
    IrgGraph g;
    g.params = params;
    g.mu = params.mu();
    g.weights = std::move(weights);
    const double scale = g.mu * static_cast<double>(params.n);
    const std::uint64_t seed = derive_seed(params.seed, detail::irg_stream);
    const std::size_t n = params.n;
    std::vector<std::vector<std::pair<Vertex, Vertex>>> parts(std::max(1u, threads));
    parallel_blocks(n, threads, 64, [&](unsigned worker, std::size_t begin, std::size_t end) {
        auto& out = parts[worker];
        for (std::size_t u = begin; u < end; ++u)
            for (std::size_t v = u + 1; v < n; ++v) {
                const double p = g.weights[u] * g.weights[v] / scale;
                if (p >= 1.0 || pair_uniform(seed, u, v) < p)
                    out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
            }
    });
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto& part : parts) edges.insert(edges.end(), part.begin(), part.end());
    g.graph = Graph(n, std::move(edges));
    return g;
}

/// Uses the same weight stream as sample_girg, so equal seeds share weights.
inline IrgGraph sample_irg(const GirgParams& params, unsigned threads = 1) {
    params.validate();
    std::mt19937_64 wrng(derive_seed(params.seed, detail::weight_stream));
    return sample_irg_with_weights(params, sample_weights(params.n, params.tau, wrng), threads);
}

/// Smallest pairwise torus distance, or `cap` if every pair is at least `cap` apart.
inline double min_pairwise_distance(std::span<const double> pos, std::size_t n, int d, double cap) {
    const auto dd = static_cast<std::size_t>(d);
    auto point = [&](std::size_t v) { return pos.subspan(v * dd, dd); };
    double best = cap;
    long m = static_cast<long>(std::floor(1.0 / cap));
    m = std::min<long>(m, static_cast<long>(std::floor(std::pow(4.0 * static_cast<double>(n), 1.0 / d))));
    if (m < 3) {
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) best = std::min(best, torus_distance(point(u), point(v)));
        return best;
    }
    // cells at least `cap` wide: a closer pair sits in neighbouring cells
    auto cell_of = [&](std::size_t v, std::vector<long>& c) {
        for (std::size_t j = 0; j < dd; ++j) c[j] = std::min(m - 1, static_cast<long>(pos[v * dd + j] * static_cast<double>(m)));
    };
    auto encode = [&](const std::vector<long>& c) {
        long id = 0;
        for (std::size_t j = 0; j < dd; ++j) id = id * m + ((c[j] % m) + m) % m;
        return id;
    };
    std::vector<std::pair<long, std::size_t>> keyed(n);
    std::vector<long> c(dd);
    for (std::size_t v = 0; v < n; ++v) {
        cell_of(v, c);
        keyed[v] = {encode(c), v};
    }
    std::sort(keyed.begin(), keyed.end());
    long offsets = 1;
    for (std::size_t j = 0; j < dd; ++j) offsets *= 3;
    std::vector<long> nc(dd);
    for (std::size_t v = 0; v < n; ++v) {
        cell_of(v, c);
        for (long o = 0; o < offsets; ++o) {
            long r = o;
            for (std::size_t j = 0; j < dd; ++j) {
                nc[j] = c[j] + (r % 3) - 1;
                r /= 3;
            }
            const long id = encode(nc);
            auto lo = std::lower_bound(keyed.begin(), keyed.end(), std::pair<long, std::size_t>{id, 0});
            for (auto it = lo; it != keyed.end() && it->first == id; ++it)
                if (it->second > v) best = std::min(best, torus_distance(point(v), point(it->second)));
        }
    }
    return best;
}

/// max weight < n^{1/(tau-1)}/eps_bar and min distance > eps_bar n^{-1/d}.
inline bool cutoff_event_holds(const GirgGraph& g, double eps_bar) {
    if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw ConfigError("eps_bar must lie in (0,1)");
    const double n = static_cast<double>(g.params.n);
    const double wmax = *std::max_element(g.weights.begin(), g.weights.end());
    if (!(wmax < std::pow(n, 1.0 / (g.params.tau - 1.0)) / eps_bar)) return false;
    const double dmin = eps_bar * std::pow(n, -1.0 / g.params.d);
    return min_pairwise_distance(g.positions, g.params.n, g.params.d, std::min(0.5, 2.0 * dmin)) > dmin;
}

/// One `u v` line per edge, 1-based.
inline void write_edge_list(std::ostream& os, const Graph& g) {
    for (auto [u, v] : g.edge_list()) os << u + 1 << ' ' << v + 1 << '\n';
}

inline nlohmann::json params_json(const GirgParams& p) {
    nlohmann::json j = {{"n", p.n}, {"d", p.d}, {"tau", p.tau}, {"w0", p.w0}, {"seed", p.seed}};
    if (std::isinf(p.gamma))
        j["gamma"] = "inf";
    else
        j["gamma"] = p.gamma;
    return j;
}

inline nlohmann::json sidecar_json(const GirgGraph& g) {
    nlohmann::json pos = nlohmann::json::array();
    for (std::size_t v = 0; v < g.params.n; ++v) {
        auto x = g.position(v);
        pos.push_back(std::vector<double>(x.begin(), x.end()));
    }
    return {{"params", params_json(g.params)}, {"mu", g.mu}, {"edges", g.graph.edge_count()}, {"weights", g.weights}, {"positions", pos}};
}

} // namespace girgmotif
