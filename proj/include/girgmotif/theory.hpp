#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "counting.hpp"
#include "errors.hpp"
#include "girg.hpp"
#include "parallel.hpp"
#include "pattern.hpp"
#include "random.hpp"

namespace girgmotif {

/// Exponents at (alpha, beta) = (1/2, 0) and (0, -1/d).
inline std::pair<double, double> special_point_exponents(int k, double tau) {
    if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3)");
    return {k * (3.0 - tau) / 2.0, 1.0};
}

enum class Regime { Geometric, NonGeometricOdd, NonGeometricEvenUnproven, Window };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::Geometric: return "geometric";
    case Regime::NonGeometricOdd: return "non-geometric";
    case Regime::NonGeometricEvenUnproven: return "non-geometric-even-unproven";
    case Regime::Window: return "window";
    }
    return "?";
}

struct RegimeVerdict {
    Regime regime = Regime::Window;
    double lower = 0.0; ///< 1 + 1/(3 - tau)
    double upper = 0.0; ///< 2/(3 - tau)
};

inline RegimeVerdict hamiltonian_regime(int k, double tau) {
    if (k < 3) throw ConfigError("Hamiltonian regimes need k >= 3");
    if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3)");
    RegimeVerdict v;
    v.lower = 1.0 + 1.0 / (3.0 - tau);
    v.upper = 2.0 / (3.0 - tau);
    if (k < v.lower)
        v.regime = Regime::Geometric;
    else if (k > v.upper)
        v.regime = k % 2 ? Regime::NonGeometricOdd : Regime::NonGeometricEvenUnproven;
    else
        v.regime = Regime::Window;
    return v;
}

struct ConstantEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    double truncation = 0.0; ///< box radius (geometric) or 0.5 (torus)
    Regime regime = Regime::Geometric;
};

struct McOptions {
    std::int64_t samples = 1 << 20;
    std::int64_t batch = 1 << 16;
    double radius = 1e100;   ///< initial truncation radius for the geometric integral
    double max_drift = 0.05; ///< |J(2R)/J(R) - 1| needed before R is accepted
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double y_floor = 0.0; ///< non-geometric only: integrate y over [y_floor, inf); n^{-1/2} gives the finite-n integral
};

namespace detail {

// Parent of each vertex in a BFS tree from vertex 0, and the remaining edges.
struct SpanningTree {
    std::vector<int> order, parent;
    std::vector<std::pair<int, int>> extra;
};

inline SpanningTree bfs_tree(const Pattern& h) {
    const int k = h.k();
    SpanningTree t;
    t.parent.assign(k, -1);
    std::vector<char> seen(k, 0);
    t.order.push_back(0);
    seen[0] = 1;
    for (std::size_t q = 0; q < t.order.size(); ++q) {
        const int u = t.order[q];
        for (int v = 0; v < k; ++v)
            if (!seen[v] && h.has_edge(u + 1, v + 1)) {
                seen[v] = 1;
                t.parent[v] = u;
                t.order.push_back(v);
            }
    }
    if (static_cast<int>(t.order.size()) != k) throw ConfigError("pattern must be connected");
    for (auto [i, j] : h.edges())
        if (t.parent[j - 1] != i - 1 && t.parent[i - 1] != j - 1) t.extra.emplace_back(i - 1, j - 1);
    return t;
}

inline double kernel(double c, double dist, int d, double gamma) {
    if (dist <= 0.0) return 1.0;
    const double r = c / std::pow(dist, d);
    return r >= 1.0 ? 1.0 : std::pow(r, gamma);
}

// Point uniform on the boundary of the infinity-norm ball of radius r.
template <class Rng>
void cube_surface(double r, int d, Rng& rng, double* out) {
    std::uniform_real_distribution<double> u(-r, r);
    for (int i = 0; i < d; ++i) out[i] = u(rng);
    std::uniform_int_distribution<int> face(0, 2 * d - 1);
    const int f = face(rng);
    out[f / 2] = f % 2 ? r : -r;
}

// Offset with density proportional to min(1, (s/|u|)^{d gamma}) on R^d; returns the normaliser.
template <class Rng>
double kernel_offset_unbounded(double s, int d, double gamma, Rng& rng, double* out) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double core = std::pow(2.0 * s, d);
    const double z = core * gamma / (gamma - 1.0);
    if (unif(rng) < (gamma - 1.0) / gamma) {
        std::uniform_real_distribution<double> c(-s, s);
        for (int i = 0; i < d; ++i) out[i] = c(rng);
    } else {
        const double r = s * std::pow(1.0 - unif(rng), -1.0 / (d * (gamma - 1.0)));
        cube_surface(r, d, rng, out);
    }
    return z;
}

// Same kernel restricted to the torus box [-1/2, 1/2]^d.
template <class Rng>
double kernel_offset_torus(double s, int d, double gamma, Rng& rng, double* out) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (s >= 0.5) {
        for (int i = 0; i < d; ++i) out[i] = unif(rng) - 0.5;
        return 1.0;
    }
    const double core = std::pow(2.0 * s, d);
    const double tail = core * (1.0 - std::pow(2.0 * s, d * (gamma - 1.0))) / (gamma - 1.0);
    const double z = core + tail;
    if (unif(rng) * z < core) {
        std::uniform_real_distribution<double> c(-s, s);
        for (int i = 0; i < d; ++i) out[i] = c(rng);
    } else {
        // t = r^d has density proportional to t^{-gamma} on (s^d, 2^{-d})
        const double a = std::pow(s, d * (1.0 - gamma)), b = std::pow(0.5, d * (1.0 - gamma));
        const double t = std::pow(a - unif(rng) * (a - b), 1.0 / (1.0 - gamma));
        cube_surface(std::min(std::pow(t, 1.0 / d), 0.5), d, rng, out);
    }
    return z;
}

inline double torus_gap(const double* x, const double* y, int d) {
    double m = 0.0;
    for (int i = 0; i < d; ++i) {
        double g = std::abs(x[i] - y[i]);
        g -= std::floor(g);
        m = std::max(m, std::min(g, 1.0 - g));
    }
    return m;
}

inline double box_gap(const double* x, const double* y, int d) {
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

struct Moments {
    double sum = 0.0, sq = 0.0;
    std::int64_t n = 0;
};

// Runs batches of sample(rng) -> (value, bin); merges per-bin sums in batch order.
template <class Sample>
std::vector<Moments> run_batches(const McOptions& opt, std::size_t bins, Sample sample) {
    if (opt.samples < 2 || opt.batch < 1) throw ConfigError("Monte Carlo needs at least 2 samples");
    const std::int64_t nb = (opt.samples + opt.batch - 1) / opt.batch;
    std::vector<std::vector<Moments>> per(nb, std::vector<Moments>(bins));
    parallel_blocks(static_cast<std::size_t>(nb), opt.threads, 1, [&](unsigned, std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            std::mt19937_64 rng(derive_seed(opt.seed, 1000 + b));
            const std::int64_t m = std::min<std::int64_t>(opt.batch, opt.samples - static_cast<std::int64_t>(b) * opt.batch);
            for (std::int64_t i = 0; i < m; ++i) {
                auto [v, bin] = sample(rng);
                auto& mm = per[b][std::min(bin, bins - 1)];
                mm.sum += v;
                mm.sq += v * v;
                ++mm.n;
            }
        }
    });
    std::vector<Moments> out(bins);
    for (const auto& batch : per)
        for (std::size_t i = 0; i < bins; ++i) {
            out[i].sum += batch[i].sum;
            out[i].sq += batch[i].sq;
            out[i].n += batch[i].n;
        }
    return out;
}

inline void finish(ConstantEstimate& e, double sum, double sq, std::int64_t n) {
    e.samples = n;
    e.value = sum / n;
    const double var = std::max(0.0, sq / n - e.value * e.value);
    e.std_error = std::sqrt(var / (n - 1));
}

} // namespace detail

/// J(H): integral over weights and R^{d(k-1)} positions (vertex 1 at the origin).
/// Weights are drawn from a heavier Pareto law, positions along a BFS tree from the
/// edge kernel; the truncation radius doubles until J(2R)/J(R) is within max_drift.
inline ConstantEstimate mc_geo_constant(const Pattern& h, double tau, double gamma, int d, Variant variant,
                                        const McOptions& opt = {}) {
    if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3)");
    if (!(gamma > 1.0) || std::isinf(gamma)) throw ConfigError("geometric constant needs finite gamma > 1");
    if (d < 1) throw ConfigError("d must be at least 1");
    const int k = h.k();
    ConstantEstimate est;
    const bool edge = k == 2 && h.edge_count() == 1;
    if (!edge) {
        if (k < 3 || !is_hamiltonian_pattern(h)) throw ConfigError("geometric constant needs K2 or a Hamiltonian pattern");
        auto v = hamiltonian_regime(k, tau);
        if (v.regime != Regime::Geometric)
            throw ConfigError("geometric constant needs k < 1 + 1/(3 - tau): " + std::to_string(k) + " >= " + std::to_string(v.lower));
    }
    if (!(opt.radius > 0)) throw ConfigError("radius must be positive");
    const double mu = (tau - 1.0) / (tau - 2.0);
    const double a = 1.5 * (tau - 2.0); // proposal tail index
    const auto tree = detail::bfs_tree(h);
    const bool induced = variant == Variant::Induced;
    constexpr std::size_t bins = 64;

    auto sample = [&](std::mt19937_64& rng) -> std::pair<double, std::size_t> {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::array<double, 32> w{};
        std::vector<double> z(static_cast<std::size_t>(k) * d, 0.0);
        double val = 1.0;
        for (int i = 0; i < k; ++i) {
            w[i] = std::pow(1.0 - unif(rng), -1.0 / a);
            val *= (tau - 1.0) / a * std::pow(w[i], a + 1.0 - tau);
        }
        double far = 0.0;
        for (std::size_t q = 1; q < tree.order.size(); ++q) {
            const int v = tree.order[q], p = tree.parent[v];
            const double s = std::pow(w[v] * w[p] / mu, 1.0 / d);
            val *= detail::kernel_offset_unbounded(s, d, gamma, rng, &z[v * d]);
            for (int i = 0; i < d; ++i) {
                z[v * d + i] += z[p * d + i];
                far = std::max(far, std::abs(z[v * d + i]));
            }
        }
        for (auto [i, j] : tree.extra) val *= detail::kernel(w[i] * w[j] / mu, detail::box_gap(&z[i * d], &z[j * d], d), d, gamma);
        if (induced)
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (!h.has_edge(i + 1, j + 1))
                        val *= 1.0 - detail::kernel(w[i] * w[j] / mu, detail::box_gap(&z[i * d], &z[j * d], d), d, gamma);
        std::size_t bin = 0;
        if (far > opt.radius) bin = static_cast<std::size_t>(std::ceil(std::log2(far / opt.radius)));
        return {val, bin};
    };
    auto m = detail::run_batches(opt, bins, sample);
    // cumulative: bin b holds samples with max |z| <= R 2^b
    double sum = 0.0, sq = 0.0;
    std::vector<double> cs(bins), cq(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        sum += m[b].sum;
        sq += m[b].sq;
        cs[b] = sum;
        cq[b] = sq;
    }
    std::int64_t total = 0;
    for (const auto& x : m) total += x.n;
    for (std::size_t b = 0; b + 1 < bins; ++b) {
        if (cs[b] > 0 && std::abs(cs[b + 1] / cs[b] - 1.0) < opt.max_drift) {
            detail::finish(est, cs[b], cq[b], total);
            est.truncation = opt.radius * std::ldexp(1.0, static_cast<int>(b));
            est.regime = Regime::Geometric;
            return est;
        }
    }
    throw NumericalError("geometric constant did not stabilise under radius doubling");
}

/// I(H) for odd Hamiltonian patterns above 2/(3 - tau): y = w/sqrt(n) on (0, inf), positions on
/// the unit torus. Includes the weight-density factor (tau-1)^k so that E N / n^{k(3-tau)/2} -> I.
inline ConstantEstimate mc_nongeo_constant(const Pattern& h, double tau, double gamma, int d, Variant variant,
                                           const McOptions& opt = {}) {
    if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3)");
    if (!(gamma > 1.0) || std::isinf(gamma)) throw ConfigError("non-geometric constant needs finite gamma > 1");
    if (d < 1) throw ConfigError("d must be at least 1");
    const int k = h.k();
    if (k < 3 || !is_hamiltonian_pattern(h)) throw ConfigError("non-geometric constant needs a Hamiltonian pattern");
    auto v = hamiltonian_regime(k, tau);
    if (v.regime != Regime::NonGeometricOdd)
        throw ConfigError("non-geometric constant needs odd k > 2/(3 - tau): k=" + std::to_string(k) +
                          ", 2/(3-tau)=" + std::to_string(v.upper));
    if (!(opt.y_floor >= 0.0 && opt.y_floor < 1.0)) throw ConfigError("y_floor must lie in [0,1)");
    const double mu = (tau - 1.0) / (tau - 2.0);
    const auto tree = detail::bfs_tree(h);
    const bool induced = variant == Variant::Induced;
    const double norm = std::pow(tau - 1.0, k);
    // proposal: y^{-b} on (0,1) and y^{-c} on [1, inf), mass 1/2 each; b and c keep the
    // variance finite both for clusters of small y and for a small y between large ones
    const double b = (1.0 + std::max(0.0, 2.0 * tau - 5.0 + 4.0 / k)) / 2.0;
    const double c = (1.0 + tau) / 2.0;

    auto sample = [&](std::mt19937_64& rng) -> std::pair<double, std::size_t> {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::array<double, 32> y{};
        std::vector<double> x(static_cast<std::size_t>(k) * d, 0.0);
        double val = norm;
        for (int i = 0; i < k; ++i) {
            double q;
            if (unif(rng) < 0.5) {
                y[i] = std::pow(1.0 - unif(rng), 1.0 / (1.0 - b));
                if (y[i] < opt.y_floor) return {0.0, 0};
                q = 0.5 * (1.0 - b) * std::pow(y[i], -b);
            } else {
                y[i] = std::pow(1.0 - unif(rng), -1.0 / (c - 1.0));
                q = 0.5 * (c - 1.0) * std::pow(y[i], -c);
            }
            val *= std::pow(y[i], -tau) / q;
        }
        for (std::size_t q = 1; q < tree.order.size(); ++q) {
            const int u = tree.order[q], p = tree.parent[u];
            const double s = std::pow(y[u] * y[p] / mu, 1.0 / d);
            val *= detail::kernel_offset_torus(s, d, gamma, rng, &x[u * d]);
            for (int i = 0; i < d; ++i) x[u * d + i] += x[p * d + i];
        }
        for (auto [i, j] : tree.extra) val *= detail::kernel(y[i] * y[j] / mu, detail::torus_gap(&x[i * d], &x[j * d], d), d, gamma);
        if (induced)
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (!h.has_edge(i + 1, j + 1))
                        val *= 1.0 - detail::kernel(y[i] * y[j] / mu, detail::torus_gap(&x[i * d], &x[j * d], d), d, gamma);
        return {val, 0};
    };
    auto m = detail::run_batches(opt, 1, sample);
    ConstantEstimate est;
    detail::finish(est, m[0].sum, m[0].sq, m[0].n);
    est.truncation = 0.5;
    est.regime = Regime::NonGeometricOdd;
    return est;
}

/// Closed form of J(K2) = 2^d gamma mu / (gamma - 1).
inline double edge_constant(double tau, double gamma, int d) {
    const double mu = (tau - 1.0) / (tau - 2.0);
    return std::pow(2.0, d) * gamma * mu / (gamma - 1.0);
}

struct EmpiricalRow {
    std::size_t n = 0;
    double mean = 0.0; ///< mean of N / n^{f}
    double cv = 0.0;   ///< sample standard deviation over mean
    std::vector<double> values;
};

/// N(H)/n^{exponent} over seeds seed_base .. seed_base + seeds - 1 for each n.
inline std::vector<EmpiricalRow> empirical_constant(const Pattern& h, GirgParams params, Variant mode, double exponent,
                                                    const std::vector<std::size_t>& n_list, int seeds,
                                                    unsigned threads = 1) {
    if (seeds < 1) throw ConfigError("seeds must be positive");
    std::vector<EmpiricalRow> out;
    const std::uint64_t base = params.seed;
    for (std::size_t n : n_list) {
        EmpiricalRow row;
        row.n = n;
        for (int s = 0; s < seeds; ++s) {
            params.n = n;
            params.seed = base + static_cast<std::uint64_t>(s);
            auto g = sample_girg(params, threads);
            const double c = static_cast<double>(count_ordered(g.graph, h, mode, threads));
            row.values.push_back(c / std::pow(static_cast<double>(n), exponent));
        }
        double sum = 0.0;
        for (double x : row.values) sum += x;
        row.mean = sum / seeds;
        double ss = 0.0;
        for (double x : row.values) ss += (x - row.mean) * (x - row.mean);
        row.cv = seeds > 1 && row.mean != 0.0 ? std::sqrt(ss / (seeds - 1)) / row.mean : 0.0;
        out.push_back(std::move(row));
    }
    return out;
}

inline nlohmann::json to_json(const ConstantEstimate& e, const Pattern& h, Variant v) {
    return {{"pattern", to_json(h)},   {"variant", to_string(v)}, {"regime", to_string(e.regime)},
            {"estimate", e.value},     {"std_error", e.std_error}, {"samples", e.samples},
            {"truncation", e.truncation}};
}

} // namespace girgmotif
