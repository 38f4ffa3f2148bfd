#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "milp.hpp"
#include "pattern.hpp"

namespace girgmotif {

struct GridOptions {
    double step = 0.02;
    std::int64_t max_evaluations = 400'000'000; ///< alpha points times trees
};

struct GridResult {
    Assignment best;
    double value = -std::numeric_limits<double>::infinity();
    std::int64_t alpha_points = 0;
    std::int64_t evaluations = 0;
};

namespace detail {

// Rooted binary tree on k labelled leaves. Nodes 0..k-1 are leaves, k.. internal.
struct Dendrogram {
    std::vector<int> left, right; // by internal index
    std::vector<int> post;        // internal indices, children first
    std::vector<std::vector<int>> pairs_at; // pair indices whose lowest common ancestor is the node
};

inline std::vector<Dendrogram> enumerate_dendrograms(int k) {
    // parent arrays over 2k-1 nodes; grow by splicing leaf j above any existing node
    struct Raw {
        std::vector<int> parent;
        int root;
    };
    std::vector<Raw> cur;
    if (k == 1) return {Dendrogram{}};
    {
        Raw r;
        r.parent.assign(2 * k - 1, -1);
        r.parent[0] = k;
        r.parent[1] = k;
        r.root = k;
        cur.push_back(r);
    }
    for (int j = 2; j < k; ++j) {
        std::vector<Raw> next;
        const int fresh = k + j - 1;
        for (const auto& r : cur) {
            std::vector<int> nodes;
            for (int v = 0; v < j; ++v) nodes.push_back(v);
            for (int v = k; v < fresh; ++v) nodes.push_back(v);
            for (int v : nodes) {
                Raw s = r;
                s.parent[fresh] = s.parent[v];
                s.parent[v] = fresh;
                s.parent[j] = fresh;
                s.root = (v == r.root) ? fresh : r.root;
                next.push_back(std::move(s));
            }
        }
        cur = std::move(next);
    }
    std::vector<Dendrogram> out;
    const int internal = k - 1;
    for (const auto& r : cur) {
        Dendrogram t;
        t.left.assign(internal, -1);
        t.right.assign(internal, -1);
        for (int v = 0; v < 2 * k - 1; ++v) {
            if (v == r.root) continue;
            int p = r.parent[v] - k;
            (t.left[p] < 0 ? t.left[p] : t.right[p]) = v;
        }
        std::vector<int> depth(2 * k - 1, 0);
        auto depth_of = [&](int v) {
            int dd = 0;
            while (v != r.root) {
                v = r.parent[v];
                ++dd;
            }
            return dd;
        };
        for (int v = 0; v < 2 * k - 1; ++v) depth[v] = depth_of(v);
        std::vector<int> order(internal);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return depth[a + k] > depth[b + k]; });
        t.post = order;
        t.pairs_at.assign(internal, {});
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                int a = i, b = j;
                while (a != b) {
                    if (depth[a] >= depth[b])
                        a = r.parent[a];
                    else
                        b = r.parent[b];
                }
                t.pairs_at[a - k].push_back(pair_index(k, i + 1, j + 1));
            }
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<std::vector<int>> automorphisms(const Pattern& h) {
    const int k = h.k();
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
            for (int j = i + 1; j < k && ok; ++j) ok = h.has_edge(i + 1, j + 1) == h.has_edge(perm[i] + 1, perm[j] + 1);
        if (ok) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline std::vector<double> lattice(double lo, double hi, double step, bool from_top) {
    // multiples of step measured from 0, clipped to [lo, hi], endpoints added
    std::vector<double> v;
    if (from_top) {
        for (int i = 0;; ++i) {
            double x = hi - i * step;
            if (x <= lo + 1e-12) break;
            v.push_back(x);
        }
        v.push_back(lo);
        std::reverse(v.begin(), v.end());
    } else {
        for (int i = 0;; ++i) {
            double x = lo + i * step;
            if (x >= hi - 1e-12) break;
            v.push_back(x);
        }
        v.push_back(hi);
    }
    return v;
}

} // namespace detail

/// Exhaustive maximum of f_H over the lattice {0, step, 2 step, ...} clipped to the
/// boxes (endpoints included) restricted to triangle-max feasible points. Feasible
/// beta are ultrametrics, enumerated as labelled dendrograms with monotone heights.
inline GridResult grid_oracle(const OptInstance& inst, const GridOptions& opt = {}) {
    inst.validate();
    if (!(opt.step > 0)) throw ConfigError("grid step must be positive");
    const auto& h = inst.pattern;
    const int k = h.k();
    if (k > 5) throw ConfigError("grid oracle supports k <= 5");
    const double d = inst.dim;
    const double tau = inst.tau;
    const bool gamma_inf = std::isinf(inst.gamma);
    const bool induced = inst.variant == Variant::Induced;

    const auto A = detail::lattice(0.0, 1.0 / (tau - 1.0), opt.step, false);
    const auto B = detail::lattice(-1.0 / d, 0.0, opt.step, true);
    const int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
    const int np = pair_count(k);

    GridResult res;
    if (k == 1) {
        res.best = {{0.0}, {}};
        res.value = objective_f(inst, res.best);
        res.alpha_points = res.evaluations = 1;
        return res;
    }
    const auto trees = detail::enumerate_dendrograms(k);
    const auto autos = detail::automorphisms(h);

    // spanning forest of H: along a forest edge, d*beta plus its energy is at most min(s - 1, 0)
    std::vector<std::pair<int, int>> forest;
    {
        std::vector<int> comp(k);
        std::iota(comp.begin(), comp.end(), 0);
        auto find = [&](int x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        for (auto [i, j] : h.edges())
            if (find(i - 1) != find(j - 1)) {
                comp[find(i - 1)] = find(j - 1);
                forest.emplace_back(i - 1, j - 1);
            }
    }
    // orbit representatives under Aut(H) (lexicographically smallest image), with their bounds
    std::vector<int> img(k);
    auto is_rep = [&](const std::vector<int>& a) {
        for (const auto& p : autos) {
            for (int i = 0; i < k; ++i) img[p[i]] = a[i];
            if (std::lexicographical_compare(img.begin(), img.end(), a.begin(), a.end())) return false;
        }
        return true;
    };
    auto advance = [&](std::vector<int>& a) {
        for (int i = k - 1; i >= 0; --i) {
            if (++a[i] < na) return true;
            a[i] = 0;
        }
        return false;
    };
    auto base_of = [&](const std::vector<int>& a) {
        double base = 0.0;
        for (int i = 0; i < k; ++i) base += (1.0 - tau) * A[a[i]];
        return base;
    };
    struct Candidate {
        double bound;
        std::int64_t code;
    };
    std::vector<Candidate> cands;
    {
        std::vector<int> a(k, 0);
        std::int64_t code = 0;
        do {
            if (is_rep(a)) {
                double ub = base_of(a);
                for (auto [i, j] : forest) ub += std::min(A[a[i]] + A[a[j]] - 1.0, 0.0);
                cands.push_back({ub, code});
                if (static_cast<std::int64_t>(cands.size() * trees.size()) > opt.max_evaluations)
                    throw BudgetExceeded("grid oracle search space exceeds budget of " + std::to_string(opt.max_evaluations));
            }
            ++code;
        } while (advance(a));
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.bound > y.bound; });
    auto decode = [&](std::int64_t code) {
        std::vector<int> a(k);
        for (int i = k - 1; i >= 0; --i) {
            a[i] = static_cast<int>(code % na);
            code /= na;
        }
        return a;
    };

    struct PairInfo {
        int i, j;
        bool edge;
    };
    std::vector<PairInfo> pinfo(np);
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) pinfo[pair_index(k, i, j)] = {i - 1, j - 1, h.has_edge(i, j)};

    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> term(static_cast<std::size_t>(np) * nb);
    std::vector<std::vector<double>> val(k - 1, std::vector<double>(nb)), pref(k - 1, std::vector<double>(nb));
    std::vector<std::vector<int>> arg(k - 1, std::vector<int>(nb));

    auto fill_terms = [&](const std::vector<int>& a) {
        for (int p = 0; p < np; ++p) {
            const double s = A[a[pinfo[p].i]] + A[a[pinfo[p].j]];
            double* t = &term[static_cast<std::size_t>(p) * nb];
            for (int b = 0; b < nb; ++b) {
                const double e = s - d * B[b] - 1.0;
                if (pinfo[p].edge) {
                    if (gamma_inf)
                        t[b] = e >= -1e-12 ? 0.0 : ninf;
                    else
                        t[b] = inst.gamma * std::min(e, 0.0);
                } else {
                    t[b] = (induced && e > 1e-12) ? ninf : 0.0;
                }
            }
        }
    };
    // best total over heights for one tree; fills val/pref/arg
    auto run_tree = [&](const detail::Dendrogram& t) {
        for (int v : t.post) {
            auto& vv = val[v];
            for (int b = 0; b < nb; ++b) vv[b] = d * B[b];
            for (int p : t.pairs_at[v]) {
                const double* tp = &term[static_cast<std::size_t>(p) * nb];
                for (int b = 0; b < nb; ++b) vv[b] += tp[b];
            }
            for (int c : {t.left[v], t.right[v]}) {
                if (c < k) continue;
                const auto& pc = pref[c - k];
                for (int b = 0; b < nb; ++b) vv[b] += pc[b];
            }
            auto& pv = pref[v];
            auto& av = arg[v];
            for (int b = 0; b < nb; ++b) {
                if (b == 0 || vv[b] > pv[b - 1]) {
                    pv[b] = vv[b];
                    av[b] = b;
                } else {
                    pv[b] = pv[b - 1];
                    av[b] = av[b - 1];
                }
            }
        }
        return pref[t.post.back()][nb - 1];
    };

    double best = ninf;
    std::vector<int> best_a;
    int best_tree = -1;
    for (const auto& c : cands) {
        if (c.bound <= best) break;
        const auto a = decode(c.code);
        ++res.alpha_points;
        const double base = base_of(a);
        fill_terms(a);
        for (std::size_t ti = 0; ti < trees.size(); ++ti) {
            ++res.evaluations;
            const double v = base + run_tree(trees[ti]);
            if (v > best) {
                best = v;
                best_a = a;
                best_tree = static_cast<int>(ti);
            }
        }
    }
    if (best_tree < 0 || std::isinf(best)) throw NumericalError("grid oracle found no feasible lattice point");

    // rebuild beta by walking heights down from the root
    fill_terms(best_a);
    const auto& t = trees[best_tree];
    run_tree(t);
    std::vector<int> height(k - 1, -1);
    const int root = t.post.back();
    height[root] = arg[root][nb - 1];
    for (auto it = t.post.rbegin(); it != t.post.rend(); ++it) {
        const int v = *it;
        for (int c : {t.left[v], t.right[v]})
            if (c >= k) height[c - k] = arg[c - k][height[v]];
    }
    res.best.alpha.resize(k);
    for (int i = 0; i < k; ++i) res.best.alpha[i] = A[best_a[i]];
    res.best.beta.assign(np, 0.0);
    for (int v = 0; v < k - 1; ++v)
        for (int p : t.pairs_at[v]) res.best.beta[p] = B[height[v]];
    res.value = objective_f(inst, res.best);
    if (std::abs(res.value - (k + best)) > 1e-9)
        throw NumericalError("grid oracle reconstruction disagrees with its search value");
    return res;
}

} // namespace girgmotif
