#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "girg.hpp"
#include "parallel.hpp"
#include "pattern.hpp"
#include "simplex.hpp"

namespace girgmotif {

struct OptInstance {
    Pattern pattern;
    double tau = 2.5;
    double gamma = 2.0; ///< may be infinite
    int dim = 1;
    Variant variant = Variant::General;

    void validate() const {
        if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3), got " + std::to_string(tau));
        if (!(gamma > 1.0)) throw ConfigError("gamma must be > 1 or inf");
        if (dim < 1) throw ConfigError("dimension must be at least 1");
        if (pattern.k() < 1) throw ConfigError("empty pattern");
    }
};

/// Per-vertex weight exponents and per-pair distance exponents (row-major upper triangle).
struct Assignment {
    std::vector<double> alpha;
    std::vector<double> beta;

    double b(int k, int i, int j) const { return beta[pair_index(k, i, j)]; }
};

namespace detail {
inline void check_dims(const OptInstance& inst, const Assignment& a) {
    const int k = inst.pattern.k();
    if (static_cast<int>(a.alpha.size()) != k || static_cast<int>(a.beta.size()) != pair_count(k))
        throw ConfigError("assignment dimensions do not match the pattern");
}
} // namespace detail

/// Exponent f_H(alpha, beta); -inf for gamma = inf when some edge term is negative.
inline double objective_f(const OptInstance& inst, const Assignment& a) {
    detail::check_dims(inst, a);
    const auto& h = inst.pattern;
    const int k = h.k();
    const double d = inst.dim;
    double f = k;
    for (double x : a.alpha) f += (1.0 - inst.tau) * x;
    for (int j = 2; j <= k; ++j) {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 1; i < j; ++i) m = std::min(m, a.b(k, i, j));
        f += d * m;
    }
    double energy = 0.0;
    for (auto [i, j] : h.edges()) {
        double t = a.alpha[i - 1] + a.alpha[j - 1] - d * a.b(k, i, j) - 1.0;
        energy += std::min(t, 0.0);
    }
    if (std::isinf(inst.gamma)) {
        // edge terms must be nonnegative; allow round-off from the LP
        for (auto [i, j] : h.edges())
            if (a.alpha[i - 1] + a.alpha[j - 1] - d * a.b(k, i, j) - 1.0 < -1e-9) return -std::numeric_limits<double>::infinity();
        return f;
    }
    return f + inst.gamma * energy;
}

/// Sum of min(alpha_i + alpha_j - d beta_ij - 1, 0) over pattern edges.
inline double edge_energy(const OptInstance& inst, const Assignment& a) {
    const int k = inst.pattern.k();
    double e = 0.0;
    for (auto [i, j] : inst.pattern.edges()) e += std::min(a.alpha[i - 1] + a.alpha[j - 1] - inst.dim * a.b(k, i, j) - 1.0, 0.0);
    return e;
}

inline bool is_feasible(const OptInstance& inst, const Assignment& a, double tol = 1e-7) {
    detail::check_dims(inst, a);
    const auto& h = inst.pattern;
    const int k = h.k();
    const double d = inst.dim;
    const double amax = 1.0 / (inst.tau - 1.0);
    for (double x : a.alpha)
        if (x < -tol || x > amax + tol) return false;
    for (double x : a.beta)
        if (x < -1.0 / d - tol || x > tol) return false;
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            for (int s = 1; s <= k; ++s) {
                if (s == i || s == j) continue;
                if (a.b(k, i, j) > std::max(a.b(k, i, s), a.b(k, s, j)) + tol) return false;
            }
    if (inst.variant == Variant::Induced)
        for (int i = 1; i <= k; ++i)
            for (int j = i + 1; j <= k; ++j)
                if (!h.has_edge(i, j) && a.alpha[i - 1] + a.alpha[j - 1] > 1.0 + d * a.b(k, i, j) + tol) return false;
    return true;
}

/// Scalar from a double; rationals get the simplest fraction with denominator
/// at most 10^4 that reproduces the double to 1e-12, else the exact binary value.
template <class Scalar>
Scalar to_scalar(double x) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
        long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
        double r = x;
        for (int it = 0; it < 40; ++it) {
            const double fl = std::floor(r);
            const long long a = static_cast<long long>(fl);
            long long h2 = a * h1 + h0, k2 = a * k1 + k0;
            if (k2 > 10000) break;
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) < 1e-12) return Rational(h1, k1);
            if (r - fl < 1e-15) break;
            r = 1.0 / (r - fl);
        }
        return Rational(x);
    } else {
        return Scalar(x);
    }
}

/// The MILP with its variable index maps. zeta[0] is unused (-1).
template <class Scalar = double>
struct MilpModel {
    struct Triple {
        int i, j, s;
        int z, bij, bis, bjs;
    };

    LinearProgram<Scalar> lp;
    int k = 0;
    std::vector<int> alpha, beta, zeta, delta, binaries;
    std::vector<Triple> triples;
    std::vector<std::string> names, row_names;
    int non_edge_rows = 0;
    Scalar inv_d = Scalar(1);

    int continuous_count() const { return lp.cols() - static_cast<int>(binaries.size()); }
};

template <class Scalar = double>
MilpModel<Scalar> build_milp(const OptInstance& inst) {
    inst.validate();
    const auto& h = inst.pattern;
    const int k = h.k();
    const Scalar tau = to_scalar<Scalar>(inst.tau);
    const Scalar d(inst.dim);
    const Scalar inv_d = Scalar(1) / d;
    const bool gamma_inf = std::isinf(inst.gamma);
    const Scalar gamma = gamma_inf ? Scalar(0) : to_scalar<Scalar>(inst.gamma);
    const Scalar amax = Scalar(1) / (tau - Scalar(1));

    MilpModel<Scalar> m;
    m.k = k;
    m.inv_d = inv_d;
    auto& lp = m.lp;
    for (int i = 1; i <= k; ++i) {
        m.alpha.push_back(lp.add_variable(Scalar(0), amax, Scalar(1) - tau));
        m.names.push_back("a_" + std::to_string(i));
    }
    m.beta.assign(pair_count(k), -1);
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            m.beta[pair_index(k, i, j)] = lp.add_variable(Scalar(-inv_d), Scalar(0), Scalar(0));
            m.names.push_back("b_" + std::to_string(i) + "_" + std::to_string(j));
        }
    m.zeta.assign(k, -1);
    for (int j = 2; j <= k; ++j) {
        m.zeta[j - 1] = lp.add_variable(Scalar(-inv_d), Scalar(0), d);
        m.names.push_back("zeta_" + std::to_string(j));
    }
    for (auto [i, j] : h.edges()) {
        if (gamma_inf)
            m.delta.push_back(lp.add_variable(Scalar(0), Scalar(0), Scalar(0)));
        else
            m.delta.push_back(lp.add_variable(Scalar(-1), Scalar(0), gamma));
        m.names.push_back("delta_" + std::to_string(i) + "_" + std::to_string(j));
    }
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            for (int s = 1; s <= k; ++s) {
                if (s == i || s == j) continue;
                typename MilpModel<Scalar>::Triple t{i, j, s, lp.add_variable(Scalar(0), Scalar(1), Scalar(0)),
                                                     m.beta[pair_index(k, i, j)], m.beta[pair_index(k, i, s)],
                                                     m.beta[pair_index(k, j, s)]};
                m.triples.push_back(t);
                m.binaries.push_back(t.z);
                m.names.push_back("z_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(s));
            }

    auto row_name = [&](std::string s) { m.row_names.push_back(std::move(s)); };
    for (int j = 2; j <= k; ++j)
        for (int i = 1; i < j; ++i) {
            lp.add_le({{m.zeta[j - 1], Scalar(1)}, {m.beta[pair_index(k, i, j)], Scalar(-1)}}, Scalar(0));
            row_name("zeta_" + std::to_string(j) + "_" + std::to_string(i));
        }
    for (const auto& t : m.triples) {
        const std::string tag = std::to_string(t.i) + "_" + std::to_string(t.j) + "_" + std::to_string(t.s);
        // beta_ij <= beta_is + (1 - z)/d and beta_ij <= beta_js + z/d
        lp.add_le({{t.bij, Scalar(1)}, {t.bis, Scalar(-1)}, {t.z, inv_d}}, inv_d);
        row_name("max1_" + tag);
        lp.add_le({{t.bij, Scalar(1)}, {t.bjs, Scalar(-1)}, {t.z, Scalar(-inv_d)}}, Scalar(0));
        row_name("max2_" + tag);
    }
    for (std::size_t e = 0; e < h.edges().size(); ++e) {
        auto [i, j] = h.edges()[e];
        // delta <= alpha_i + alpha_j - d beta_ij - 1
        lp.add_le({{m.delta[e], Scalar(1)},
                   {m.alpha[i - 1], Scalar(-1)},
                   {m.alpha[j - 1], Scalar(-1)},
                   {m.beta[pair_index(k, i, j)], d}},
                  Scalar(-1));
        row_name("edge_" + std::to_string(i) + "_" + std::to_string(j));
    }
    if (inst.variant == Variant::Induced)
        for (int i = 1; i <= k; ++i)
            for (int j = i + 1; j <= k; ++j) {
                if (h.has_edge(i, j)) continue;
                lp.add_le({{m.alpha[i - 1], Scalar(1)}, {m.alpha[j - 1], Scalar(1)}, {m.beta[pair_index(k, i, j)], -d}},
                          Scalar(1));
                row_name("nonedge_" + std::to_string(i) + "_" + std::to_string(j));
                ++m.non_edge_rows;
            }
    return m;
}

/// Standard LP text format. Two-sided rows become a pair of rows.
template <class Scalar>
void write_lp(std::ostream& os, const MilpModel<Scalar>& m) {
    auto num = [](const Scalar& x) {
        std::ostringstream s;
        s << std::setprecision(17) << ScalarTraits<Scalar>::to_double(x);
        return s.str();
    };
    auto expr = [&](const std::vector<std::pair<int, Scalar>>& terms) {
        std::string out;
        bool first = true;
        for (const auto& [j, c] : terms) {
            if (c == Scalar(0)) continue;
            const bool neg = c < Scalar(0);
            const Scalar mag = neg ? Scalar(-c) : c;
            out += first ? (neg ? "- " : "") : (neg ? " - " : " + ");
            if (mag != Scalar(1)) out += num(mag) + " ";
            out += m.names[j];
            first = false;
        }
        return first ? std::string("0 ") + m.names[0] : out;
    };
    std::vector<std::pair<int, Scalar>> obj;
    for (int j = 0; j < m.lp.cols(); ++j) obj.emplace_back(j, m.lp.objective[j]);
    os << "Maximize\n obj: " << expr(obj) << "\nSubject To\n";
    for (std::size_t r = 0; r < m.lp.rows.size(); ++r) {
        const auto& row = m.lp.rows[r];
        const std::string name = r < m.row_names.size() ? m.row_names[r] : "r" + std::to_string(r);
        if (row.lo && row.hi && *row.lo == *row.hi) {
            os << ' ' << name << ": " << expr(row.coeffs) << " = " << num(*row.hi) << '\n';
            continue;
        }
        if (row.hi) os << ' ' << name << (row.lo ? "_hi" : "") << ": " << expr(row.coeffs) << " <= " << num(*row.hi) << '\n';
        if (row.lo) os << ' ' << name << (row.hi ? "_lo" : "") << ": " << expr(row.coeffs) << " >= " << num(*row.lo) << '\n';
    }
    os << "Bounds\n";
    std::vector<char> binary(m.lp.cols(), 0);
    for (int z : m.binaries) binary[z] = 1;
    for (int j = 0; j < m.lp.cols(); ++j) {
        if (binary[j]) continue;
        const auto& lo = m.lp.lower[j];
        const auto& hi = m.lp.upper[j];
        if (lo && hi && *lo == *hi)
            os << ' ' << m.names[j] << " = " << num(*lo) << '\n';
        else
            os << ' ' << (lo ? num(*lo) : "-inf") << " <= " << m.names[j] << " <= " << (hi ? num(*hi) : "+inf") << '\n';
    }
    os << "Binary\n";
    for (int z : m.binaries) os << ' ' << m.names[z] << '\n';
    os << "End\n";
}

struct BnbOptions {
    std::int64_t node_limit = 200000;
    double tolerance = 1e-9; ///< integrality, ultrametric repair and pruning gap (double mode)
    SimplexOptions simplex;
};

template <class Scalar>
struct MilpSolution {
    LpStatus status = LpStatus::Infeasible;
    Scalar objective = Scalar(0);
    std::vector<Scalar> x;
    std::int64_t nodes = 0;
    std::int64_t lp_iterations = 0;
};

/// Best-bound branch and bound over the z binaries. A node whose LP point already
/// satisfies every triangle-max condition is closed by choosing z from the betas.
template <class Scalar>
MilpSolution<Scalar> solve_milp(const MilpModel<Scalar>& m, const BnbOptions& opt = {}) {
    const Scalar tol = std::is_same_v<Scalar, Rational> ? Scalar(0) : Scalar(opt.tolerance);
    struct Node {
        Scalar bound;
        std::int64_t id;
        std::vector<signed char> fix; // per triple: -1 free, 0, 1
    };
    struct Worse {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound < b.bound;
            return a.id > b.id;
        }
    };
    std::priority_queue<Node, std::vector<Node>, Worse> open;
    std::int64_t next_id = 0;
    open.push({Scalar(0), next_id++, std::vector<signed char>(m.triples.size(), -1)});
    bool root = true;

    MilpSolution<Scalar> best;
    bool have = false;
    LinearProgram<Scalar> lp = m.lp;
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (!root && have && node.bound <= best.objective + tol) break;
        if (++best.nodes > opt.node_limit)
            throw BudgetExceeded("branch-and-bound node limit " + std::to_string(opt.node_limit) + " exceeded");
        for (std::size_t t = 0; t < m.triples.size(); ++t) {
            const int z = m.triples[t].z;
            if (node.fix[t] < 0) {
                lp.lower[z] = Scalar(0);
                lp.upper[z] = Scalar(1);
            } else {
                lp.lower[z] = lp.upper[z] = Scalar(node.fix[t]);
            }
        }
        auto r = solve_lp(lp, opt.simplex);
        best.lp_iterations += r.iterations;
        if (r.status == LpStatus::Unbounded) throw NumericalError("MILP relaxation unbounded");
        if (r.status != LpStatus::Optimal) {
            root = false;
            continue;
        }
        root = false;
        if (have && r.objective <= best.objective + tol) continue;

        // repair: choose z from the betas when the LP point is ultrametric
        int branch = -1;
        Scalar branch_score(-1);
        bool repairable = true;
        for (std::size_t t = 0; t < m.triples.size(); ++t) {
            const auto& tr = m.triples[t];
            const Scalar& bij = r.x[tr.bij];
            const Scalar& bis = r.x[tr.bis];
            const Scalar& bjs = r.x[tr.bjs];
            if (bij <= bis + tol || bij <= bjs + tol) continue;
            repairable = false;
            if (node.fix[t] >= 0) continue;
            const Scalar zf = r.x[tr.z];
            const Scalar score = detail::abs_(Scalar(zf - Scalar(1) / Scalar(2)));
            if (branch < 0 || score < branch_score) {
                branch = static_cast<int>(t);
                branch_score = score;
            }
        }
        if (repairable) {
            for (std::size_t t = 0; t < m.triples.size(); ++t) {
                const auto& tr = m.triples[t];
                if (node.fix[t] >= 0) continue;
                r.x[tr.z] = r.x[tr.bij] <= r.x[tr.bis] + tol ? Scalar(1) : Scalar(0);
            }
            // fixed z that disagree are still valid: rows with the fixed value hold at this LP point
            best.objective = r.objective;
            best.x = r.x;
            best.status = LpStatus::Optimal;
            have = true;
            continue;
        }
        if (branch < 0) throw NumericalError("branch-and-bound found no branching variable");
        for (signed char v : {0, 1}) {
            Node child{r.objective, next_id++, node.fix};
            child.fix[branch] = v;
            open.push(std::move(child));
        }
    }
    return best;
}

enum class Uniqueness { Unique, NonUnique, ToleranceAmbiguous };

inline const char* to_string(Uniqueness u) {
    switch (u) {
    case Uniqueness::Unique: return "unique";
    case Uniqueness::NonUnique: return "non-unique";
    case Uniqueness::ToleranceAmbiguous: return "tolerance-ambiguous";
    }
    return "?";
}

struct SolveStats {
    std::int64_t nodes = 0;
    std::int64_t lp_iters = 0;
    double ms = 0.0;
};

struct SolveReport {
    OptInstance instance;
    Assignment optimizer;
    double f_star = 0.0;
    Uniqueness unique = Uniqueness::Unique;
    std::vector<Assignment> alternates;
    SolveStats stats;
};

struct SolveOptions {
    bool uniqueness = true;
    bool exact = false;       ///< rational arithmetic throughout
    double cut_tol = 1e-7;    ///< objective cut half-width
    double compare_tol = 1e-6;
    unsigned threads = 1;     ///< for the uniqueness re-solves
    BnbOptions bnb;
};

namespace detail {

template <class Scalar>
Assignment project(const MilpModel<Scalar>& m, const std::vector<Scalar>& x) {
    Assignment a;
    for (int j : m.alpha) a.alpha.push_back(ScalarTraits<Scalar>::to_double(x[j]));
    for (int j : m.beta) a.beta.push_back(ScalarTraits<Scalar>::to_double(x[j]));
    return a;
}

inline bool same_point(const Assignment& a, const Assignment& b, double tol) {
    for (std::size_t i = 0; i < a.alpha.size(); ++i)
        if (std::abs(a.alpha[i] - b.alpha[i]) > tol) return false;
    for (std::size_t i = 0; i < a.beta.size(); ++i)
        if (std::abs(a.beta[i] - b.beta[i]) > tol) return false;
    return true;
}

struct UniquenessOutcome {
    Uniqueness verdict = Uniqueness::Unique;
    std::vector<Assignment> alternates;
    std::int64_t nodes = 0, lp_iters = 0;
};

template <class Scalar>
UniquenessOutcome check_uniqueness_impl(const MilpModel<Scalar>& base, const Scalar& z_star, const Assignment& reference,
                                        const SolveOptions& opt) {
    const Scalar cut = std::is_same_v<Scalar, Rational> ? Scalar(0) : Scalar(opt.cut_tol);
    MilpModel<Scalar> cutm = base;
    std::vector<std::pair<int, Scalar>> obj;
    for (int j = 0; j < base.lp.cols(); ++j)
        if (base.lp.objective[j] != Scalar(0)) obj.emplace_back(j, base.lp.objective[j]);
    cutm.lp.add_row(obj, Scalar(z_star - cut), Scalar(z_star + cut));
    cutm.row_names.push_back("objcut");
    std::vector<std::pair<int, int>> targets; // (column, sign)
    for (int j : base.alpha) {
        targets.emplace_back(j, 1);
        targets.emplace_back(j, -1);
    }
    for (int j : base.beta) {
        targets.emplace_back(j, 1);
        targets.emplace_back(j, -1);
    }
    struct Slot {
        bool feasible = false;
        Assignment point;
        std::int64_t nodes = 0, iters = 0;
    };
    std::vector<Slot> slots(targets.size());
    parallel_blocks(targets.size(), opt.threads, 1, [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t t = b; t < e; ++t) {
            MilpModel<Scalar> mm = cutm;
            std::fill(mm.lp.objective.begin(), mm.lp.objective.end(), Scalar(0));
            mm.lp.objective[targets[t].first] = Scalar(targets[t].second);
            auto sol = solve_milp(mm, opt.bnb);
            slots[t].nodes = sol.nodes;
            slots[t].iters = sol.lp_iterations;
            if (sol.status == LpStatus::Optimal) {
                slots[t].feasible = true;
                slots[t].point = project(mm, sol.x);
            }
        }
    });
    UniquenessOutcome out;
    bool infeasible = false;
    for (const auto& s : slots) {
        out.nodes += s.nodes;
        out.lp_iters += s.iters;
        if (!s.feasible) {
            infeasible = true;
            continue;
        }
        if (same_point(s.point, reference, opt.compare_tol)) continue;
        bool seen = false;
        for (const auto& a : out.alternates) seen = seen || same_point(a, s.point, opt.compare_tol);
        if (!seen) out.alternates.push_back(s.point);
    }
    if (!out.alternates.empty())
        out.verdict = Uniqueness::NonUnique;
    else if (infeasible)
        out.verdict = Uniqueness::ToleranceAmbiguous;
    return out;
}

template <class Scalar>
SolveReport solve_instance_impl(const OptInstance& inst, const SolveOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    auto model = build_milp<Scalar>(inst);
    auto sol = solve_milp(model, opt.bnb);
    if (sol.status != LpStatus::Optimal) throw NumericalError("MILP reported infeasible; the feasible region is never empty");
    SolveReport rep;
    rep.instance = inst;
    rep.optimizer = project(model, sol.x);
    rep.f_star = inst.pattern.k() + ScalarTraits<Scalar>::to_double(sol.objective);
    rep.stats.nodes = sol.nodes;
    rep.stats.lp_iters = sol.lp_iterations;
    if (opt.uniqueness) {
        auto u = check_uniqueness_impl(model, sol.objective, rep.optimizer, opt);
        rep.unique = u.verdict;
        rep.alternates = std::move(u.alternates);
        rep.stats.nodes += u.nodes;
        rep.stats.lp_iters += u.lp_iters;
    }
    rep.stats.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace detail

inline SolveReport solve_instance(const OptInstance& inst, const SolveOptions& opt = {}) {
    if (inst.pattern.k() > 6) throw ConfigError("solve_instance supports k <= 6");
    return opt.exact ? detail::solve_instance_impl<Rational>(inst, opt) : detail::solve_instance_impl<double>(inst, opt);
}

/// The uniqueness loop on its own, for a known optimum value f_star (= k + MILP objective).
inline std::pair<Uniqueness, std::vector<Assignment>> check_uniqueness(const OptInstance& inst, double f_star,
                                                                       const Assignment& reference,
                                                                       const SolveOptions& opt = {}) {
    auto model = build_milp<double>(inst);
    auto u = detail::check_uniqueness_impl(model, f_star - inst.pattern.k(), reference, opt);
    return {u.verdict, std::move(u.alternates)};
}

enum class AlphaClass { Zero, TauRatio, Half, Max, Other };

inline const char* to_string(AlphaClass c) {
    switch (c) {
    case AlphaClass::Zero: return "0";
    case AlphaClass::TauRatio: return "(tau-2)/(tau-1)";
    case AlphaClass::Half: return "1/2";
    case AlphaClass::Max: return "1/(tau-1)";
    case AlphaClass::Other: return "other";
    }
    return "?";
}

inline double alpha_class_value(AlphaClass c, double tau) {
    switch (c) {
    case AlphaClass::Zero: return 0.0;
    case AlphaClass::TauRatio: return (tau - 2.0) / (tau - 1.0);
    case AlphaClass::Half: return 0.5;
    case AlphaClass::Max: return 1.0 / (tau - 1.0);
    default: return std::numeric_limits<double>::quiet_NaN();
    }
}

/// Nearest of {0, (tau-2)/(tau-1), 1/2, 1/(tau-1)} within tol, else Other.
inline AlphaClass classify_alpha_value(double alpha, double tau, double tol = 1e-6) {
    AlphaClass best = AlphaClass::Other;
    double dist = tol;
    for (AlphaClass c : {AlphaClass::Zero, AlphaClass::TauRatio, AlphaClass::Half, AlphaClass::Max}) {
        double e = std::abs(alpha - alpha_class_value(c, tau));
        if (e <= dist) {
            dist = e;
            best = c;
        }
    }
    return best;
}

inline Assignment rescale_dimension(const Assignment& a, int d_from, int d_to) {
    if (d_from < 1 || d_to < 1) throw ConfigError("dimensions must be positive");
    Assignment out = a;
    if (d_from == d_to) return out;
    for (double& b : out.beta) b = b * d_from / d_to;
    return out;
}

inline nlohmann::json gamma_json(double gamma) {
    if (std::isinf(gamma)) return "inf";
    return gamma;
}

inline nlohmann::json assignment_json(const Assignment& a, int k) {
    nlohmann::json beta = nlohmann::json::array();
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) beta.push_back({i, j, a.b(k, i, j)});
    return {{"alpha", a.alpha}, {"beta", beta}};
}

inline nlohmann::json to_json(const SolveReport& r, bool with_time = true) {
    const int k = r.instance.pattern.k();
    auto opt = assignment_json(r.optimizer, k);
    nlohmann::json alts = nlohmann::json::array();
    for (const auto& a : r.alternates) alts.push_back(assignment_json(a, k));
    nlohmann::json stats = {{"nodes", r.stats.nodes}, {"lp_iters", r.stats.lp_iters}};
    if (with_time) stats["ms"] = r.stats.ms;
    return {{"pattern", to_json(r.instance.pattern)},
            {"tau", r.instance.tau},
            {"gamma", gamma_json(r.instance.gamma)},
            {"d", r.instance.dim},
            {"variant", to_string(r.instance.variant)},
            {"f_star", r.f_star},
            {"alpha", opt["alpha"]},
            {"beta", opt["beta"]},
            {"unique", to_string(r.unique)},
            {"alternates", alts},
            {"stats", stats}};
}

} // namespace girgmotif
