#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace girgmotif {

template <class Scalar>
struct ScalarTraits {
    static Scalar eps() { return Scalar(1e-9); }
    static Scalar feasibility() { return Scalar(1e-9); }
    static double to_double(const Scalar& x) { return static_cast<double>(x); }
};

using Rational = boost::multiprecision::cpp_rational;

template <>
struct ScalarTraits<Rational> {
    static Rational eps() { return Rational(0); }
    static Rational feasibility() { return Rational(0); }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

/// max c^T x subject to lo_r <= a_r^T x <= hi_r and lo_j <= x_j <= hi_j.
/// Missing bounds are infinite.
template <class Scalar = double>
struct LinearProgram {
    struct Row {
        std::vector<std::pair<int, Scalar>> coeffs;
        std::optional<Scalar> lo, hi;
    };

    std::vector<Scalar> objective;
    std::vector<std::optional<Scalar>> lower, upper;
    std::vector<Row> rows;

    int add_variable(std::optional<Scalar> lo, std::optional<Scalar> hi, Scalar obj = Scalar(0)) {
        lower.push_back(std::move(lo));
        upper.push_back(std::move(hi));
        objective.push_back(std::move(obj));
        return static_cast<int>(objective.size()) - 1;
    }

    int add_row(std::vector<std::pair<int, Scalar>> coeffs, std::optional<Scalar> lo, std::optional<Scalar> hi) {
        rows.push_back({std::move(coeffs), std::move(lo), std::move(hi)});
        return static_cast<int>(rows.size()) - 1;
    }

    int add_le(std::vector<std::pair<int, Scalar>> coeffs, Scalar rhs) { return add_row(std::move(coeffs), std::nullopt, rhs); }
    int add_ge(std::vector<std::pair<int, Scalar>> coeffs, Scalar rhs) { return add_row(std::move(coeffs), rhs, std::nullopt); }
    int add_eq(std::vector<std::pair<int, Scalar>> coeffs, Scalar rhs) { return add_row(std::move(coeffs), rhs, rhs); }

    int cols() const { return static_cast<int>(objective.size()); }
};

template <class Scalar = double>
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Scalar objective = Scalar(0);
    std::vector<Scalar> x;
    std::int64_t iterations = 0;
};

struct SimplexOptions {
    std::int64_t max_iterations = 0; ///< 0: 50 (rows + cols) + 1000
    int degenerate_switch = 50;      ///< consecutive degenerate pivots before Bland's rule
};

namespace detail {

template <class Scalar>
Scalar abs_(const Scalar& x) {
    return x < Scalar(0) ? Scalar(-x) : x;
}

/// Bounded-variable primal simplex on a dense tableau. Each row r is stored as
/// a_r x - s_r (+ sigma t_r) = 0 with s_r carrying the row bounds; artificials t
/// exist only for rows whose slack starts outside its bounds.
template <class Scalar>
class BoundedSimplex {
public:
    BoundedSimplex(const LinearProgram<Scalar>& lp, const SimplexOptions& opt)
        : lp_(lp), opt_(opt), n_(lp.cols()), m_(static_cast<int>(lp.rows.size())) {}

    LpResult<Scalar> solve() {
        setup();
        LpResult<Scalar> res;
        if (!artificials_.empty()) {
            std::vector<Scalar> phase1(N_, Scalar(0));
            for (int a : artificials_) phase1[a] = Scalar(-1);
            run(phase1);
            Scalar infeas(0);
            for (int a : artificials_) infeas += val_[a];
            if (infeas > ScalarTraits<Scalar>::feasibility() * Scalar(std::max(1, m_))) {
                res.status = LpStatus::Infeasible;
                res.iterations = iters_;
                return res;
            }
            for (int a : artificials_) {
                up_[a] = Scalar(0);
                val_[a] = Scalar(0);
            }
            recompute_basics();
        }
        std::vector<Scalar> cost(N_, Scalar(0));
        for (int j = 0; j < n_; ++j) cost[j] = lp_.objective[j];
        if (!run(cost)) {
            res.status = LpStatus::Unbounded;
            res.iterations = iters_;
            return res;
        }
        res.status = LpStatus::Optimal;
        res.x.assign(val_.begin(), val_.begin() + n_);
        for (int j = 0; j < n_; ++j) res.objective += lp_.objective[j] * res.x[j];
        res.iterations = iters_;
        return res;
    }

private:
    using Opt = std::optional<Scalar>;

    void setup() {
        // columns: structural [0,n), row slacks [n, n+m), artificials after
        N_ = n_ + m_;
        lo_.assign(lp_.lower.begin(), lp_.lower.end());
        up_.assign(lp_.upper.begin(), lp_.upper.end());
        for (const auto& r : lp_.rows) {
            lo_.push_back(r.lo);
            up_.push_back(r.hi);
        }
        val_.assign(N_, Scalar(0));
        for (int j = 0; j < n_; ++j) {
            if (lo_[j] && up_[j] && *up_[j] < *lo_[j]) throw ConfigError("variable bounds cross");
            val_[j] = lo_[j] ? *lo_[j] : up_[j] ? *up_[j] : Scalar(0);
        }
        std::vector<Scalar> act(m_, Scalar(0));
        for (int r = 0; r < m_; ++r)
            for (const auto& [j, a] : lp_.rows[r].coeffs) act[r] += a * val_[j];
        std::vector<int> sigma(m_, 0);
        for (int r = 0; r < m_; ++r) {
            const auto& row = lp_.rows[r];
            if (row.lo && row.hi && *row.hi < *row.lo) throw ConfigError("row bounds cross");
            if (row.lo && act[r] < *row.lo) {
                sigma[r] = 1;
                val_[n_ + r] = *row.lo;
            } else if (row.hi && act[r] > *row.hi) {
                sigma[r] = -1;
                val_[n_ + r] = *row.hi;
            } else {
                val_[n_ + r] = act[r];
            }
        }
        std::vector<int> art_col(m_, -1);
        for (int r = 0; r < m_; ++r)
            if (sigma[r]) {
                art_col[r] = N_++;
                artificials_.push_back(art_col[r]);
                lo_.push_back(Scalar(0));
                up_.push_back(std::nullopt);
                val_.push_back(sigma[r] > 0 ? Scalar(*lp_.rows[r].lo - act[r]) : Scalar(act[r] - *lp_.rows[r].hi));
            }
        T_.assign(static_cast<std::size_t>(m_) * N_, Scalar(0));
        basis_.assign(m_, -1);
        is_basic_.assign(N_, 0);
        for (int r = 0; r < m_; ++r) {
            for (const auto& [j, a] : lp_.rows[r].coeffs) at(r, j) += a;
            at(r, n_ + r) = Scalar(-1);
            Scalar pivot(-1);
            int b = n_ + r;
            if (art_col[r] >= 0) {
                at(r, art_col[r]) = Scalar(sigma[r]);
                pivot = Scalar(sigma[r]);
                b = art_col[r];
            }
            for (int j = 0; j < N_; ++j) at(r, j) /= pivot;
            basis_[r] = b;
            is_basic_[b] = 1;
        }
    }

    Scalar& at(int r, int j) { return T_[static_cast<std::size_t>(r) * N_ + j]; }

    // basic values from the nonbasic ones: x_B = -sum_{j nonbasic} T_rj x_j
    void recompute_basics() {
        for (int r = 0; r < m_; ++r) {
            Scalar v(0);
            for (int j = 0; j < N_; ++j)
                if (!is_basic_[j] && val_[j] != Scalar(0)) v -= at(r, j) * val_[j];
            val_[basis_[r]] = v;
        }
    }

    // false when unbounded
    bool run(const std::vector<Scalar>& cost) {
        const Scalar eps = ScalarTraits<Scalar>::eps();
        const std::int64_t cap = opt_.max_iterations > 0 ? opt_.max_iterations : 50LL * (m_ + N_) + 1000;
        bool bland = false;
        int degenerate = 0;
        std::vector<Scalar> d(N_);
        for (;;) {
            if (iters_ >= cap)
                throw NumericalError("simplex iteration cap reached (" + std::to_string(cap) + " iterations, " +
                                     std::to_string(m_) + " rows, " + std::to_string(N_) + " columns)");
            for (int j = 0; j < N_; ++j) {
                if (is_basic_[j]) continue;
                Scalar z(0);
                for (int r = 0; r < m_; ++r) {
                    const Scalar& c = cost[basis_[r]];
                    if (c != Scalar(0)) z += c * at(r, j);
                }
                d[j] = cost[j] - z;
            }
            int enter = -1, dir = 0;
            Scalar best(0);
            for (int j = 0; j < N_; ++j) {
                if (is_basic_[j]) continue;
                if (lo_[j] && up_[j] && *lo_[j] == *up_[j]) continue;
                int dj = 0;
                if (d[j] > eps && (!up_[j] || val_[j] < *up_[j])) dj = 1;
                else if (d[j] < -eps && (!lo_[j] || val_[j] > *lo_[j])) dj = -1;
                if (!dj) continue;
                Scalar score = abs_(d[j]);
                if (bland) {
                    enter = j;
                    dir = dj;
                    break;
                }
                if (enter < 0 || score > best) {
                    enter = j;
                    dir = dj;
                    best = score;
                }
            }
            if (enter < 0) return true;
            ++iters_;

            // ratio test
            std::optional<Scalar> theta;
            int leave_row = -1;
            Scalar leave_alpha(0);
            if (lo_[enter] && up_[enter]) theta = *up_[enter] - *lo_[enter];
            for (int r = 0; r < m_; ++r) {
                Scalar alpha = -at(r, enter) * Scalar(dir); // change of basic per unit step
                if (abs_(alpha) <= eps) continue;
                const int b = basis_[r];
                std::optional<Scalar> lim;
                if (alpha < Scalar(0) && lo_[b]) lim = (val_[b] - *lo_[b]) / -alpha;
                if (alpha > Scalar(0) && up_[b]) lim = (*up_[b] - val_[b]) / alpha;
                if (!lim) continue;
                if (*lim < Scalar(0)) *lim = Scalar(0);
                bool take = !theta || *lim < *theta;
                if (!take && theta && *lim == *theta && leave_row >= 0) {
                    if (bland)
                        take = b < basis_[leave_row];
                    else
                        take = abs_(alpha) > abs_(leave_alpha);
                }
                if (take) {
                    theta = lim;
                    leave_row = r;
                    leave_alpha = alpha;
                }
            }
            if (!theta) return false;

            const Scalar step = *theta;
            if (step <= eps) {
                if (++degenerate >= opt_.degenerate_switch) bland = true;
            } else {
                degenerate = 0;
            }
            val_[enter] += Scalar(dir) * step;
            for (int r = 0; r < m_; ++r) {
                Scalar alpha = -at(r, enter) * Scalar(dir);
                if (alpha != Scalar(0)) val_[basis_[r]] += alpha * step;
            }
            if (leave_row < 0) continue; // bound flip

            const int leaving = basis_[leave_row];
            // snap the leaving variable onto the bound it reached
            if (leave_alpha < Scalar(0))
                val_[leaving] = *lo_[leaving];
            else
                val_[leaving] = *up_[leaving];
            pivot(leave_row, enter);
        }
    }

    void pivot(int r, int j) {
        const Scalar p = at(r, j);
        for (int c = 0; c < N_; ++c) at(r, c) /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            const Scalar f = at(i, j);
            if (f == Scalar(0)) continue;
            for (int c = 0; c < N_; ++c) {
                const Scalar& rc = at(r, c);
                if (rc != Scalar(0)) at(i, c) -= f * rc;
            }
            at(i, j) = Scalar(0);
        }
        is_basic_[basis_[r]] = 0;
        basis_[r] = j;
        is_basic_[j] = 1;
    }

    const LinearProgram<Scalar>& lp_;
    SimplexOptions opt_;
    int n_, m_, N_ = 0;
    std::vector<Opt> lo_, up_;
    std::vector<Scalar> val_, T_;
    std::vector<int> basis_;
    std::vector<char> is_basic_;
    std::vector<int> artificials_;
    std::int64_t iters_ = 0;
};

} // namespace detail

template <class Scalar>
LpResult<Scalar> solve_lp(const LinearProgram<Scalar>& lp, const SimplexOptions& opt = {}) {
    for (const auto& row : lp.rows)
        for (const auto& [j, a] : row.coeffs)
            if (j < 0 || j >= lp.cols()) throw ConfigError("row references unknown column " + std::to_string(j));
    return detail::BoundedSimplex<Scalar>(lp, opt).solve();
}

} // namespace girgmotif
