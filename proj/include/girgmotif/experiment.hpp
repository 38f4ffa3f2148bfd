#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "counting.hpp"
#include "errors.hpp"
#include "girg.hpp"
#include "milp.hpp"
#include "parallel.hpp"
#include "pattern.hpp"

namespace girgmotif {

struct ExperimentConfig {
    std::string command;
    std::vector<std::string> patterns;
    double tau = 2.5;
    double gamma = 2.0;
    int d = 1;
    Variant mode = Variant::General;
    std::vector<std::size_t> n_grid;
    int seeds = 10;
    std::uint64_t seed_base = 1;
    double eps = 0.5;
    std::vector<double> class_alpha; ///< empty: count all copies
    std::vector<double> class_beta;
    int k = 4;
    double step = 0.02;
    std::int64_t samples = 1 << 20;
    double radius = 1e100;
    std::string output;
    std::string out_dir;
    unsigned threads = 1;

    void set(const std::string& key, const std::string& value);
    void validate() const;
    std::string to_text() const;
};

namespace detail {

inline std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (auto t = trim(cur); !t.empty()) out.push_back(t);
    return out;
}

inline double to_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "infinity") return infinity;
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad number for '" + key + "': '" + v + "'");
    }
}

inline long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for '" + key + "': '" + v + "'");
    }
}

// "1024", "2^12", or the power range "2^10..2^14"
inline std::vector<std::size_t> parse_n_item(const std::string& item) {
    auto pow2 = [&](const std::string& t) -> std::size_t {
        if (t.rfind("2^", 0) == 0) {
            long long e = to_int("n", t.substr(2));
            if (e < 1 || e > 40) throw ConfigError("n exponent out of range: " + t);
            return std::size_t{1} << e;
        }
        long long x = to_int("n", t);
        if (x < 2) throw ConfigError("n must be at least 2");
        return static_cast<std::size_t>(x);
    };
    auto dots = item.find("..");
    if (dots == std::string::npos) return {pow2(item)};
    const std::string a = trim(item.substr(0, dots)), b = trim(item.substr(dots + 2));
    if (a.rfind("2^", 0) != 0 || b.rfind("2^", 0) != 0) throw ConfigError("n ranges must be powers of two: " + item);
    std::vector<std::size_t> out;
    for (std::size_t x = pow2(a); x <= pow2(b); x *= 2) out.push_back(x);
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

} // namespace detail

inline void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const std::string v = detail::trim(raw);
    if (key == "command") command = v;
    else if (key == "pattern" || key == "patterns") patterns = detail::split(v, '|');
    else if (key == "tau") tau = detail::to_double(key, v);
    else if (key == "gamma") gamma = detail::to_double(key, v);
    else if (key == "d") d = static_cast<int>(detail::to_int(key, v));
    else if (key == "mode") mode = parse_variant(v);
    else if (key == "n") {
        n_grid.clear();
        for (const auto& item : detail::split(v, ','))
            for (std::size_t x : detail::parse_n_item(item)) n_grid.push_back(x);
    } else if (key == "seeds") seeds = static_cast<int>(detail::to_int(key, v));
    else if (key == "seed_base" || key == "seed") seed_base = static_cast<std::uint64_t>(detail::to_int(key, v));
    else if (key == "eps") eps = detail::to_double(key, v);
    else if (key == "class_alpha" || key == "class_beta") {
        std::vector<double> xs;
        for (const auto& item : detail::split(v, ',')) xs.push_back(detail::to_double(key, item));
        (key == "class_alpha" ? class_alpha : class_beta) = xs;
    } else if (key == "k") k = static_cast<int>(detail::to_int(key, v));
    else if (key == "step") step = detail::to_double(key, v);
    else if (key == "samples") samples = detail::to_int(key, v);
    else if (key == "radius") radius = detail::to_double(key, v);
    else if (key == "output") output = v;
    else if (key == "out_dir") out_dir = v;
    else if (key == "threads") threads = static_cast<unsigned>(std::max(1LL, detail::to_int(key, v)));
    else throw ConfigError("unknown config key '" + key + "'");
}

inline void ExperimentConfig::validate() const {
    if (!(tau > 2.0 && tau < 3.0)) throw ConfigError("tau must lie in (2,3)");
    if (!(gamma > 1.0)) throw ConfigError("gamma must be > 1 or inf");
    if (d < 1) throw ConfigError("d must be at least 1");
    if (seeds < 1) throw ConfigError("seeds must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0,1)");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n grid must be strictly increasing");
    for (std::size_t x : n_grid)
        if (x < 2) throw ConfigError("n must be at least 2");
    if (class_alpha.empty() != class_beta.empty()) throw ConfigError("class_alpha and class_beta go together");
    if (step <= 0.0) throw ConfigError("step must be positive");
    if (samples < 1) throw ConfigError("samples must be positive");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    for (const auto& p : patterns) pattern_from_spec(p);
}

inline std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os << std::setprecision(17) << "[experiment]\n";
    if (!command.empty()) os << "command = " << command << '\n';
    if (!patterns.empty()) {
        os << "pattern = ";
        for (std::size_t i = 0; i < patterns.size(); ++i) os << (i ? " | " : "") << patterns[i];
        os << '\n';
    }
    os << "tau = " << tau << '\n';
    os << "gamma = " << (std::isinf(gamma) ? std::string("inf") : detail::join(std::vector<double>{gamma})) << '\n';
    os << "d = " << d << '\n' << "mode = " << to_string(mode) << '\n';
    if (!n_grid.empty()) os << "n = " << detail::join(n_grid) << '\n';
    os << "seeds = " << seeds << '\n' << "seed_base = " << seed_base << '\n' << "eps = " << eps << '\n';
    if (!class_alpha.empty()) os << "class_alpha = " << detail::join(class_alpha) << '\n';
    if (!class_beta.empty()) os << "class_beta = " << detail::join(class_beta) << '\n';
    os << "k = " << k << '\n' << "step = " << step << '\n' << "samples = " << samples << '\n';
    os << "radius = " << radius << '\n';
    if (!output.empty()) os << "output = " << output << '\n';
    if (!out_dir.empty()) os << "out_dir = " << out_dir << '\n';
    os << "threads = " << threads << '\n';
    return os.str();
}

/// One config per `[experiment]` section; `#` starts a comment.
inline std::vector<ExperimentConfig> parse_config(std::istream& is) {
    std::vector<ExperimentConfig> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line != "[experiment]") throw ConfigError("line " + std::to_string(lineno) + ": unknown section " + line);
            out.emplace_back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (out.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside [experiment]");
        out.back().set(detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return out;
}

inline std::vector<ExperimentConfig> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------- scaling

struct ScalingRow {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string pattern;
    Variant mode = Variant::General;
    std::uint64_t count = 0;
    double norm_count = 0.0; ///< count / n^{f*}
    double elapsed_ms = 0.0;
};

struct LinearFit {
    double slope = 0.0, intercept = 0.0;
    std::vector<double> x, y, residuals;
};

/// Ordinary least squares of y on x.
inline LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw NumericalError("a line fit needs at least two points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericalError("degenerate fit: all x equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.x = x;
    f.y = y;
    for (std::size_t i = 0; i < x.size(); ++i) f.residuals.push_back(y[i] - f.intercept - f.slope * x[i]);
    return f;
}

struct PatternFit {
    std::string pattern;
    double f_star = 0.0;
    LinearFit fit;
    std::vector<std::size_t> zero_n; ///< n with mean count 0, left out of the fit
};

/// Fit of log mean count against log n for one pattern, rows in file order.
inline PatternFit fit_scaling(const std::vector<ScalingRow>& rows, const std::string& pattern) {
    std::map<std::size_t, std::pair<double, int>> acc;
    for (const auto& r : rows)
        if (r.pattern == pattern) {
            auto& a = acc[r.n];
            a.first += static_cast<double>(r.count);
            ++a.second;
        }
    PatternFit pf;
    pf.pattern = pattern;
    std::vector<double> x, y;
    for (const auto& [n, a] : acc) {
        if (a.first == 0.0) {
            pf.zero_n.push_back(n);
            continue;
        }
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(a.first / a.second));
    }
    pf.fit = ols(x, y);
    return pf;
}

struct ScalingResult {
    std::vector<ScalingRow> rows;
    std::vector<PatternFit> fits;
};

/// Each (n, seed) cell samples one host and counts every pattern on it.
inline ScalingResult run_scaling_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.patterns.empty()) throw ConfigError("scaling needs at least one pattern");
    if (cfg.n_grid.size() < 2) throw ConfigError("scaling needs at least two sizes");
    std::vector<Pattern> hs;
    std::vector<double> fstar;
    for (const auto& spec : cfg.patterns) {
        hs.push_back(pattern_from_spec(spec));
        if (!hs.back().connected()) throw ConfigError("scaling needs connected patterns: " + spec);
        SolveOptions so;
        so.uniqueness = false;
        fstar.push_back(solve_instance({hs.back(), cfg.tau, cfg.gamma, cfg.d, cfg.mode}, so).f_star);
    }
    std::optional<VertexClassSpec> cls;
    if (!cfg.class_alpha.empty()) cls = VertexClassSpec{cfg.class_alpha, cfg.class_beta, cfg.eps};

    const std::size_t cells = cfg.n_grid.size() * static_cast<std::size_t>(cfg.seeds);
    std::vector<std::vector<ScalingRow>> out(cells);
    parallel_blocks(cells, cfg.threads, 1, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            GirgParams p;
            p.n = cfg.n_grid[c / cfg.seeds];
            p.d = cfg.d;
            p.tau = cfg.tau;
            p.gamma = cfg.gamma;
            p.seed = cfg.seed_base + c % cfg.seeds;
            auto g = sample_girg(p);
            for (std::size_t h = 0; h < hs.size(); ++h) {
                auto t0 = std::chrono::steady_clock::now();
                std::uint64_t cnt = cls ? count_in_class(g, hs[h], cfg.mode, *cls) : count_ordered(g.graph, hs[h], cfg.mode);
                auto t1 = std::chrono::steady_clock::now();
                ScalingRow r;
                r.n = p.n;
                r.seed = p.seed;
                r.pattern = hs[h].to_string();
                r.mode = cfg.mode;
                r.count = cnt;
                r.norm_count = static_cast<double>(cnt) / std::pow(static_cast<double>(p.n), fstar[h]);
                r.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                out[c].push_back(std::move(r));
            }
        }
    });
    ScalingResult res;
    for (auto& v : out)
        for (auto& r : v) res.rows.push_back(std::move(r));
    for (std::size_t h = 0; h < hs.size(); ++h) {
        res.fits.push_back(fit_scaling(res.rows, hs[h].to_string()));
        res.fits.back().f_star = fstar[h];
    }
    return res;
}

inline void write_scaling_csv(std::ostream& os, const std::vector<ScalingRow>& rows) {
    os << "n,seed,pattern,mode,count,norm_count,elapsed_ms\n";
    const auto old = os.precision(17);
    for (const auto& r : rows)
        os << r.n << ',' << r.seed << ',' << csv_quote(r.pattern) << ',' << to_string(r.mode) << ',' << r.count << ','
           << r.norm_count << ',' << r.elapsed_ms << '\n';
    os.precision(old);
}

namespace detail {

inline std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> f(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') f.back() += '"', ++i;
            else if (c == '"') quoted = false;
            else f.back() += c;
        } else if (c == '"') quoted = true;
        else if (c == ',') f.emplace_back();
        else if (c != '\r') f.back() += c;
    }
    return f;
}

} // namespace detail

inline std::vector<ScalingRow> read_scaling_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || detail::trim(line) != "n,seed,pattern,mode,count,norm_count,elapsed_ms")
        throw ConfigError("not a scaling CSV: bad header");
    std::vector<ScalingRow> rows;
    while (std::getline(is, line)) {
        if (detail::trim(line).empty()) continue;
        auto f = detail::csv_fields(line);
        if (f.size() != 7) throw ConfigError("scaling CSV row has " + std::to_string(f.size()) + " fields");
        ScalingRow r;
        r.n = static_cast<std::size_t>(detail::to_int("n", f[0]));
        r.seed = static_cast<std::uint64_t>(detail::to_int("seed", f[1]));
        r.pattern = f[2];
        r.mode = parse_variant(f[3]);
        r.count = std::stoull(f[4]);
        r.norm_count = detail::to_double("norm_count", f[5]);
        r.elapsed_ms = detail::to_double("elapsed_ms", f[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------- DOT

namespace detail {

inline const char* class_color(AlphaClass c) {
    switch (c) {
    case AlphaClass::Zero: return "#4477aa";
    case AlphaClass::TauRatio: return "#228833";
    case AlphaClass::Half: return "#ee6677";
    case AlphaClass::Max: return "#ccbb44";
    case AlphaClass::Other: return "#aa3377";
    }
    return "#aa3377";
}

// beta = -1/d is black, beta = 0 is light
inline std::string beta_shade(double beta, int d) {
    double t = std::clamp((beta + 1.0 / d) * d, 0.0, 1.0);
    int level = static_cast<int>(std::lround(t * 0xd0));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
    return buf;
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(x) < 5e-10 ? 0.0 : x);
    return buf;
}

} // namespace detail

inline std::string export_structure_dot(const SolveReport& r, double tau) {
    const auto& in = r.instance;
    const int k = in.pattern.k();
    std::ostringstream os;
    os << "graph \"" << in.pattern.to_string() << "\" {\n";
    os << "  label=\"tau=" << detail::fmt(tau) << ", " << to_string(in.variant) << ", f*=" << detail::fmt(r.f_star)
       << "\";\n";
    os << "  node [shape=circle, style=filled, fontname=Helvetica];\n";
    for (int i = 1; i <= k; ++i) {
        const double a = r.optimizer.alpha[i - 1];
        os << "  " << i << " [label=\"" << detail::fmt(a) << "\", fillcolor=\""
           << detail::class_color(classify_alpha_value(a, tau)) << "\"];\n";
    }
    const char* absent = in.variant == Variant::General ? "dashed" : "dotted";
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
            const double b = r.optimizer.b(k, i, j);
            const bool edge = in.pattern.has_edge(i, j);
            os << "  " << i << " -- " << j << " [style=" << (edge ? "solid" : absent) << ", color=\""
               << detail::beta_shade(b, in.dim) << "\", label=\"" << detail::fmt(b) << "\"];\n";
        }
    if (r.unique != Uniqueness::Unique)
        os << "  note [shape=box, style=filled, fillcolor=gray, label=\"" << to_string(r.unique) << "\"];\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------- atlas

struct AtlasRow {
    SolveReport report;
    std::vector<AlphaClass> classes;
};

struct Atlas {
    int k = 0;
    double tau = 0.0, gamma = 2.0;
    int d = 1;
    Variant variant = Variant::General;
    std::vector<AtlasRow> rows;
};

/// Connected patterns of size k in enumeration order.
inline Atlas run_atlas(int k, double tau, double gamma, int d, Variant variant, const SolveOptions& opt = {}) {
    if (k < 1 || k > 5) throw ConfigError("atlas supports 1 <= k <= 5");
    Atlas at{k, tau, gamma, d, variant, {}};
    for (const auto& p : enumerate_patterns(k, true)) {
        AtlasRow row;
        row.report = solve_instance({p, tau, gamma, d, variant}, opt);
        for (double a : row.report.optimizer.alpha) row.classes.push_back(classify_alpha_value(a, tau));
        at.rows.push_back(std::move(row));
    }
    return at;
}

/// Unique-optimizer rows whose alpha falls outside the four classes.
inline std::vector<std::string> conjecture_violations(const Atlas& at, double tol = 1e-6) {
    std::vector<std::string> out;
    for (const auto& row : at.rows) {
        if (row.report.unique != Uniqueness::Unique) continue;
        for (std::size_t i = 0; i < row.report.optimizer.alpha.size(); ++i) {
            const double a = row.report.optimizer.alpha[i];
            if (classify_alpha_value(a, at.tau, tol) == AlphaClass::Other)
                out.push_back(row.report.instance.pattern.to_string() + " (tau=" + detail::fmt(at.tau) + ", " +
                              to_string(at.variant) + "): alpha_" + std::to_string(i + 1) + " = " +
                              std::to_string(a));
        }
    }
    return out;
}

inline std::string atlas_dot_name(const Atlas& at, std::size_t index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "k%d_%s_%02zu.dot", at.k, to_string(at.variant), index + 1);
    return buf;
}

/// Timings are left out so equal configs give byte-identical output.
inline nlohmann::json to_json(const Atlas& at) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < at.rows.size(); ++i) {
        auto j = to_json(at.rows[i].report, false);
        nlohmann::json cls = nlohmann::json::array();
        for (auto c : at.rows[i].classes) cls.push_back(to_string(c));
        j["classes"] = cls;
        j["dot"] = atlas_dot_name(at, i);
        rows.push_back(j);
    }
    return {{"k", at.k},
            {"tau", at.tau},
            {"gamma", gamma_json(at.gamma)},
            {"d", at.d},
            {"variant", to_string(at.variant)},
            {"rows", rows},
            {"violations", conjecture_violations(at)}};
}

inline void write_atlas(const Atlas& at, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream js(dir / ("atlas_k" + std::to_string(at.k) + "_" + to_string(at.variant) + ".json"));
    js << to_json(at).dump(2) << '\n';
    for (std::size_t i = 0; i < at.rows.size(); ++i) {
        std::ofstream dot(dir / atlas_dot_name(at, i));
        dot << export_structure_dot(at.rows[i].report, at.tau);
    }
    if (!js) throw ConfigError("cannot write atlas output in " + dir.string());
}

// ---------------------------------------------------------------- trees

struct TreeCompareRow {
    std::uint64_t seed = 0;
    std::uint64_t girg = 0, irg = 0;
    double ratio = 0.0; ///< girg / irg; 1 when both vanish
};

struct TreeCompareResult {
    std::vector<TreeCompareRow> rows;
    double min_ratio = 0.0, max_ratio = 0.0;
    double mean_log_ratio = 0.0;
};

struct TreeCompareOptions {
    int seeds = 10;
    Variant mode = Variant::General;
    std::optional<double> fixed_weight; ///< replace the Pareto draw by a constant
    unsigned threads = 1;
};

/// GIRG and IRG hosts share the weight sequence of each seed.
inline TreeCompareResult run_tree_compare(const Pattern& tree, GirgParams params, const TreeCompareOptions& opt = {}) {
    if (!tree.is_tree()) throw ConfigError("tree comparison needs a tree pattern: " + tree.to_string());
    if (opt.seeds < 1) throw ConfigError("seeds must be positive");
    params.validate();
    TreeCompareResult res;
    res.min_ratio = infinity;
    const std::uint64_t base = params.seed;
    for (int s = 0; s < opt.seeds; ++s) {
        params.seed = base + static_cast<std::uint64_t>(s);
        std::vector<double> w;
        if (opt.fixed_weight) {
            w.assign(params.n, *opt.fixed_weight);
        } else {
            std::mt19937_64 wrng(derive_seed(params.seed, detail::weight_stream));
            w = sample_weights(params.n, params.tau, wrng);
        }
        auto g = sample_girg_with_weights(params, w, opt.threads);
        auto h = sample_irg_with_weights(params, std::move(w), opt.threads);
        TreeCompareRow row;
        row.seed = params.seed;
        row.girg = count_ordered(g.graph, tree, opt.mode, opt.threads);
        row.irg = count_ordered(h.graph, tree, opt.mode, opt.threads);
        row.ratio = row.irg ? static_cast<double>(row.girg) / row.irg : (row.girg ? infinity : 1.0);
        res.min_ratio = std::min(res.min_ratio, row.ratio);
        res.max_ratio = std::max(res.max_ratio, row.ratio);
        res.mean_log_ratio += std::log(row.ratio) / opt.seeds;
        res.rows.push_back(row);
    }
    return res;
}

} // namespace girgmotif
