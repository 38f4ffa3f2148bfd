#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "girgmotif/experiment.hpp"
#include "girgmotif/theory.hpp"

using namespace girgmotif;

namespace {

// Shared key/value options; a given flag overrides the same key from --config.
struct Keys {
    std::map<std::pair<CLI::App*, std::string>, std::string> v;
    std::map<CLI::App*, std::map<std::string, CLI::Option*>> opt;
    std::string config;
    int section = 0;

    void add(CLI::App* app, const std::string& key, const std::string& help) {
        std::string flag = "--" + key;
        for (auto& c : flag)
            if (c == '_') c = '-';
        opt[app][key] = app->add_option(flag, v[{app, key}], help);
    }

    ExperimentConfig resolve(CLI::App* sub) const {
        ExperimentConfig cfg;
        if (!config.empty()) {
            auto all = load_config(config);
            if (section < 0 || section >= static_cast<int>(all.size()))
                throw ConfigError("config has no [experiment] section #" + std::to_string(section));
            cfg = all[section];
        }
        for (const auto& [key, o] : opt.at(sub))
            if (o->count()) cfg.set(key, v.at({sub, key}));
        cfg.command = sub->get_name();
        cfg.validate();
        return cfg;
    }
};

CLI::App* command(CLI::App& app, Keys& keys, const std::string& name, const std::string& help,
                  std::initializer_list<const char*> wanted) {
    static const std::map<std::string, std::string> helps = {
        {"pattern", "pattern name (K4, C5, P3, star3, paw, diamond), 'k=..; edges=..', or JSON"},
        {"tau", "power-law exponent in (2,3)"},
        {"gamma", "kernel exponent > 1, or inf"},
        {"d", "torus dimension"},
        {"mode", "general | induced"},
        {"n", "vertex counts, e.g. 1000,2000 or 2^10..2^14"},
        {"seeds", "number of seeds"},
        {"seed", "first seed"},
        {"eps", "class window width"},
        {"class_alpha", "weight exponents of a class, comma separated"},
        {"class_beta", "distance exponents of a class, row-major pairs"},
        {"k", "pattern size"},
        {"step", "grid step"},
        {"samples", "Monte Carlo samples"},
        {"radius", "initial truncation radius"},
        {"output", "output file (default stdout)"},
        {"out_dir", "output directory"},
        {"threads", "worker threads"},
    };
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", keys.config, "experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--section", keys.section, "index of the [experiment] section to use");
    for (const char* k : wanted) keys.add(sub, k, helps.at(k));
    return sub;
}

struct Out {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Out(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw ConfigError("cannot write " + path);
        os = &file;
    }
    std::ostream& operator*() { return *os; }
};

Pattern single_pattern(const ExperimentConfig& cfg) {
    if (cfg.patterns.size() != 1) throw ConfigError("exactly one pattern is required");
    return pattern_from_spec(cfg.patterns[0]);
}

GirgParams host(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed) {
    GirgParams p;
    p.n = n;
    p.d = cfg.d;
    p.tau = cfg.tau;
    p.gamma = cfg.gamma;
    p.seed = seed;
    return p;
}

std::size_t single_n(const ExperimentConfig& cfg) {
    if (cfg.n_grid.size() != 1) throw ConfigError("exactly one n is required");
    return cfg.n_grid[0];
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subgraph counts and optimal structures in geometric inhomogeneous random graphs"};
    app.require_subcommand(1);
    Keys keys;

    bool exact = false, no_unique = false;
    std::string kind = "auto";
    double fixed_weight = 0.0;

    auto* solve = command(app, keys, "solve", "solve the exponent MILP for one pattern",
                          {"pattern", "tau", "gamma", "d", "mode", "threads", "output"});
    solve->add_flag("--exact", exact, "rational arithmetic");
    solve->add_flag("--no-uniqueness", no_unique, "skip the uniqueness re-solves");
    auto* atlas = command(app, keys, "atlas", "optimal structures of all connected patterns of size k",
                          {"k", "tau", "gamma", "d", "mode", "threads", "output", "out_dir"});
    auto* sample = command(app, keys, "sample", "sample a GIRG as an edge list plus JSON sidecar",
                           {"n", "tau", "gamma", "d", "seed", "threads", "output"});
    auto* count = command(app, keys, "count", "count a pattern on sampled GIRGs",
                          {"pattern", "n", "tau", "gamma", "d", "mode", "seeds", "seed", "eps", "class_alpha",
                           "class_beta", "threads", "output"});
    auto* scaling = command(app, keys, "scaling", "log-log scaling fit of pattern counts",
                            {"pattern", "n", "tau", "gamma", "d", "mode", "seeds", "seed", "eps", "class_alpha",
                             "class_beta", "threads", "output"});
    auto* constants = command(app, keys, "constants", "Monte Carlo limiting constants",
                              {"pattern", "tau", "gamma", "d", "mode", "samples", "radius", "seed", "threads",
                               "output"});
    constants->add_option("--kind", kind, "auto | geo | nongeo")->check(CLI::IsMember({"auto", "geo", "nongeo"}));
    auto* tree = command(app, keys, "tree-compare", "paired GIRG/IRG counts of a tree",
                         {"pattern", "n", "tau", "gamma", "d", "mode", "seeds", "seed", "threads", "output"});
    tree->add_option("--fixed-weight", fixed_weight, "give every vertex this weight");
    auto* dot = command(app, keys, "export-dot", "structure diagram of the optimizer",
                        {"pattern", "tau", "gamma", "d", "mode", "output"});
    auto* lp = command(app, keys, "export-lp", "MILP in LP file format", {"pattern", "tau", "gamma", "d", "mode", "output"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        auto* sub = app.get_subcommands().front();
        const auto cfg = keys.resolve(sub);
        Out out(cfg.output);

        if (sub == solve || sub == dot || sub == lp) {
            OptInstance inst{single_pattern(cfg), cfg.tau, cfg.gamma, cfg.d, cfg.mode};
            inst.validate();
            if (sub == lp) {
                write_lp(*out, build_milp<double>(inst));
            } else {
                SolveOptions so;
                so.exact = exact;
                so.uniqueness = !no_unique || sub == dot;
                so.threads = cfg.threads;
                auto rep = solve_instance(inst, so);
                if (sub == dot) *out << export_structure_dot(rep, cfg.tau);
                else *out << to_json(rep).dump(2) << '\n';
            }
        } else if (sub == atlas) {
            SolveOptions so;
            so.threads = cfg.threads;
            auto at = run_atlas(cfg.k, cfg.tau, cfg.gamma, cfg.d, cfg.mode, so);
            if (!cfg.out_dir.empty()) write_atlas(at, cfg.out_dir);
            auto j = to_json(at);
            *out << j.dump(2) << '\n';
            for (const auto& v : j["violations"]) std::cerr << "class violation: " << v.get<std::string>() << '\n';
        } else if (sub == sample) {
            auto g = sample_girg(host(cfg, single_n(cfg), cfg.seed_base), cfg.threads);
            write_edge_list(*out, g.graph);
            if (!cfg.output.empty()) {
                std::ofstream side(cfg.output + ".json");
                side << sidecar_json(g).dump(2) << '\n';
            }
        } else if (sub == count) {
            auto h = single_pattern(cfg);
            std::optional<VertexClassSpec> cls;
            if (!cfg.class_alpha.empty()) cls = VertexClassSpec{cfg.class_alpha, cfg.class_beta, cfg.eps};
            write_count_csv_header(*out);
            for (std::size_t n : cfg.n_grid)
                for (int s = 0; s < cfg.seeds; ++s) {
                    auto g = sample_girg(host(cfg, n, cfg.seed_base + s), cfg.threads);
                    auto t0 = std::chrono::steady_clock::now();
                    auto c = cls ? count_in_class(g, h, cfg.mode, *cls, cfg.threads)
                                 : count_ordered(g.graph, h, cfg.mode, cfg.threads);
                    double ms =
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                    write_count_csv_row(*out, n, cfg.seed_base + s, h, cfg.mode, c, ms);
                }
        } else if (sub == scaling) {
            auto res = run_scaling_experiment(cfg);
            write_scaling_csv(*out, res.rows);
            for (const auto& f : res.fits) {
                std::cerr << f.pattern << ": slope " << f.fit.slope << ", f* " << f.f_star << ", residuals";
                for (double r : f.fit.residuals) std::cerr << ' ' << r;
                std::cerr << '\n';
                for (std::size_t n : f.zero_n) std::cerr << "  zero mean count at n=" << n << ", left out of the fit\n";
            }
        } else if (sub == constants) {
            auto h = single_pattern(cfg);
            McOptions mo;
            mo.samples = cfg.samples;
            mo.radius = cfg.radius;
            mo.seed = cfg.seed_base;
            mo.threads = cfg.threads;
            bool geo = kind == "geo";
            if (kind == "auto")
                geo = h.k() == 2 || hamiltonian_regime(h.k(), cfg.tau).regime == Regime::Geometric;
            auto e = geo ? mc_geo_constant(h, cfg.tau, cfg.gamma, cfg.d, cfg.mode, mo)
                         : mc_nongeo_constant(h, cfg.tau, cfg.gamma, cfg.d, cfg.mode, mo);
            *out << to_json(e, h, cfg.mode).dump(2) << '\n';
        } else if (sub == tree) {
            TreeCompareOptions to;
            to.seeds = cfg.seeds;
            to.mode = cfg.mode;
            to.threads = cfg.threads;
            if (fixed_weight > 0) to.fixed_weight = fixed_weight;
            auto res = run_tree_compare(single_pattern(cfg), host(cfg, single_n(cfg), cfg.seed_base), to);
            *out << "seed,girg,irg,ratio\n";
            for (const auto& r : res.rows) *out << r.seed << ',' << r.girg << ',' << r.irg << ',' << r.ratio << '\n';
            std::cerr << "ratio min " << res.min_ratio << ", max " << res.max_ratio << ", geometric mean "
                      << std::exp(res.mean_log_ratio) << '\n';
        }
        return 0;
    } catch (const ConfigError& e) { // includes pattern parse errors
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
