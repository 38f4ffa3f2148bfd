#include <gtest/gtest.h>

#include <sstream>

#include "girgmotif/experiment.hpp"

using namespace girgmotif;

namespace {

SolveReport solve(const Pattern& p, double tau, Variant v = Variant::General) {
    return solve_instance({p, tau, 2.0, 1, v});
}

int occurrences(const std::string& s, const std::string& needle) {
    int c = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++c;
    return c;
}

} // namespace

TEST(Config, ParsesSections) {
    std::istringstream in(R"(
# two runs
[experiment]
command = scaling
pattern = triangle | k=3; edges=1-2,2-3
tau = 2.2
gamma = inf
n = 2^10..2^12, 10000
seeds = 4
seed_base = 100

[experiment]
mode = induced
d = 2
)");
    auto cs = parse_config(in);
    ASSERT_EQ(cs.size(), 2u);
    EXPECT_EQ(cs[0].command, "scaling");
    EXPECT_EQ(cs[0].patterns.size(), 2u);
    EXPECT_EQ(pattern_from_spec(cs[0].patterns[1]), make_path(3));
    EXPECT_TRUE(std::isinf(cs[0].gamma));
    EXPECT_EQ(cs[0].n_grid, (std::vector<std::size_t>{1024, 2048, 4096, 10000}));
    EXPECT_EQ(cs[0].seed_base, 100u);
    EXPECT_EQ(cs[1].mode, Variant::Induced);
    EXPECT_EQ(cs[1].d, 2);
    EXPECT_EQ(cs[1].tau, 2.5);
    EXPECT_NO_THROW(cs[0].validate());
}

TEST(Config, TextRoundTrip) {
    ExperimentConfig c;
    c.patterns = {"C4", "k=3; edges=1-2"};
    c.tau = 2.3;
    c.gamma = infinity;
    c.n_grid = {100, 200};
    c.class_alpha = {0, 0.5};
    c.class_beta = {-1};
    std::istringstream in(c.to_text());
    auto back = parse_config(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].to_text(), c.to_text());
}

TEST(Config, Errors) {
    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return parse_config(in);
    };
    EXPECT_THROW(parse("tau = 2.5\n"), ConfigError);
    EXPECT_THROW(parse("[other]\n"), ConfigError);
    EXPECT_THROW(parse("[experiment]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(parse("[experiment]\ntau = abc\n"), ConfigError);
    EXPECT_THROW(parse("[experiment]\nn = 2^5..100\n"), ConfigError);
    auto c = parse("[experiment]\nn = 400, 200\n");
    EXPECT_THROW(c[0].validate(), ConfigError);
    c = parse("[experiment]\ntau = 3.5\n");
    EXPECT_THROW(c[0].validate(), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST(Ols, ExactLine) {
    auto f = ols({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    for (double r : f.residuals) EXPECT_NEAR(r, 0.0, 1e-12);
    EXPECT_THROW(ols({1}, {1}), NumericalError);
    EXPECT_THROW(ols({1, 1}, {1, 2}), NumericalError);
}

TEST(Scaling, EdgeSlopeNearOne) {
    ExperimentConfig c;
    c.patterns = {"edge"};
    c.n_grid = {1000, 2000, 4000, 8000};
    c.seeds = 3;
    auto r = run_scaling_experiment(c);
    ASSERT_EQ(r.rows.size(), 12u);
    ASSERT_EQ(r.fits.size(), 1u);
    EXPECT_NEAR(r.fits[0].fit.slope, 1.0, 0.1);
    EXPECT_NEAR(r.fits[0].f_star, 1.0, 1e-7);
    // rows in (n, seed) order with seed_base + index
    EXPECT_EQ(r.rows[0].n, 1000u);
    EXPECT_EQ(r.rows[0].seed, 1u);
    EXPECT_EQ(r.rows[2].seed, 3u);
    EXPECT_EQ(r.rows[3].n, 2000u);
    for (const auto& row : r.rows) EXPECT_EQ(row.count % 2, 0u);
}

TEST(Scaling, CsvRoundTripGivesIdenticalSlope) {
    ExperimentConfig c;
    c.patterns = {"triangle", "P3"};
    c.tau = 2.7;
    c.n_grid = {500, 1000, 2000};
    c.seeds = 2;
    auto r = run_scaling_experiment(c);
    std::stringstream io;
    write_scaling_csv(io, r.rows);
    auto rows = read_scaling_csv(io);
    ASSERT_EQ(rows.size(), r.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].pattern, r.rows[i].pattern);
        EXPECT_EQ(rows[i].count, r.rows[i].count);
        EXPECT_EQ(rows[i].norm_count, r.rows[i].norm_count);
    }
    for (const auto& f : r.fits) EXPECT_EQ(fit_scaling(rows, f.pattern).fit.slope, f.fit.slope);
}

TEST(Scaling, ThreadsDoNotChangeRows) {
    ExperimentConfig c;
    c.patterns = {"triangle"};
    c.n_grid = {300, 600};
    c.seeds = 3;
    auto a = run_scaling_experiment(c);
    c.threads = 3;
    auto b = run_scaling_experiment(c);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].n, b.rows[i].n);
        EXPECT_EQ(a.rows[i].seed, b.rows[i].seed);
        EXPECT_EQ(a.rows[i].count, b.rows[i].count);
    }
}

TEST(Scaling, ZeroCountsExcludedAndFlagged) {
    std::vector<ScalingRow> rows;
    for (std::size_t n : {100, 200, 400, 800}) {
        ScalingRow r;
        r.n = n;
        r.pattern = "p";
        r.count = n == 100 ? 0 : n * n;
        rows.push_back(r);
    }
    auto f = fit_scaling(rows, "p");
    EXPECT_EQ(f.zero_n, (std::vector<std::size_t>{100}));
    EXPECT_NEAR(f.fit.slope, 2.0, 1e-12);
    EXPECT_EQ(f.fit.x.size(), 3u);
}

TEST(Scaling, InClassCounts) {
    ExperimentConfig c;
    c.patterns = {"triangle"};
    c.tau = 2.7;
    c.n_grid = {500, 1000};
    c.seeds = 2;
    auto all = run_scaling_experiment(c);
    c.class_alpha = {0, 0, 0};
    c.class_beta = {-1, -1, -1};
    c.eps = 0.3;
    auto cls = run_scaling_experiment(c);
    for (std::size_t i = 0; i < all.rows.size(); ++i) EXPECT_LE(cls.rows[i].count, all.rows[i].count);
}

TEST(Scaling, CsvErrors) {
    std::istringstream bad("a,b\n");
    EXPECT_THROW(read_scaling_csv(bad), ConfigError);
    std::istringstream short_row("n,seed,pattern,mode,count,norm_count,elapsed_ms\n1,2,3\n");
    EXPECT_THROW(read_scaling_csv(short_row), ConfigError);
}

TEST(Dot, CliqueColoursAndShades) {
    auto lo = export_structure_dot(solve(make_clique(4), 2.2), 2.2);
    EXPECT_EQ(occurrences(lo, std::string("fillcolor=\"") + detail::class_color(AlphaClass::Half)), 4);
    EXPECT_EQ(occurrences(lo, "style=solid, color=\"#d0d0d0\""), 6);
    EXPECT_EQ(occurrences(lo, "gray"), 0);
    auto hi = export_structure_dot(solve(make_clique(4), 2.7), 2.7);
    EXPECT_EQ(occurrences(hi, std::string("fillcolor=\"") + detail::class_color(AlphaClass::Zero)), 4);
    EXPECT_EQ(occurrences(hi, "style=solid, color=\"#000000\""), 6);
}

TEST(Dot, NonEdgesAndAnnotation) {
    auto dia = export_structure_dot(solve(make_diamond(), 2.2), 2.2);
    EXPECT_NE(dia.find("gray"), std::string::npos);
    EXPECT_EQ(occurrences(dia, "style=dashed"), 1);
    auto ind = export_structure_dot(solve(make_cycle(4), 2.2, Variant::Induced), 2.2);
    EXPECT_EQ(occurrences(ind, "style=dotted"), 2);
    EXPECT_EQ(occurrences(ind, "style=solid"), 4);
}

TEST(Dot, OtherClassColour) {
    SolveReport r = solve(make_clique(2), 2.5);
    r.optimizer.alpha = {0.3, 0.0};
    auto s = export_structure_dot(r, 2.5);
    EXPECT_NE(s.find(detail::class_color(AlphaClass::Other)), std::string::npos);
    EXPECT_EQ(detail::beta_shade(-0.5, 2), "#000000");
    EXPECT_EQ(detail::beta_shade(0.0, 2), "#d0d0d0");
}

TEST(Atlas, FourVertexFlags) {
    const auto U = Uniqueness::Unique, N = Uniqueness::NonUnique;
    auto flags = [&](double tau) {
        std::map<std::uint32_t, Uniqueness> m;
        for (const auto& row : run_atlas(4, tau, 2.0, 1, Variant::General).rows)
            m[canonical_code(row.report.instance.pattern)] = row.report.unique;
        return m;
    };
    auto lo = flags(2.2), hi = flags(2.7);
    ASSERT_EQ(lo.size(), 6u);
    const Pattern ps[] = {make_star(3), make_path(4), make_paw(), make_clique(4), make_diamond(), make_cycle(4)};
    const Uniqueness want_lo[] = {U, N, U, U, N, N}, want_hi[] = {U, N, U, U, U, U};
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(lo[canonical_code(ps[i])], want_lo[i]) << ps[i].to_string();
        EXPECT_EQ(hi[canonical_code(ps[i])], want_hi[i]) << ps[i].to_string();
    }
}

TEST(Atlas, InducedCycleUnique) {
    auto at = run_atlas(4, 2.2, 2.0, 1, Variant::Induced);
    bool found = false;
    for (const auto& row : at.rows)
        if (canonical_code(row.report.instance.pattern) == canonical_code(make_cycle(4))) {
            found = true;
            EXPECT_EQ(row.report.unique, Uniqueness::Unique);
            for (auto c : row.classes) EXPECT_EQ(c, AlphaClass::Half);
            for (double b : row.report.optimizer.beta) EXPECT_NEAR(b, 0.0, 1e-7);
        }
    EXPECT_TRUE(found);
}

TEST(Atlas, DeterministicJsonAndFiles) {
    auto a = to_json(run_atlas(4, 2.2, 2.0, 1, Variant::General)).dump(2);
    auto b = to_json(run_atlas(4, 2.2, 2.0, 1, Variant::General)).dump(2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.find("\"ms\""), std::string::npos);
    auto at = run_atlas(3, 2.7, 2.0, 1, Variant::Induced);
    auto dir = std::filesystem::temp_directory_path() / "girgmotif_atlas_test";
    std::filesystem::remove_all(dir);
    write_atlas(at, dir);
    EXPECT_TRUE(std::filesystem::exists(dir / "atlas_k3_induced.json"));
    for (std::size_t i = 0; i < at.rows.size(); ++i) EXPECT_TRUE(std::filesystem::exists(dir / atlas_dot_name(at, i)));
    std::filesystem::remove_all(dir);
    EXPECT_THROW(run_atlas(6, 2.2, 2.0, 1, Variant::General), ConfigError);
}

TEST(Atlas, ViolationsReported) {
    auto at = run_atlas(3, 2.2, 2.0, 1, Variant::General);
    EXPECT_TRUE(conjecture_violations(at).empty());
    at.rows[0].report.unique = Uniqueness::Unique;
    at.rows[0].report.optimizer.alpha[0] = 0.3;
    auto v = conjecture_violations(at);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find(at.rows[0].report.instance.pattern.to_string()), std::string::npos);
}

TEST(TreeCompare, IdenticalHostsGiveRatioOne) {
    GirgParams p;
    p.n = 200;
    p.gamma = infinity;
    p.tau = 2.5;
    TreeCompareOptions o;
    o.seeds = 3;
    o.fixed_weight = 1e3; // w^2 >= n mu: both hosts complete
    auto r = run_tree_compare(make_path(3), p, o);
    ASSERT_EQ(r.rows.size(), 3u);
    for (const auto& row : r.rows) {
        EXPECT_EQ(row.girg, 200ull * 199 * 198);
        EXPECT_EQ(row.ratio, 1.0);
    }
}

TEST(TreeCompare, BoundedRatiosAndErrors) {
    GirgParams p;
    p.n = 3000;
    p.tau = 2.5;
    TreeCompareOptions o;
    o.seeds = 3;
    // the GIRG edge kernel integrates to 2^d gamma/(gamma-1) = 4 times the IRG one,
    // so the ratio is bounded but far from 1
    auto r = run_tree_compare(make_path(4), p, o);
    for (const auto& row : r.rows) {
        EXPECT_GT(row.ratio, 1.0);
        EXPECT_LT(row.ratio, 100.0);
    }
    EXPECT_LE(r.min_ratio, r.max_ratio);
    EXPECT_THROW(run_tree_compare(make_clique(3), p, o), ConfigError);
}
