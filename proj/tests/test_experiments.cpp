#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rdcauchy/config.hpp"
#include "rdcauchy/error.hpp"
#include "rdcauchy/experiments.hpp"
#include "rdcauchy/synthesis.hpp"
#include "rdcauchy/task_pool.hpp"

using namespace rdcauchy;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("rdcauchy_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Config, DefaultsAreValid) {
    const ExperimentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.nx, 801);
    EXPECT_EQ(cfg.nx_for(4.0), 801);
    // Other half-widths keep the mesh width.
    EXPECT_EQ(cfg.nx_for(2.0), 401);
    EXPECT_EQ(cfg.nx_for(8.0), 1602);
}

TEST(Config, ParsesKeysCommentsAndLists) {
    const ExperimentConfig cfg = parse_config(
        "# desk run\n"
        "A = 6\n"
        "k2 = 9.5   # inline comment\n"
        "table2_A = 2, 4,6\n"
        "paper_scale = true\n"
        "\n");
    EXPECT_DOUBLE_EQ(cfg.domain.half_width, 6.0);
    EXPECT_DOUBLE_EQ(cfg.params.k2, 9.5);
    EXPECT_EQ(cfg.table2_A, (std::vector<double>{2, 4, 6}));
    EXPECT_TRUE(cfg.paper_scale);
    EXPECT_EQ(cfg.nx_for(4.0), 1601);
    EXPECT_EQ(cfg.nx_for(2.0), 801);
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_config("wave_number = 5\n"), ConfigError);
    EXPECT_THROW(parse_config("k2 5\n"), ConfigError);
    EXPECT_THROW(parse_config("k2 =\n"), ConfigError);
    EXPECT_THROW(parse_config("nx = many\n"), ConfigError);
    EXPECT_THROW(parse_config("nx = 4\n"), ConfigError);
    EXPECT_THROW(parse_config("mu0 = -1\n"), ConfigError);
    EXPECT_THROW(parse_config("a = 2\nb = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("n_iter = 50\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/rdcauchy.cfg"), ConfigError);
}

TEST(Config, DumpRoundTrips) {
    ExperimentConfig cfg;
    cfg.params.k2 = 13.25;
    cfg.table3_L = {0.25, 0.5};
    cfg.bump_top.amplitude = 0.75;
    cfg.render_svg = true;
    const ExperimentConfig back = parse_config(dump_config(cfg));
    EXPECT_EQ(dump_config(back), dump_config(cfg));
    EXPECT_EQ(config_keys().size(), 34u);
}

TEST(Bumps, ShapeAndNorm) {
    const BumpSpec b{0.2, 0.5, 2.0};
    EXPECT_DOUBLE_EQ(b(0.2), 2.0);
    EXPECT_NEAR(b(0.7), 0.0, 1e-15);
    EXPECT_EQ(b(-0.31), 0.0);
    EXPECT_NEAR(b(0.45), 1.0, 1e-12);
    EXPECT_THROW((BumpSpec{0.0, 0.0, 1.0}.validate()), InvalidArgument);

    // ||b||^2 = amp^2 * 2w * 3/8.
    const DomainSpec d{4.0, 0.4, -1.0, 1.0};
    const Grid g = build_grid(d, 1600);
    const BoundaryIndexMap m = classify_boundary(g, d);
    const BoundaryFunction f = make_bump(b, m, Boundary::Gamma0);
    EXPECT_NEAR(l2_norm(f, m), 2.0 * std::sqrt(0.75 * 0.5), 1e-6);
    const std::vector<double> row = bump_row(b, g);
    EXPECT_EQ(row.size(), 1601u);
    EXPECT_EQ(row.front(), 0.0);
}

TEST(Synthesis, ZeroBumpsGiveZeroData) {
    const DomainSpec d{4.0, 0.4, -1.0, 1.0};
    const Grid g = build_grid(d, 201);
    const BoundaryIndexMap m = classify_boundary(g, d);
    const SynthesizedData s = synthesize_cauchy(m, 5.0, BumpSpec{0, 1, 0}, BumpSpec{0, 1, 0});
    EXPECT_EQ(s.u_ref.max_abs(), 0.0);
    for (double v : s.cauchy.g0.values) EXPECT_EQ(v, 0.0);
}

TEST(Synthesis, DataConventions) {
    const DomainSpec d{4.0, 0.4, -1.0, 1.0};
    const Grid g = build_grid(d, 401);
    const BoundaryIndexMap m = classify_boundary(g, d);
    const SynthesizedData s = synthesize_cauchy(m, 5.0, BumpSpec{0, 1, 1}, BumpSpec{0, 1, 0.5});
    ASSERT_EQ(s.cauchy.f0.size(), s.cauchy.g0.size());
    const BumpSpec bottom{0, 1, 1};
    for (std::size_t k = 0; k < s.cauchy.f0.size(); ++k) {
        const double x = g.x(g.column_of(s.cauchy.f0.nodes[k]));
        EXPECT_NEAR(s.cauchy.f0.values[k], bottom(x), 1e-14);
        EXPECT_EQ(s.g0_uy.values[k], -s.cauchy.g0.values[k]);
        // Flux-consistent and one-sided derivatives differ at O(h^2).
        EXPECT_NEAR(s.cauchy.g0.values[k], s.g0_one_sided.values[k], 50 * g.h() * g.h());
    }
}

TEST(Published, Lookups) {
    EXPECT_EQ(published_table1(4.0), 15.6);
    EXPECT_FALSE(published_table1(3.0).has_value());
    EXPECT_EQ(published_table2(6.0), 12.7);
    EXPECT_EQ(published_table3(0.2, 5.0), "-");
    EXPECT_EQ(published_table3(0.6, 30.0), "*");
    EXPECT_EQ(published_table3(0.4, 25.0), "6.1");
    EXPECT_EQ(published_table3(0.4, 26.0), "");
}

TEST(Table1, CsvIsDeterministic) {
    const fs::path dir = scratch("table1");
    const std::vector<double> mus{2, 4, 6};
    write_table1(dir / "a.csv", compute_table1(mus, 0.4));
    write_table1(dir / "b.csv", compute_table1(mus, 0.4));
    const std::string a = slurp(dir / "a.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b.csv"));
    EXPECT_NE(a.find("8.7983996"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Table1, RowsCarryOracleAndScoring) {
    const auto rows = compute_table1({2, 8}, 0.4);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_FALSE(rows[0].scored);
    EXPECT_TRUE(rows[1].scored);
    EXPECT_NEAR(rows[1].oracle.lambda, rows[1].root.lambda, 1e-6 * rows[1].root.lambda);
}

TEST(Format, TenSignificantDigits) {
    EXPECT_EQ(format_number(8.7984001234567), "8.798400123");
    EXPECT_EQ(format_number(13.0), "13");
}

TEST(TaskPool, PreservesOrderAndPropagatesErrors) {
    const auto v = parallel_map<int>(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
    EXPECT_THROW(parallel_map<int>(10, 3,
                                   [](std::size_t i) -> int {
                                       if (i == 7) throw std::runtime_error("boom");
                                       return 0;
                                   }),
                 std::runtime_error);
    EXPECT_GE(resolve_threads(0), 1);
    EXPECT_EQ(resolve_threads(3), 3);
}
