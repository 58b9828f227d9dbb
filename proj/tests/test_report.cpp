#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "orthograph/report.hpp"

using namespace orthograph;

TEST(Report, ParsesConfigs) {
  const auto config = parse_grid_config(R"(
threads = 3
seed = 0x10   # hex is fine
[row]
family = gamma-square
k = 3, 4
q = 5,7
phases = clique,spectral
)");
  EXPECT_EQ(config.threads, 3U);
  EXPECT_EQ(config.seed, 16U);
  ASSERT_EQ(config.rows.size(), 1U);
  EXPECT_EQ(config.rows[0].k, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(config.rows[0].q, (std::vector<std::uint32_t>{5, 7}));
  EXPECT_TRUE(config.rows[0].phases.clique);
  EXPECT_FALSE(config.rows[0].phases.transitivity);
  EXPECT_EQ(config.rows[0].line, 4U);
}

TEST(Report, ConfigErrorsCarryLineNumbers) {
  const std::vector<std::pair<std::string, std::size_t>> cases = {
      {"threads = two\n", 1},
      {"[row]\nfamily = gamma-square\nk = 3\nq = 4\n", 1},
      {"\n[row]\nfamily = hexagon\n", 3},
      {"[row]\nfamily = gamma-prime\nphases = clique\n", 3},
      {"[row]\nfamily = ak\nk = 3\n", 1},
      {"bogus line\n", 1},
      {"[section]\n", 1},
      {"[row]\nfamily = ak\nk = 3\nq = 5\ncolour = red\n", 5}};
  for (const auto& [text, line] : cases) {
    try {
      (void)parse_grid_config(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.line(), line) << text << " -> " << e.what();
    }
  }
}

TEST(Report, DefaultConfigParses) {
  const auto config = parse_grid_config(default_grid_config_text());
  ASSERT_EQ(config.rows.size(), 4U);
  std::size_t points = 0;
  for (const auto& row : config.rows) points += row.k.size() * row.q.size();
  EXPECT_GE(points, 12U);
}

TEST(Report, EmptyGridGivesNoRows) {
  EXPECT_TRUE(run_grid(parse_grid_config("threads = 2\n")).empty());
}

TEST(Report, SmallGammaGridIsCertified) {
  const auto results = run_grid(parse_grid_config(
      "[row]\nfamily = gamma-square\nk = 3\nq = 5,7\nphases = clique,spectral,transitivity\n"));
  ASSERT_EQ(results.size(), 2U);
  for (const auto& r : results) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(r.omega_bound_certified, true);
    ASSERT_TRUE(r.spectral);
    EXPECT_TRUE(r.spectral->passes);
    ASSERT_TRUE(r.transitivity);
    EXPECT_TRUE(r.transitivity->passed());
    EXPECT_EQ(r.status(), "pass");
    EXPECT_EQ(r.clique_free_order, 3U);
    EXPECT_NEAR(r.density_diag, r.d / r.n * std::sqrt(static_cast<double>(r.n)), 1e-12);
  }
  EXPECT_EQ(results[0].q, 5U);
  EXPECT_EQ(results[0].n, 10U);
}

TEST(Report, AkRowShowsWitnessAndAbsence) {
  const auto results = run_grid(parse_grid_config("[row]\nfamily = ak\nk = 4\nq = 5\nphases = clique\n"));
  ASSERT_EQ(results.size(), 1U);
  const auto& r = results[0];
  EXPECT_EQ(r.clique_free_order, 5U);
  ASSERT_TRUE(r.absence && r.witness);
  EXPECT_EQ(r.absence->mode, CertificateMode::UpperBoundProof);
  EXPECT_EQ(r.witness->mode, CertificateMode::WitnessFound);
  EXPECT_EQ(r.witness->witness.size(), 4U);
  EXPECT_NE(grid_csv_row(r).find(",5,4,true,"), std::string::npos) << grid_csv_row(r);
  EXPECT_FALSE(std::isnan(r.ak_density_diag));
}

TEST(Report, CapExceededRowsAreSkippedNotFatal) {
  auto config = parse_grid_config("vertex_cap = 50\n[row]\nfamily = gamma-square\nk = 3,4\nq = 5\nphases = clique\n");
  const auto results = run_grid(config);
  ASSERT_EQ(results.size(), 2U);
  EXPECT_EQ(results[0].status(), "pass");
  EXPECT_EQ(results[1].status(), "skipped");
}

TEST(Report, DensityTrendSlope) {
  // d/n = n^-1/2 exactly gives slope -1/2.
  std::vector<GridResult> rows;
  for (std::size_t n : {100U, 400U, 900U}) {
    GridResult r;
    r.family = kRowGammaSquare;
    r.clique_free_order = 3;
    r.n = n;
    r.d = std::sqrt(static_cast<double>(n));
    rows.push_back(r);
  }
  EXPECT_NEAR(density_trend(rows, 3, kRowGammaSquare), -0.5, 1e-12);
  EXPECT_THROW(density_trend(rows, 4, kRowGammaSquare), std::invalid_argument);
  const std::vector<std::uint32_t> none = {99};
  EXPECT_THROW(density_trend(rows, 3, kRowGammaSquare, none), std::invalid_argument);
}

TEST(Report, ThreadCountDoesNotChangeTheCsv) {
  const std::string body =
      "[row]\nfamily = gamma-square\nk = 3,4\nq = 3,5,7\nphases = clique,spectral,transitivity\n"
      "[row]\nfamily = gamma-prime\nk = 3\nq = 3,5\nphases = identity,spectral\n"
      "[row]\nfamily = ak\nk = 3\nq = 3,5\nphases = clique\n";
  const auto one = grid_csv(run_grid(parse_grid_config("threads = 1\n" + body)));
  const auto three = grid_csv(run_grid(parse_grid_config("threads = 3\n" + body)));
  EXPECT_EQ(one, three);
  EXPECT_EQ(one.substr(0, one.find('\n')), grid_csv_header());
}

TEST(Report, WritesOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "orthograph_report_test";
  std::filesystem::remove_all(dir);
  const auto results =
      run_grid(parse_grid_config("[row]\nfamily = gamma-prime\nk = 3\nq = 3\nphases = identity,spectral\n"));
  write_grid_outputs(dir, results);
  EXPECT_TRUE(std::filesystem::exists(dir / "grid.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
  std::ifstream cert(dir / "certificates" / "gamma-prime_k3_q3.txt");
  std::string text((std::istreambuf_iterator<char>(cert)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("[identity-check]"), std::string::npos);
  EXPECT_NE(text.find("exact_pass = true"), std::string::npos);
  EXPECT_NE(grid_summary(results).find("none (each trend needs at least 3 rows)"), std::string::npos);
  std::filesystem::remove_all(dir);
}
