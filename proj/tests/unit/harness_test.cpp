#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "aremor/errors.hpp"
#include "aremor/harness.hpp"

namespace aremor {
namespace {

namespace fs = std::filesystem;

const char* kSmallConfig = R"(
[problem]
epsilon = 1
gamma = 0
domain = 0, 1, 0, 1
omega_b = 0.2, 0.8, 0.2, 0.8
omega_c = 0.1, 0.9, 0.1, 0.9
dx = 0.1

[experiment]
methods = bt, gark
tol = 1e-8
r_max = 40

[bt]
sweep = 1:1:12

[output]
dir = unused
timings = false
)";

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("aremor_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

TEST(ParseConfig, ReadsAllSections) {
  const ExperimentConfig cfg = parse(kSmallConfig);
  EXPECT_EQ(cfg.problem.dx, 0.1);
  EXPECT_EQ(cfg.methods, (std::vector<std::string>{"bt", "gark"}));
  EXPECT_EQ(cfg.r_max, 40);
  EXPECT_EQ(cfg.bt_sweep.size(), 12u);
  EXPECT_FALSE(cfg.timings);
  EXPECT_EQ(cfg.snapshot_steps, 50);
}

TEST(ParseConfig, EmptyMethodsIsAnError) {
  std::string text = kSmallConfig;
  text.replace(text.find("bt, gark"), 8, "");
  EXPECT_THROW(parse(text), ConfigError);
}

TEST(ParseConfig, UnknownKeysAndBadValuesAreErrors) {
  EXPECT_THROW(parse(std::string(kSmallConfig) + "[extra]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kSmallConfig) + "[krylov]\nshift = 1\n"), ConfigError);
  std::string bad_tol = kSmallConfig;
  bad_tol.replace(bad_tol.find("1e-8"), 4, "-1");
  EXPECT_THROW(parse(bad_tol), ConfigError);
  std::string bad_method = kSmallConfig;
  bad_method.replace(bad_method.find("bt, gark"), 8, "gark, svd");
  EXPECT_THROW(parse(bad_method), ConfigError);
}

TEST(ParseLists, RangesAndValues) {
  EXPECT_EQ(parse_index_list("1:2:7,10"), (std::vector<Index>{1, 3, 5, 7, 10}));
  EXPECT_EQ(parse_double_list("0.1, 0.05"), (std::vector<double>{0.1, 0.05}));
  EXPECT_THROW(parse_index_list("1:0:3"), ConfigError);
  EXPECT_THROW(parse_index_list("x"), ConfigError);
}

TEST(FormatHistoryCsv, HeaderPrecisionAndMissingValues) {
  ConvergenceHistory h;
  h.add({1, 0.125, std::nullopt, std::nullopt, 1.5});
  h.add({2, 1.0 / 3.0, 0.25, 0.5, 2.0});
  EXPECT_EQ(format_history_csv(h, true),
            "r,R_P,E_K,E_G,elapsed_s\n"
            "1,1.250000000e-01,,,1.500000000e+00\n"
            "2,3.333333333e-01,2.500000000e-01,5.000000000e-01,2.000000000e+00\n");
  EXPECT_EQ(format_history_csv(h, false).substr(24, 20), "1,1.250000000e-01,,,");
}

TEST(RunExperiment, WritesCsvAndManifestAndIsDeterministic) {
  ExperimentConfig cfg = parse(kSmallConfig);
  const fs::path a = scratch("a");
  const fs::path b = scratch("b");
  cfg.output_dir = a.string();
  const ExperimentResult first = run_experiment(cfg);
  cfg.output_dir = b.string();
  const ExperimentResult second = run_experiment(cfg);
  EXPECT_EQ(first.exit_code, kExitOk);
  EXPECT_EQ(first.n, 121);
  EXPECT_TRUE(first.has_reference);
  for (const char* name : {"bt.csv", "gark.csv"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_TRUE(fs::exists(a / "manifest.json"));
  const auto& gark = first.outcomes.back();
  EXPECT_EQ(gark.method, "gark");
  EXPECT_EQ(gark.status, "converged");
  EXPECT_LE(gark.history.back().residual, 1e-8);
  ASSERT_TRUE(gark.history.back().gain_error.has_value());
  EXPECT_LE(*gark.history.back().gain_error, 1e-6);
  // r strictly increasing is enforced by the history; the file mirrors it
  std::istringstream csv(slurp(a / "gark.csv"));
  std::string line;
  std::getline(csv, line);
  Index last = 0;
  while (std::getline(csv, line)) {
    const Index r = std::stoll(line.substr(0, line.find(',')));
    EXPECT_GT(r, last);
    last = r;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunExperiment, BreakdownGivesSolverFailureWithPartialOutput) {
  std::string text = kSmallConfig;
  text.replace(text.find("bt, gark"), 8, "pgark");
  text.replace(text.find("omega_b = 0.2, 0.8, 0.2, 0.8"), 28, "omega_b = 0.2, 0.2, 0.2, 0.2");
  text.replace(text.find("omega_c = 0.1, 0.9, 0.1, 0.9"), 28, "omega_c = 0.8, 0.8, 0.8, 0.8");
  ExperimentConfig cfg = parse(text);
  const fs::path dir = scratch("breakdown");
  cfg.output_dir = dir.string();
  const ExperimentResult res = run_experiment(cfg);
  EXPECT_EQ(res.exit_code, kExitSolverFailure);
  ASSERT_EQ(res.outcomes.size(), 1u);
  EXPECT_EQ(res.outcomes[0].status, "breakdown");
  EXPECT_TRUE(fs::exists(dir / "pgark.csv"));
  EXPECT_NE(slurp(dir / "manifest.json").find("serious breakdown"), std::string::npos);
  fs::remove_all(dir);
}

TEST(ScalingSweep, DimensionsFollowGridSpacing) {
  ExperimentConfig cfg = parse(kSmallConfig);
  cfg.methods = {"gark"};
  const fs::path dir = scratch("sweep");
  cfg.output_dir = dir.string();
  const auto rows = scaling_sweep(cfg, {0.1, 0.05, 0.025});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].n, 121);
  EXPECT_EQ(rows[1].n, 441);
  EXPECT_EQ(rows[2].n, 1681);
  for (const auto& row : rows) EXPECT_EQ(row.status, "converged");
  const double ratio = static_cast<double>(rows[2].n) / rows[1].n;
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace aremor
