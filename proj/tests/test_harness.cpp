#include "harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace shadows;
using namespace shadows::harness;

namespace {

const std::string kCube = std::string(SHADOWS_DATA_DIR) + "/cube.json";

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("shadows_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(LoadBody, BundledCube) {
  const auto c = load_body(kCube);
  EXPECT_EQ(c.dim(), 3);
  EXPECT_NEAR(volume(c), 8.0, 1e-12);
}

TEST(LoadBody, RejectsZeroOffset) {
  const auto path = temp_file("zero.json", R"({"n": 2, "directions": [[1, 0], [0, 1]], "offsets": [1, 0]})");
  try {
    load_body(path);
    FAIL() << "accepted a zero offset";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("offsets/1"), std::string::npos) << e.what();
  }
}

TEST(LoadBody, RejectsNonSpanningDirections) {
  const auto path = temp_file("flat.json", R"({"n": 3, "directions": [[1, 0, 0], [0, 1, 0], [0.6, 0.8, 0]], "offsets": [1, 1, 1]})");
  try {
    load_body(path);
    FAIL() << "accepted a flat body";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("unbounded body"), std::string::npos) << e.what();
  }
}

TEST(LoadBody, NormalizesNearlyUnitAndRejectsOthers) {
  const auto near = temp_file("near.json", R"({"n": 2, "directions": [[1.0000001, 0], [0, 1]], "offsets": [1, 1]})");
  EXPECT_NEAR(load_body(near).direction(0).norm(), 1.0, 1e-15);
  const auto far = temp_file("far.json", R"({"n": 2, "directions": [[1.1, 0], [0, 1]], "offsets": [1, 1]})");
  EXPECT_THROW(load_body(far), ConfigError);
}

TEST(LoadBody, MalformedJsonReportsLineAndColumn) {
  const auto path = temp_file("broken.json", "{\n  \"n\": 2,\n  \"offsets\": [1, ]\n}");
  try {
    load_body(path);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 18u);  // the stray "]"
  }
}

TEST(Config, StrictKeysAndRanges) {
  EXPECT_THROW(config_from_json(json{{"n", 3}, {"bogus", 1}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"n", 0}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"n", 2.5}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"schema", 2}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"seed", -1}}), ConfigError);
  const auto c = config_from_json(json{{"schema", 1}, {"n", 4}, {"seed", 18446744073709551615ULL}});
  EXPECT_EQ(c.n, 4);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
}

TEST(Run, ShadowPositionOnBundledCube) {
  ExperimentConfig c;
  c.body = kCube;
  const auto r = run("shadow-position", c);
  EXPECT_EQ(r.exit_code, kPass);
  EXPECT_NEAR(r.report["results"]["ratio"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(r.report["schema"], 1);
  EXPECT_EQ(r.report["results"]["branch"], "exact");
}

TEST(Run, ReportsAreDeterministic) {
  for (const char* sub : {"shadow-position", "verify-t3", "zonotope", "minkowski-solve", "cauchy-check"}) {
    ExperimentConfig c;
    c.seed = 77;
    c.trials = 4;
    const auto a = run(sub, c);
    const auto b = run(sub, c);
    EXPECT_EQ(a.report.dump(), b.report.dump()) << sub;
    if (a.table) EXPECT_EQ(a.table->to_csv(), b.table->to_csv()) << sub;
  }
}

TEST(Run, SeedChangesRandomReports) {
  ExperimentConfig a, b;
  b.seed = 1;
  EXPECT_NE(run("shadow-position", a).report.dump(), run("shadow-position", b).report.dump());
}

TEST(Run, PathologicalSweepWritesOneRowPerSeed) {
  ExperimentConfig c;
  c.n = 2;
  c.seeds = 10;
  const auto r = run("pathological", c);
  EXPECT_EQ(r.exit_code, kPass);
  ASSERT_TRUE(r.table);
  EXPECT_EQ(r.table->rows.size(), 10u);
  EXPECT_EQ(r.table->to_csv().substr(0, r.table->to_csv().find('\n')), "seed,n,delta_hat,vol_nth_root,min_shadow,ratio,floor");
}

TEST(Run, PerturbedWeightsFail) {
  ExperimentConfig c;
  c.perturb_weights = 1e-3;
  c.trials = 3;
  EXPECT_EQ(run("verify-t3", c).exit_code, kAssertionFailure);
  EXPECT_EQ(run("zonotope", c).exit_code, kAssertionFailure);
  c.body = kCube;
  EXPECT_EQ(run("shadow-position", c).exit_code, kAssertionFailure);
}

TEST(Run, CapacityAndConfigExitCodes) {
  ExperimentConfig c;
  c.m = 30;
  const auto cap = run("shadow-position", c);
  EXPECT_EQ(cap.exit_code, kCapacityExceeded);
  EXPECT_EQ(cap.report["error"]["kind"], "capacity");
  ExperimentConfig missing;
  missing.body = "/nonexistent/body.json";
  EXPECT_EQ(run("shadow-position", missing).exit_code, kConfigError);
  EXPECT_THROW(run("no-such-command", ExperimentConfig{}), ConfigError);
}

TEST(Run, BallRatioTable) {
  ExperimentConfig c;
  c.n_max = 10;
  const auto r = run("ball-ratio", c);
  ASSERT_TRUE(r.table);
  EXPECT_EQ(r.table->rows.size(), 9u);
  EXPECT_EQ(r.table->rows.front()[0], "2");
}
