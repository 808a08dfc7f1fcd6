#include <gtest/gtest.h>

#include "sigma/config.hpp"

using namespace sigma;

TEST(ConfigParser, SectionsCommentsQuotesAndLists) {
  const ConfigMap m = parse_config_text(R"(
# run description
[grid]
n = 32   # trailing comment
[seed]
kind = "geodesic"
[audit]
list = [kato, 'hopf']
)");
  EXPECT_EQ(m.at("grid.n"), "32");
  EXPECT_EQ(m.at("seed.kind"), "geodesic");
  EXPECT_EQ(m.at("audit.list"), "[kato, 'hopf']");
  const RunConfig c = build_run_config(m);
  EXPECT_EQ(c.n, 32);
  EXPECT_EQ(c.seed.kind, SeedKind::geodesic);
  EXPECT_EQ(c.audits, (std::vector<std::string>{"kato", "hopf"}));
}

TEST(ConfigParser, ReportsMalformedLines) {
  EXPECT_THROW(parse_config_text("[grid\nn = 3\n"), ValidationError);
  EXPECT_THROW(parse_config_text("just words\n"), ValidationError);
  EXPECT_THROW(parse_config_text(" = 4\n"), ValidationError);
}

TEST(RunConfig, DefaultsAreValid) {
  const RunConfig c = build_run_config({});
  EXPECT_EQ(c.n, 64);
  EXPECT_EQ(c.q, 3);
  EXPECT_EQ(c.out_dir, "sigma_out");
  EXPECT_NEAR(c.constants.c4, 0.5, 1e-6);
  EXPECT_GT(c.flow.step_map, 0.0);
  EXPECT_EQ(c.gradient.y0, north_pole(3));
}

TEST(RunConfig, FieldLevelErrorsAreCollected) {
  try {
    build_run_config({{"grid.n", "4"}, {"flow.residual_tol", "-1"}, {"seed.kind", "blob"}, {"grid.m", "3"},
                      {"audit.list", "kato, nope"}});
    FAIL() << "expected validation error";
  } catch (const ValidationError& e) {
    const auto& errs = e.errors();
    auto has = [&](const std::string& prefix) {
      return std::any_of(errs.begin(), errs.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
    };
    EXPECT_TRUE(has("grid.n"));
    EXPECT_TRUE(has("flow.residual_tol"));
    EXPECT_TRUE(has("seed.kind"));
    EXPECT_TRUE(has("grid.m: unknown key"));
    EXPECT_TRUE(has("audit.list"));
  }
}

TEST(RunConfig, RejectsNonNumbers) {
  EXPECT_THROW(build_run_config({{"grid.n", "6x"}}), ValidationError);
  EXPECT_THROW(build_run_config({{"rng.seed", "-3"}}), ValidationError);
  EXPECT_THROW(build_run_config({{"gradient.R", "nan"}}), ValidationError);
}

TEST(RunConfig, CrossFieldChecks) {
  EXPECT_THROW(build_run_config({{"grid.n", "16"}, {"seed.kind", "geodesic"}, {"seed.k", "4"}}), ValidationError);
  EXPECT_THROW(build_run_config({{"flow.step_map", "1"}}), ValidationError);
  EXPECT_THROW(build_run_config({{"audit.polar_radii", "0.1, 0.49"}}), ValidationError);
  EXPECT_THROW(build_run_config({{"gradient.y0", "1, 0"}}), ValidationError);
  EXPECT_THROW(build_run_config({{"constants.delta4", "0"}}), ValidationError);
}

TEST(RunConfig, OverridesAndSeedPropagation) {
  const RunConfig c = build_run_config({{"rng.seed", "18446744073709551615"},
                                        {"constants.c4", "0.25"},
                                        {"constants.delta3", "0.2"},
                                        {"convergence.grids", "64, 32"},
                                        {"feasibility.d1", "[2, 3, 4]"}});
  EXPECT_EQ(c.rng_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.seed.rng_seed, c.rng_seed);
  EXPECT_EQ(c.flow.seed.rng_seed, c.rng_seed);
  EXPECT_DOUBLE_EQ(c.constants.c4, 0.25);
  EXPECT_NEAR(c.constants.c10, 1.0 + 0.2 + 0.25 * 0.25 / 0.5, 1e-15);
  EXPECT_EQ(c.conv_grids, (std::vector<int>{64, 32}));
  EXPECT_EQ(c.feasibility.d1, (std::vector<double>{2, 3, 4}));
}

TEST(RunConfig, OutputDirectoryPrecedence) {
  EXPECT_EQ(build_run_config({}, std::string("from_env")).out_dir, "from_env");
  EXPECT_EQ(build_run_config({{"output.dir", "explicit"}}, std::string("from_env")).out_dir, "explicit");
}

TEST(RunConfig, EveryKnownKeyIsAccepted) {
  const auto keys = known_config_keys();
  EXPECT_GT(keys.size(), 40u);
  EXPECT_NE(std::find(keys.begin(), keys.end(), "grid.n"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "audit.list"), keys.end());
}
