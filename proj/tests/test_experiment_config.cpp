#include <sstream>

#include <gtest/gtest.h>

#include "rankreg/errors.hpp"
#include "rankreg/experiment_config.hpp"

namespace rankreg {
namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in, "exp.cfg");
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return 0;
}

TEST(ExperimentConfig, ParsesAllKeys) {
  const ExperimentConfig c = parse(
      "# comment\n"
      "d = 5\n"
      "lambda_min=0.1   # trailing comment\n"
      "target_pe = 0.25\n"
      "repetitions = 4\n"
      "master_seed = 99\n"
      "\n"
      "swept_parameter = n\n"
      "grid = 100, 200,400\n"
      "m_rule = n_log_n\n"
      "n_grid = 50,100\n"
      "angle_threshold = 0.2\n");
  EXPECT_EQ(c.base.d, 5);
  EXPECT_EQ(c.base.lambda_min, 0.1);
  EXPECT_EQ(c.base.target_pe, 0.25);
  EXPECT_EQ(c.base.repetitions, 4);
  EXPECT_EQ(c.base.master_seed, 99u);
  EXPECT_EQ(c.swept_parameter, SweptParameter::n);
  EXPECT_EQ(c.grid, (std::vector<double>{100, 200, 400}));
  EXPECT_EQ(c.m_rule, MRule::n_log_n);
  EXPECT_EQ(c.n_grid, (std::vector<std::int64_t>{50, 100}));
  EXPECT_EQ(c.angle_threshold, 0.2);
}

TEST(ExperimentConfig, DefaultsMatchTrialConfig) {
  const ExperimentConfig c = parse("");
  EXPECT_EQ(c.base, TrialConfig{});
  EXPECT_EQ(c.m_rule, MRule::fixed);
  EXPECT_FALSE(c.swept_parameter.has_value());
}

TEST(ExperimentConfig, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("d = 5\nbogus = 1\n"), 2u);
  EXPECT_EQ(error_line("d = 5\n\nd = 6\n"), 3u);
  EXPECT_EQ(error_line("d =\n"), 1u);
  EXPECT_EQ(error_line("d 5\n"), 1u);
  EXPECT_EQ(error_line("# x\nd = five\n"), 2u);
  EXPECT_EQ(error_line("swept_parameter = alpha\n"), 1u);
  EXPECT_EQ(error_line("m_rule = quadratic\n"), 1u);
  EXPECT_EQ(error_line("grid = 1,,2\n"), 1u);
  EXPECT_EQ(error_line("master_seed = -1\n"), 1u);
}

TEST(ExperimentConfig, MessageMentionsKey) {
  try {
    parse("unknown_key = 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown_key"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("exp.cfg"), std::string::npos);
  }
}

TEST(ExperimentConfig, SweepSpecFallsBackToNGrid) {
  const SweepSpec s = parse("swept_parameter = n\nn_grid = 100, 300\nm_rule = n_log_n\nd = 3\n").to_sweep_spec();
  EXPECT_EQ(s.grid, (std::vector<double>{100, 300}));
  EXPECT_EQ(s.config_at(300).m, n_log_n(300));
}

TEST(ExperimentConfig, SweepSpecNeedsParameterAndGrid) {
  EXPECT_THROW(parse("grid = 1,2\n").to_sweep_spec(), Error);
  EXPECT_THROW(parse("swept_parameter = d\n").to_sweep_spec(), Error);
}

TEST(ExperimentConfig, MinNQuery) {
  const MinNQuery q = parse("n_grid = 20, 40\nangle_threshold = 3.141592653589793\nd = 2\n").to_min_n_query();
  EXPECT_EQ(q.n_grid, (std::vector<std::int64_t>{20, 40}));
  EXPECT_EQ(q.base.d, 2);
  EXPECT_THROW(parse("d = 2\n").to_min_n_query(), Error);
}

}  // namespace
}  // namespace rankreg
