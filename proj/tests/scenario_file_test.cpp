#include <gtest/gtest.h>

#include "ncw/io/csv.hpp"
#include "ncw/io/scenario_file.hpp"
#include "test_support.hpp"

namespace ncw::io {
namespace {

const char* kValid = R"(parameters:
  alpha_c: 0.4
  alpha_d: 0.15
  gamma_a: 0.2
  beta_r: 0.5
  beta_n: 0.3
  beta_a: 0.2
initial:
  b0: 170
  r0: 120
  n0: 20
  a0: 50
)";

std::string with(const std::string& extra) { return std::string(kValid) + extra; }

TEST(ScenarioFile, BundledCasesParse) {
  const auto f = load_scenario(testing::scenario_path("case1"));
  EXPECT_EQ(f.scenario, testing::case1());
  EXPECT_EQ(f.strategy.mode, PolicyMode::greedy_optimal);
  EXPECT_EQ(f.integrator, IntegratorConfig{});
  EXPECT_EQ(load_scenario(testing::scenario_path("case2")).scenario, testing::case2());
  EXPECT_EQ(load_scenario(testing::scenario_path("case3")).scenario, testing::case3());

  const auto pi3 = load_scenario(testing::scenario_path("case2_pi3"));
  EXPECT_EQ(pi3.strategy, StrategyScript::scripted({Allocation::make(0.7, 0.2, 0.1), Allocation::vertex(Entity::A)}));
}

TEST(ScenarioFile, StrategyDefaultsToGreedy) {
  const auto f = parse_scenario(kValid);
  EXPECT_FALSE(f.has_strategy);
  EXPECT_EQ(f.strategy.mode, PolicyMode::greedy_optimal);
}

TEST(ScenarioFile, IntegratorOverrides) {
  const auto f = parse_scenario(with("integrator:\n  step: 0.002\n  max_time: 50\n"));
  EXPECT_EQ(f.integrator.step, 0.002);
  EXPECT_EQ(f.integrator.max_time, 50.0);
  EXPECT_EQ(f.integrator.event_tolerance, 1e-10);
  EXPECT_THROW(parse_scenario(with("integrator:\n  step: -1\n")), parse_error);
}

TEST(ScenarioFile, UnknownKeyIsNamedWithLine) {
  try {
    parse_scenario(with("strategy:\n  mode: greedy\n  colour: blue\n"));
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "strategy.colour");
    EXPECT_EQ(e.line(), 15);
    EXPECT_NE(std::string(e.what()).find("strategy.colour"), std::string::npos);
  }
  try {
    parse_scenario(with("extras: 1\n"));
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "extras");
  }
  try {
    parse_scenario(std::string(kValid).replace(std::string(kValid).find("gamma_a"), 7, "gamma_x"));
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "parameters.gamma_x");
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(ScenarioFile, MissingAndMalformedValues) {
  std::string text = kValid;
  text.erase(text.find("  a0: 50\n"));
  try {
    parse_scenario(text);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "initial.a0");
  }
  text = kValid;
  text.replace(text.find("170"), 3, "lots");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "initial.b0");
    EXPECT_EQ(e.line(), 9);
  }
  EXPECT_THROW(parse_scenario("parameters: [1, 2\n"), parse_error);
  EXPECT_THROW(parse_scenario("- 1\n- 2\n"), parse_error);
}

TEST(ScenarioFile, ValidationErrorNamesKey) {
  std::string text = kValid;
  text.replace(text.find("n0: 20"), 6, "n0: 0");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "initial.n0");
    EXPECT_EQ(e.line(), 11);
  }
  text = kValid;
  text.replace(text.find("alpha_d: 0.15"), 13, "alpha_d: 0.9");
  try {
    parse_scenario(text);
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_EQ(e.key(), "parameters.alpha_d");
  }
}

TEST(ScenarioFile, StrategyErrors) {
  EXPECT_THROW(parse_scenario(with("strategy:\n  mode: random\n")), parse_error);
  EXPECT_THROW(parse_scenario(with("strategy:\n  mode: scripted\n")), parse_error);
  EXPECT_THROW(parse_scenario(with("strategy:\n  mode: scripted\n  stages: [[0.5, 0.5]]\n")), parse_error);
  EXPECT_THROW(parse_scenario(with("strategy:\n  mode: scripted\n  stages: [[0.5, 0.5, 0.5]]\n")), parse_error);
  EXPECT_THROW(parse_scenario(with("strategy:\n  mode: greedy\n  stages: [[1, 0, 0]]\n")), parse_error);
}

TEST(ScenarioFile, RoundTripPreservesValues) {
  testing::ScenarioGen gen(71);
  for (int i = 0; i < 100; ++i) {
    ScenarioFile f;
    f.scenario = gen();
    f.has_strategy = i % 3 != 0;
    if (i % 2) f.strategy = StrategyScript::scripted({gen.allocation(), Allocation::vertex(Entity::A)});
    f.integrator.step = gen.uni(1e-4, 1e-2);
    if (!f.has_strategy) f.strategy = StrategyScript::greedy();
    const auto back = parse_scenario(serialize_scenario(f));
    EXPECT_EQ(back.scenario, f.scenario);
    EXPECT_EQ(back.integrator, f.integrator);
    EXPECT_EQ(back.has_strategy, f.has_strategy);
    EXPECT_EQ(back.strategy.mode, f.strategy.mode);
    ASSERT_EQ(back.strategy.stages.size(), f.strategy.stages.size());
    for (std::size_t k = 0; k < f.strategy.stages.size(); ++k)
      for (int c = 0; c < 3; ++c)
        EXPECT_NEAR(back.strategy.stages[k].components()[c], f.strategy.stages[k].components()[c], 1e-15);
  }
}

TEST(Formatting, LocaleIndependentNumbers) {
  EXPECT_EQ(format_exact(0.1), "0.1");
  EXPECT_EQ(format_exact(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_short(0.45000000000000001), "0.45");
  EXPECT_EQ(format_short(155.6438241), "155.644");
  EXPECT_EQ(format_allocation(Allocation::make(0.7, 0.2, 0.1)), "(0.7,0.2,0.1)");
}

TEST(Csv, TimeseriesColumns) {
  const auto tr = run_battle(testing::case1(), StrategyScript::greedy(), IntegratorConfig{});
  std::ostringstream os;
  write_timeseries(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,b,r,n,a,x,stage_index,pi1,pi2,pi3");
  std::getline(is, line);
  EXPECT_EQ(line, "0,170,120,20,50,0,0,0,1,0");
  std::size_t rows = 1;
  std::string last;
  while (std::getline(is, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, tr.samples.size());
  EXPECT_EQ(last.substr(last.size() - 8), ",2,0,0,1");
}

}  // namespace
}  // namespace ncw::io
