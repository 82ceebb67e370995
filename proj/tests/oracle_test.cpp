#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ncw/oracle.hpp"
#include "test_support.hpp"

namespace ncw {
namespace {

using testing::case1;
using testing::case2;
using testing::case3;

TEST(SimplexGrid, SizeAndMembership) {
  for (int k : {1, 2, 5, 10, 20}) {
    const SimplexGrid g(k);
    EXPECT_EQ(g.size(), std::size_t((k + 1) * (k + 2) / 2));
    std::set<std::array<double, 3>> seen;
    for (const auto& p : g.points()) {
      EXPECT_NEAR(p.pi1() + p.pi2() + p.pi3(), 1.0, 1e-15);
      seen.insert(p.components());
    }
    EXPECT_EQ(seen.size(), g.size());
    for (Entity e : {Entity::R, Entity::N, Entity::A})
      EXPECT_TRUE(seen.count(Allocation::vertex(e).components())) << k;
  }
  EXPECT_THROW(SimplexGrid(0), std::invalid_argument);
}

TEST(ScalarizedObjective, Examples) {
  EXPECT_NEAR(scalarized_objective(case1(), Allocation::vertex(Entity::N), 0.5), -0.225, 1e-15);
  EXPECT_NEAR(scalarized_objective(case3(), Allocation::vertex(Entity::A), 0.3), -0.21, 1e-15);

  // lambda = 1 keeps only the nonnegative product term.
  const auto s = case2();
  const auto mixed = Allocation::make(0.4, 0.4, 0.2);
  const double a = s.beta_r * s.beta_n * (s.alpha_c - s.alpha_d) / s.n0;
  EXPECT_NEAR(scalarized_objective(s, mixed, 1.0), a * 0.16, 1e-15);
  for (Entity e : {Entity::R, Entity::N, Entity::A})
    EXPECT_EQ(scalarized_objective(s, Allocation::vertex(e), 1.0), 0.0);
}

TEST(ScalarizedObjective, VertexProductTermVanishes) {
  testing::ScenarioGen gen(53);
  for (int i = 0; i < 100; ++i) {
    const auto s = gen();
    const auto r = threat_rates(s);
    const double lambda = gen.uni(0, 1);
    EXPECT_DOUBLE_EQ(scalarized_objective(s, Allocation::vertex(Entity::R), lambda), -(1 - lambda) * r.b1);
    EXPECT_DOUBLE_EQ(scalarized_objective(s, Allocation::vertex(Entity::N), lambda), -(1 - lambda) * r.b2);
    EXPECT_DOUBLE_EQ(scalarized_objective(s, Allocation::vertex(Entity::A), lambda), -(1 - lambda) * r.b3);
  }
}

TEST(VerifyScalarization, Case1MinimumAtNetworkVertex) {
  const auto rep = verify_scalarization_minimum(case1(), SimplexGrid(20), default_lambdas<double>());
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.theorem_vertex, Allocation::vertex(Entity::N));
  ASSERT_EQ(rep.checks.size(), 9u);
  for (const auto& c : rep.checks) EXPECT_EQ(c.grid_argmin, Allocation::vertex(Entity::N)) << c.lambda;
}

TEST(VerifyScalarization, Case3MinimumAtIndependentVertex) {
  const auto rep = verify_scalarization_minimum(case3(), SimplexGrid(20), {0.5});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks[0].grid_argmin, Allocation::vertex(Entity::A));
}

TEST(VerifyScalarization, OnlyRThreatSurvives) {
  auto s = case2();
  s.alpha_d = s.alpha_c;
  s.gamma_a = 0;
  const auto rep = verify_scalarization_minimum(s, SimplexGrid(10), {0.2, 0.7});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.theorem_vertex, Allocation::vertex(Entity::R));
  for (const auto& c : rep.checks) EXPECT_EQ(c.grid_argmin, Allocation::vertex(Entity::R));
}

TEST(VerifyScalarization, RandomScenariosAlwaysPass) {
  testing::ScenarioGen gen(59);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(verify_scalarization_minimum(gen(), SimplexGrid(12), default_lambdas<double>()).passed());
}

TEST(VerifyScalarization, RejectsLambdaOutsideUnitInterval) {
  EXPECT_THROW(verify_scalarization_minimum(case1(), SimplexGrid(10), {1.5}), std::invalid_argument);
}

TEST(VerifyDominance, Case1) {
  const auto rep = verify_dominance(case1(), SimplexGrid(10), IntegratorConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_GE(rep.worst_margin, -1e-6);
  EXPECT_EQ(rep.theorem_vertex, Allocation::vertex(Entity::N));
  EXPECT_EQ(rep.sample_times.size(), 50u);
  EXPECT_GT(rep.horizon, 0.0);
}

TEST(VerifyDominance, BlueAgainstSupportedForceOnly) {
  auto s = case1();
  s.gamma_a = 0;
  s.a0 = 0;
  const auto rep = verify_dominance(s, SimplexGrid(10), IntegratorConfig{});
  EXPECT_TRUE(rep.passed()) << rep.worst_margin;
}

TEST(VerifyDominance, VerticesOnlyCase3) {
  const auto rep = verify_dominance(case3(), SimplexGrid(1), IntegratorConfig{});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.theorem_vertex, Allocation::vertex(Entity::A));
  EXPECT_EQ(rep.worst_margin, 0.0);
}

TEST(VerifyDominance, HorizonIsEarliestFirstElimination) {
  const auto s = case2();
  const SimplexGrid g(4);
  const auto rep = verify_dominance(s, g, IntegratorConfig{});
  double earliest = 1e300;
  for (const auto& p : g.points()) {
    const auto res = run_stage(s, p, BattleState::initial(s), IntegratorConfig{});
    ASSERT_TRUE(res.event);
    earliest = std::min(earliest, res.event->time);
  }
  EXPECT_EQ(rep.horizon, earliest);
}

TEST(VerifyDominance, RefinementDoesNotWorsenViolation) {
  for (const auto& s : {case1(), case2(), case3()}) {
    const auto coarse = verify_dominance(s, SimplexGrid(5), IntegratorConfig{});
    const auto fine = verify_dominance(s, SimplexGrid(10), IntegratorConfig{});
    EXPECT_GE(std::min(fine.worst_margin, 0.0), std::min(coarse.worst_margin, 0.0) - 1e-9);
  }
}

TEST(VerifyDominance, RandomScenarios) {
  testing::ScenarioGen gen(61);
  for (int i = 0; i < 10; ++i) {
    const auto s = gen();
    const auto rep = verify_dominance(s, SimplexGrid(6), IntegratorConfig{});
    EXPECT_TRUE(rep.passed()) << "worst " << rep.worst_margin;
  }
}

}  // namespace
}  // namespace ncw
