#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "regmdp/mdp.hpp"
#include "regmdp/scenario.hpp"

using namespace regmdp;

namespace {

std::map<std::size_t, double> as_map(const std::vector<Transition>& ts) {
  std::map<std::size_t, double> m;
  for (const auto& t : ts) m[t.state] += t.prob;
  return m;
}

double total(const std::vector<Transition>& ts) {
  double s = 0.0;
  for (const auto& t : ts) s += t.prob;
  return s;
}

}  // namespace

TEST(StateSpace, BuildUniform) {
  const auto sp = build_state_space(0.0, 1.0, 11, 1.0);
  ASSERT_EQ(sp.size(), 11u);
  EXPECT_DOUBLE_EQ(sp.level(5), 0.5);
  EXPECT_EQ(sp.backlash_index(), 10u);
  EXPECT_DOUBLE_EQ(sp.backlash_effort(), 1.0);
  EXPECT_DOUBLE_EQ(sp.lowest(), 0.0);
}

TEST(StateSpace, BacklashBelowMax) {
  const auto sp = build_state_space(0.0, 2.0, 5, 0.8);
  EXPECT_DOUBLE_EQ(sp.backlash_effort(), 0.8);
  EXPECT_DOUBLE_EQ(sp.level(1), 0.2);
}

TEST(StateSpace, Validation) {
  EXPECT_THROW(StateSpace({0.5}), ConstructionError);
  EXPECT_THROW(StateSpace({0.0, 0.5, 0.5}), ConstructionError);
  EXPECT_THROW(StateSpace({-0.1, 0.5}), ConstructionError);
  EXPECT_THROW(build_state_space(0.0, 1.0, 1, 1.0), ConstructionError);
  EXPECT_THROW(build_state_space(0.0, 1.0, 5, 1.5), ConstructionError);
  EXPECT_THROW(build_state_space(0.5, 1.0, 5, 0.5), ConstructionError);
}

TEST(StateSpace, NeighboursAndFloor) {
  const auto sp = build_state_space(0.0, 1.0, 11, 1.0);
  EXPECT_EQ(next_lower_state(sp, 5), 4u);
  EXPECT_THROW(next_lower_state(sp, 0), DomainError);
  EXPECT_EQ(state_floor(sp, 0.55), 5u);
  EXPECT_EQ(state_floor(sp, 1.0), 10u);
  EXPECT_EQ(state_floor(sp, 7.0), 10u);
  EXPECT_THROW(state_floor(StateSpace({0.2, 0.4}), 0.1), DomainError);
}

TEST(ActionGrid, ContainsEveryLevelAndEndpoints) {
  const StateSpace sp({0.0, 0.1234567, 0.5, 0.77777});
  const ActionGrid g(1.0, 1e-2, sp);
  EXPECT_EQ(g.effort(0), 0.0);
  EXPECT_EQ(g.max_effort(), 1.0);
  EXPECT_TRUE(std::is_sorted(g.efforts().begin(), g.efforts().end()));
  EXPECT_EQ(std::adjacent_find(g.efforts().begin(), g.efforts().end()), g.efforts().end());
  for (double lv : sp.levels()) {
    EXPECT_TRUE(std::find(g.efforts().begin(), g.efforts().end(), lv) != g.efforts().end()) << lv;
    EXPECT_EQ(g.effort(g.first_feasible(lv)), lv);
  }
}

TEST(ActionGrid, NonDividingStepKeepsMax) {
  const ActionGrid g(1.0, 0.3, StateSpace({0.0, 1.0}));
  EXPECT_EQ(g.max_effort(), 1.0);
  EXPECT_EQ(g.size(), 5u);  // 0, 0.3, 0.6, 0.9, 1.0
}

// Harm first with h(e), then drift g(e_c) or stay.
TEST(Transitions, ReferenceValues) {
  const auto mdp = canonical_scenario().mdp();
  const auto m = as_map(transition_distribution(mdp, 5, 0.5));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_NEAR(m.at(10), 0.278504128118743863, 1e-15);
  EXPECT_NEAR(m.at(4), 0.216448761564376841, 1e-15);
  EXPECT_NEAR(m.at(5), 0.505047110316879296, 1e-15);
}

TEST(Transitions, LowestStateKeepsNoHarmMass) {
  const auto mdp = canonical_scenario().mdp();
  const auto m = as_map(transition_distribution(mdp, 0, 0.3));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(m.at(0), 1.0 - mdp.harm().prob(0.3), 1e-15);
}

TEST(Transitions, BacklashStateMergesHarmAndStay) {
  const auto mdp = canonical_scenario().mdp();
  const auto ts = transition_distribution(mdp, 10, 1.0);
  const auto m = as_map(ts);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(ts.size(), 2u);
  const double h = mdp.harm().prob(1.0);
  EXPECT_NEAR(m.at(10), h + (1 - h) * 0.7, 1e-15);
  EXPECT_NEAR(m.at(9), (1 - h) * 0.3, 1e-15);
}

TEST(Transitions, RowsSumToOneOnRandomScenarios) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto mdp = random_scenario(rng).mdp();
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
      const auto& g = mdp.actions();
      for (std::size_t a = g.first_feasible(mdp.space().level(s)); a < g.size(); a += 97) {
        EXPECT_NEAR(total(transition_distribution(mdp, s, g.effort(a))), 1.0, 1e-14);
      }
    }
  }
}

TEST(Transitions, InfeasibleEffortThrows) {
  const auto mdp = canonical_scenario().mdp();
  EXPECT_THROW(transition_distribution(mdp, 5, 0.4), FeasibilityError);
}

TEST(Policies, ComplyAndThreshold) {
  const auto mdp = canonical_scenario().mdp();
  const auto comply = comply_policy(mdp);
  for (std::size_t s = 0; s < mdp.n_states(); ++s) EXPECT_EQ(comply[s], mdp.space().level(s));
  const auto pi = threshold_policy(mdp, 0.45);
  EXPECT_EQ(pi[0], 0.45);
  EXPECT_EQ(pi[4], 0.45);
  EXPECT_EQ(pi[5], 0.5);
  EXPECT_NO_THROW(require_feasible(mdp, pi));
  Policy bad = comply;
  bad.choice[3] = 0.1;
  EXPECT_THROW(require_feasible(mdp, bad), FeasibilityError);
  bad.choice.pop_back();
  EXPECT_THROW(require_feasible(mdp, bad), FeasibilityError);
}

TEST(RegulationMdp, Validation) {
  const auto sc = canonical_scenario();
  const StateSpace sp(sc.levels);
  const DriftModel d(sc.drift);
  EXPECT_THROW(RegulationMdp(sp, 1.0, 1e-3, sc.harm, sc.cost, d, 1.0), ConstructionError);
  EXPECT_THROW(RegulationMdp(sp, 1.0, 1e-3, sc.harm, sc.cost, d, -0.1), ConstructionError);
  EXPECT_THROW(RegulationMdp(sp, 1.0, 1e-3, sc.harm, sc.cost, DriftModel::constant(0.3, 4), 0.9), ConstructionError);
  EXPECT_THROW(RegulationMdp(sp, 0.5, 1e-3, sc.harm, sc.cost, d, 0.9), ConstructionError);
  EXPECT_NO_THROW(RegulationMdp(sp, 1.0, 1e-3, sc.harm, sc.cost, d, 0.0));
  EXPECT_EQ(sc.mdp().with_gamma(0.5).gamma(), 0.5);
}
