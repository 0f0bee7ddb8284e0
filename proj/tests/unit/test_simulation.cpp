#include <gtest/gtest.h>

#include <cmath>

#include "regmdp/scenario.hpp"
#include "regmdp/simulation.hpp"
#include "regmdp/threshold.hpp"

using namespace regmdp;

namespace {

struct Fixture {
  RegulationMdp mdp = canonical_scenario().mdp();
  Policy pi = threshold_policy(mdp, optimal_threshold(mdp));
};

}  // namespace

TEST(Trajectory, StartsAtBacklashAndIsReproducible) {
  Fixture f;
  const auto a = sample_trajectory(f.mdp, f.pi, 42, 50);
  const auto b = sample_trajectory(f.mdp, f.pi, 42, 50);
  ASSERT_EQ(a.steps.size(), 50u);
  EXPECT_EQ(a.steps.front().state_index, f.mdp.space().backlash_index());
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    EXPECT_EQ(a.steps[t].state_index, b.steps[t].state_index);
    EXPECT_EQ(a.steps[t].harm, b.steps[t].harm);
  }
  EXPECT_EQ(a.discounted_return, b.discounted_return);
}

TEST(Trajectory, StepsFollowTheModel) {
  Fixture f;
  const auto tr = sample_trajectory(f.mdp, f.pi, 7, 2000, std::size_t{3}, 5);
  EXPECT_EQ(tr.steps.front().state_index, 3u);
  double ret = 0.0, disc = 1.0;
  for (std::size_t t = 0; t < tr.steps.size(); ++t) {
    const auto& st = tr.steps[t];
    EXPECT_EQ(st.action, f.pi[st.state_index]);
    EXPECT_DOUBLE_EQ(st.reward, -f.mdp.cost().cost(st.action));
    ret += disc * st.reward;
    disc *= f.mdp.gamma();
    if (t + 1 < tr.steps.size()) {
      const auto next = tr.steps[t + 1].state_index;
      if (st.harm) {
        EXPECT_EQ(next, f.mdp.space().backlash_index());
      } else {
        EXPECT_TRUE(next == st.state_index || next + 1 == st.state_index);
      }
    }
  }
  EXPECT_NEAR(tr.discounted_return, ret, 1e-12);
}

TEST(Trajectory, DifferentEpisodesDiffer) {
  Fixture f;
  const auto a = sample_trajectory(f.mdp, f.pi, 1, 200, std::nullopt, 0);
  const auto b = sample_trajectory(f.mdp, f.pi, 1, 200, std::nullopt, 1);
  bool differ = false;
  for (std::size_t t = 0; t < 200; ++t) differ = differ || a.steps[t].harm != b.steps[t].harm;
  EXPECT_TRUE(differ);
}

TEST(Horizon, TruncationBoundFormula) {
  Fixture f;
  EXPECT_NEAR(truncation_bound(f.mdp, 10), std::pow(0.9, 10) * 0.6 / 0.1, 1e-15);
  const auto h = minimal_horizon(f.mdp, 1e-6);
  EXPECT_LE(truncation_bound(f.mdp, h), 1e-6);
  EXPECT_GT(truncation_bound(f.mdp, h - 1), 1e-6);
}

TEST(Horizon, ShortHorizonRejected) {
  Fixture f;
  try {
    estimate_value(f.mdp, f.pi, 0, 100, 10, 1);
    FAIL() << "expected HorizonError";
  } catch (const HorizonError& e) {
    EXPECT_EQ(e.minimal_horizon(), minimal_horizon(f.mdp, 1e-6));
  }
}

TEST(MonteCarlo, AgreesWithAnalyticValue) {
  Fixture f;
  const auto v = evaluate_policy(f.mdp, f.pi);
  const std::size_t start = f.mdp.space().backlash_index();
  const auto est = estimate_value(f.mdp, f.pi, start, 20000, minimal_horizon(f.mdp), 2024);
  EXPECT_EQ(est.episodes, 20000u);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_NEAR(est.half_width_95, 1.96 * est.std_error, 1e-15);
  EXPECT_LT(std::abs(est.mean - v[start]), 4.0 * est.std_error + est.truncation_bound);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeEstimate) {
  Fixture f;
  const auto h = minimal_horizon(f.mdp);
  const auto a = estimate_value(f.mdp, f.pi, 0, 5000, h, 99, 1e-6, Backend::Serial);
  const auto b = estimate_value(f.mdp, f.pi, 0, 5000, h, 99, 1e-6, Backend::Parallel);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MonteCarlo, ReplaysTrajectories) {
  Fixture f;
  const auto h = minimal_horizon(f.mdp);
  const auto tr = sample_trajectory(f.mdp, f.pi, 5, h, std::size_t{0}, 0);
  const auto tr1 = sample_trajectory(f.mdp, f.pi, 5, h, std::size_t{0}, 1);
  const auto est = estimate_value(f.mdp, f.pi, 0, 2, h, 5);
  EXPECT_NEAR(est.mean, 0.5 * (tr.discounted_return + tr1.discounted_return), 1e-12);
}
