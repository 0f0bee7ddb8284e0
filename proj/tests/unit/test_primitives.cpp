#include <gtest/gtest.h>

#include <cmath>

#include "regmdp/primitives.hpp"

using namespace regmdp;

namespace {

WelfareModel canonical_welfare() {
  return WelfareModel{HarmModel::exponential(0.1, 0.9, 3.0), CostModel(0.5, 0.1), 2.0};
}

}  // namespace

// Reference values computed at 30 digits.
TEST(HarmModel, ExponentialValues) {
  const auto h = HarmModel::exponential(0.1, 0.9, 3.0);
  EXPECT_NEAR(h.prob(0.5), 0.278504128118743863, 1e-15);
  EXPECT_NEAR(h.derivative(0.5), -0.535512384356231589, 1e-15);
  EXPECT_DOUBLE_EQ(h.prob(0.0), 0.9);
  EXPECT_DOUBLE_EQ(h.derivative(0.0), -2.4);
  EXPECT_GT(h.second_derivative(0.5), 0.0);
}

TEST(HarmModel, ExponentialIsDecreasingTowardsFloor) {
  const auto h = HarmModel::exponential(0.1, 0.9, 3.0);
  double prev = h.prob(0.0);
  for (int i = 1; i <= 100; ++i) {
    const double cur = h.prob(i * 0.1);
    EXPECT_LT(cur, prev);
    EXPECT_GT(cur, 0.1);
    prev = cur;
  }
}

TEST(HarmModel, RejectsBadParameters) {
  EXPECT_THROW(HarmModel::exponential(0.0, 0.9, 3.0), DomainError);
  EXPECT_THROW(HarmModel::exponential(0.5, 0.4, 3.0), DomainError);
  EXPECT_THROW(HarmModel::exponential(0.1, 1.1, 3.0), DomainError);
  EXPECT_THROW(HarmModel::exponential(0.1, 0.9, 0.0), DomainError);
  EXPECT_THROW(HarmModel::exponential(0.1, 0.9, 3.0).prob(-0.1), DomainError);
}

TEST(HarmModel, PiecewiseLinearInterpolatesKnots) {
  const auto h = HarmModel::piecewise_linear({{0.0, 0.8}, {0.5, 0.4}, {1.0, 0.2}});
  EXPECT_DOUBLE_EQ(h.prob(0.0), 0.8);
  EXPECT_DOUBLE_EQ(h.prob(0.25), 0.6);
  EXPECT_DOUBLE_EQ(h.prob(0.75), 0.3);
  EXPECT_DOUBLE_EQ(h.derivative(0.25), -0.8);
  EXPECT_DOUBLE_EQ(h.derivative(0.5), -0.4);  // right derivative at a knot
  EXPECT_DOUBLE_EQ(h.second_derivative(0.25), 0.0);
  EXPECT_DOUBLE_EQ(h.domain_max(), 1.0);
  EXPECT_THROW(h.prob(1.5), DomainError);
}

TEST(HarmModel, PiecewiseLinearRejectsConcaveKnots) {
  EXPECT_THROW(HarmModel::piecewise_linear({{0.0, 0.8}, {0.5, 0.7}, {1.0, 0.2}}), DomainError);
  EXPECT_THROW(HarmModel::piecewise_linear({{0.1, 0.8}, {1.0, 0.2}}), DomainError);
  EXPECT_THROW(HarmModel::piecewise_linear({{0.0, 0.8}, {1.0, 0.9}}), DomainError);
}

TEST(CostModel, ValuesAndValidation) {
  const CostModel c(0.5, 0.1);
  EXPECT_DOUBLE_EQ(c.cost(0.0), 0.0);
  EXPECT_DOUBLE_EQ(c.cost(1.0), 0.6);
  EXPECT_DOUBLE_EQ(c.derivative(1.0), 1.1);
  EXPECT_DOUBLE_EQ(c.second_derivative(), 1.0);
  EXPECT_THROW(CostModel(0.0, 0.1), DomainError);
  EXPECT_THROW(CostModel(0.5, -0.1), DomainError);
  EXPECT_THROW(c.cost(-1.0), DomainError);
}

TEST(CostModel, StrictlyConvexFirstOrderCondition) {
  const CostModel c(0.5, 0.1);
  for (double e1 = 0.0; e1 <= 1.0; e1 += 0.05) {
    for (double e2 = 0.0; e2 <= 1.0; e2 += 0.05) {
      if (std::abs(e1 - e2) < 1e-9) continue;
      EXPECT_GT(c.cost(e2) - c.cost(e1), c.derivative(e1) * (e2 - e1));
    }
  }
}

TEST(DriftModel, Validation) {
  EXPECT_NO_THROW(DriftModel({0.0, 0.3, 1.0}));
  EXPECT_THROW(DriftModel({0.1, 0.3}), DomainError);
  EXPECT_THROW(DriftModel({0.0, 1.3}), DomainError);
  const auto d = DriftModel::constant(0.3, 4);
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(d.prob(0), 0.0);
  EXPECT_EQ(d.prob(3), 0.3);
}

TEST(Welfare, ExpectedWelfareValues) {
  auto w = canonical_welfare();
  EXPECT_DOUBLE_EQ(expected_welfare(w, 0.0), -1.8);
  // -2 h(0.5) - c(0.5) with c(0.5) = 0.175.
  EXPECT_NEAR(expected_welfare(w, 0.5), -0.732008256237487726, 1e-15);
  w.damage = 0.0;
  EXPECT_DOUBLE_EQ(expected_welfare(w, 0.7), -w.cost.cost(0.7));
  EXPECT_THROW(expected_welfare(w, -0.1), DomainError);
}

TEST(Welfare, FirstBestCanonical) {
  EXPECT_NEAR(socially_optimal_effort(canonical_welfare(), 1.0), 0.628473373771789218, 1e-11);
}

TEST(Welfare, FirstBestSecondCost) {
  const WelfareModel w{HarmModel::exponential(0.1, 0.9, 3.0), CostModel(0.2, 0.05), 2.0};
  EXPECT_NEAR(socially_optimal_effort(w, 1.0), 0.840132259957331525, 1e-11);
}

TEST(Welfare, FirstBestBoundaries) {
  auto w = canonical_welfare();
  w.damage = 0.0;
  EXPECT_EQ(socially_optimal_effort(w, 1.0), 0.0);
  w.damage = 1e6;
  EXPECT_EQ(socially_optimal_effort(w, 1.0), 1.0);
  EXPECT_THROW(socially_optimal_effort(canonical_welfare(), -1.0), DomainError);
}

TEST(Welfare, FreeFunctionsMatchMembers) {
  const auto w = canonical_welfare();
  EXPECT_EQ(harm_prob(w.harm, 0.3), w.harm.prob(0.3));
  EXPECT_EQ(harm_prob_derivative(w.harm, 0.3), w.harm.derivative(0.3));
  EXPECT_EQ(cost(w.cost, 0.3), w.cost.cost(0.3));
  EXPECT_EQ(cost_derivative(w.cost, 0.3), w.cost.derivative(0.3));
}
