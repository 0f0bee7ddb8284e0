// The OpenMP kernels must reproduce their serial references exactly. ctest
// runs this binary with several threads even on one core.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "regmdp/kernels.hpp"
#include "regmdp/scenario.hpp"
#include "regmdp/threshold.hpp"

using namespace regmdp;

TEST(Kernels, BellmanSweepBitwise) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5; ++i) {
    const auto mdp = random_scenario(rng).mdp();
    const auto t = kernels::BellmanTables::from(mdp);
    std::vector<double> v(mdp.n_states());
    for (auto& x : v) x = -std::uniform_real_distribution<double>(0.0, 5.0)(rng);
    std::vector<double> a(v.size()), b(v.size());
    std::vector<std::size_t> ia(v.size()), ib(v.size());
    kernels::serial::bellman_sweep(t, v, a, ia);
    kernels::omp::bellman_sweep(t, v, b, ib);
    EXPECT_EQ(a, b);
    EXPECT_EQ(ia, ib);
  }
}

TEST(Kernels, MapBitwise) {
  const auto mdp = canonical_scenario().mdp();
  std::vector<double> xs;
  for (int i = 0; i <= 200; ++i) xs.push_back(i / 200.0);
  std::vector<double> a(xs.size()), b(xs.size());
  const auto fn = [&](double e) { return threshold_gap(mdp, e); };
  kernels::serial::map(xs, a, fn);
  kernels::omp::map(xs, b, fn);
  EXPECT_EQ(a, b);
}

TEST(Kernels, MapPropagatesExceptions) {
  std::vector<double> xs(64, 1.0), out(64);
  xs[40] = -1.0;
  const auto fn = [](double x) {
    if (x < 0) throw std::domain_error("negative");
    return std::sqrt(x);
  };
  EXPECT_THROW(kernels::omp::map(xs, out, fn), std::domain_error);
  EXPECT_THROW(kernels::serial::map(xs, out, fn), std::domain_error);
}

TEST(Kernels, EpisodeReturnsBitwise) {
  const auto mdp = canonical_scenario().mdp();
  const auto t = kernels::EpisodeTables::from(mdp, threshold_policy(mdp, 0.45));
  std::vector<double> a(3000), b(3000);
  kernels::serial::episode_returns(t, 123, 10, mdp.space().backlash_index(), 150, a);
  kernels::omp::episode_returns(t, 123, 10, mdp.space().backlash_index(), 150, b);
  EXPECT_EQ(a, b);

  // Episode offsets address the same streams.
  std::vector<double> tail(100);
  kernels::serial::episode_returns(t, 123, 110, mdp.space().backlash_index(), 150, tail);
  EXPECT_EQ(std::vector<double>(a.begin() + 100, a.begin() + 200), tail);
}

TEST(Kernels, UniformDrawsInUnitInterval) {
  auto eng = kernels::episode_engine(1, 2);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = kernels::uniform01(eng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}
