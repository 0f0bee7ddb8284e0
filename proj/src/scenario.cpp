#include "regmdp/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace regmdp {

RegulationMdp Scenario::mdp() const {
  return RegulationMdp(StateSpace(levels), e_max, action_step, harm, cost, DriftModel(drift), gamma);
}

WelfareModel Scenario::welfare() const { return WelfareModel{harm, cost, damage}; }

Scenario random_scenario(std::mt19937_64& rng, const ScenarioRanges& ranges) {
  auto unif = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  const double h_min = unif(0.02, 0.3);
  const double h_max = std::min(1.0, unif(h_min + 0.3, h_min + 0.9));
  const double k = unif(1.0, 6.0);
  const double a = unif(0.1, 2.0);
  const double b = unif(0.01, 0.5);
  const double gamma = unif(ranges.gamma_lo, ranges.gamma_hi);
  const auto n = std::uniform_int_distribution<std::size_t>(ranges.states_lo, ranges.states_hi)(rng);

  std::vector<double> levels;
  if (unif(0.0, 1.0) < 0.5) {
    levels = build_state_space(0.0, ranges.e_max, n, ranges.e_max).levels();
  } else {
    // Irregular grid: sorted draws on (0, e_max) with 0 and e_max added,
    // spaced at least two action steps apart.
    levels.push_back(0.0);
    std::vector<double> inner;
    while (inner.size() < n - 2) {
      const double x = unif(2.0 * ranges.action_step, ranges.e_max - 2.0 * ranges.action_step);
      const bool clash = std::any_of(inner.begin(), inner.end(),
                                     [&](double y) { return std::abs(x - y) < 2.0 * ranges.action_step; });
      if (!clash) inner.push_back(x);
    }
    std::sort(inner.begin(), inner.end());
    levels.insert(levels.end(), inner.begin(), inner.end());
    levels.push_back(ranges.e_max);
  }

  std::vector<double> drift(n);
  if (unif(0.0, 1.0) < 0.5) {
    std::fill(drift.begin(), drift.end(), unif(0.0, 0.8));
  } else {
    for (auto& g : drift) g = unif(0.0, 0.9);
  }
  drift.front() = 0.0;

  return Scenario{HarmModel::exponential(h_min, h_max, k),
                  CostModel(a, b),
                  unif(0.5, 5.0),
                  gamma,
                  std::move(levels),
                  std::move(drift),
                  ranges.e_max,
                  ranges.action_step};
}

Scenario canonical_scenario() {
  auto levels = build_state_space(0.0, 1.0, 11, 1.0).levels();
  return Scenario{HarmModel::exponential(0.1, 0.9, 3.0),
                  CostModel(0.5, 0.1),
                  2.0,
                  0.9,
                  levels,
                  DriftModel::constant(0.3, levels.size()).probs(),
                  1.0,
                  1e-3};
}

}  // namespace regmdp
