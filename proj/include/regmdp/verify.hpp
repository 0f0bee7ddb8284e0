#pragma once

// Randomized property suites shared by the `verify` subcommand and the
// acceptance tests. Each suite counts individual checks and failures; the
// caller decides the sizes and tolerances.

#include <cstdint>
#include <string>
#include <vector>

namespace regmdp::verify {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double allowed_failure_rate = 0.0;
  std::string detail;  ///< first failure, or a one-line summary

  bool passed() const {
    return checks > 0 &&
           static_cast<double>(failures) <= allowed_failure_rate * static_cast<double>(checks);
  }
};

/// Threshold policy max(e_hat, e_c) vs value iteration on random MDPs; one
/// check per scenario, all states within step_multiple action steps.
SuiteResult threshold_optimality_suite(std::uint64_t seed, std::size_t scenarios, double step_multiple = 1.0);

/// Spread of threshold-policy values over states at or below tau.
SuiteResult shared_low_value_suite(std::uint64_t seed, std::size_t scenarios, std::size_t taus = 21, double tol = 1e-9);

/// v(e_h) <= v(e_c) + tol for every threshold policy and state.
SuiteResult backlash_worst_state_suite(std::uint64_t seed, std::size_t scenarios, std::size_t taus = 21, double tol = 1e-9);

/// Sign of q(e_c, e2) - q(e_c, e1) against the closed-form preference
/// condition, wherever its margin exceeds `margin`.
SuiteResult preference_sign_suite(std::uint64_t seed, std::size_t scenarios, std::size_t triples = 1000,
                         double margin = 1e-9);

/// Static optimum never exceeds e_c over random (r, F), all states, both
/// audit-failure families; also matched against a direct grid argmax.
SuiteResult static_minimum_suite(std::uint64_t seed, std::size_t draws = 100, double fine_max = 1e9);

/// Backlash design round trip on feasible random instances.
SuiteResult design_suite(std::uint64_t seed, std::size_t feasible = 10, double step_multiple = 2.0);

/// Stable effort stays below e* whenever e_h <= e*.
SuiteResult overreaction_suite(std::uint64_t seed, std::size_t scenarios = 10);

/// Canonical two-cost demonstration.
SuiteResult impossibility_suite(double tol = 1e-6);

/// Monte Carlo mean vs analytic value of pi^e_hat from e_h.
SuiteResult monte_carlo_suite(std::uint64_t seed, std::size_t scenarios = 5, std::size_t episodes = 100'000,
                              double truncation = 1e-6, double allowed_failure_rate = 0.01);

/// Finite-difference derivatives, Bellman residuals, first-best vs grid search.
SuiteResult hygiene_suite(std::uint64_t seed, std::size_t points = 1000, std::size_t welfare_sets = 20);

}  // namespace regmdp::verify
