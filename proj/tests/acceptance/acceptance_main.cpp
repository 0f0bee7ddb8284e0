// Acceptance suite: one PASS/FAIL line per criterion. Sizes, seeds and
// tolerances are pinned here; seeds are fixed in advance and never tuned.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "regmdp/verify.hpp"

using regmdp::verify::SuiteResult;

namespace {

constexpr std::uint64_t kSeed = 20240901;

struct Criterion {
  int id;
  std::string title;
  std::vector<SuiteResult> suites;
  double seconds;
};

template <typename F>
Criterion measure(int id, std::string title, F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SuiteResult> suites = fn();
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {id, std::move(title), std::move(suites), s};
}

}  // namespace

int main() {
  using namespace regmdp::verify;
  std::vector<Criterion> results;

  results.push_back(measure(1, "threshold policy matches value iteration within one action step, 20/20 scenarios",
                            [] { return std::vector{threshold_optimality_suite(kSeed + 1, 20, 1.0)}; }));
  results.push_back(measure(2, "states at or below tau share one value (spread <= 1e-9), 21-point tau grid",
                            [] { return std::vector{shared_low_value_suite(kSeed + 2, 20, 21, 1e-9)}; }));
  results.push_back(measure(3, "backlash state has the lowest value (slack 1e-9), zero violations",
                            [] { return std::vector{backlash_worst_state_suite(kSeed + 2, 20, 21, 1e-9)}; }));
  results.push_back(measure(4, "q-value order agrees with the preference condition, 1000 triples per scenario",
                            [] { return std::vector{preference_sign_suite(kSeed + 4, 20, 1000, 1e-9)}; }));
  results.push_back(measure(5, "static optimum never exceeds e_c: 100 (r, F) draws, F up to 1e9, both families",
                            [] { return std::vector{static_minimum_suite(kSeed + 5, 100, 1e9)}; }));
  results.push_back(measure(6, "backlash design round trip on 10 feasible instances; overreaction gap < 0 on 10",
                            [] {
                              return std::vector{design_suite(kSeed + 6, 10, 2.0), overreaction_suite(kSeed + 6, 10)};
                            }));
  results.push_back(measure(7, "two-cost report: no required effort attains both first-best efforts",
                            [] { return std::vector{impossibility_suite(1e-6)}; }));
  results.push_back(measure(8, "Monte Carlo within 95% half-width + truncation, 5 scenarios x 100k episodes",
                            [] { return std::vector{monte_carlo_suite(kSeed + 8, 5, 100'000, 1e-6, 0.01)}; }));
  results.push_back(measure(9, "finite differences within 1e-6, Bellman residual <= 1e-10, e* within 2e-4 of grid",
                            [] { return std::vector{hygiene_suite(kSeed + 9, 1000, 20)}; }));

  int failed = 0;
  for (const auto& c : results) {
    bool ok = true;
    for (const auto& s : c.suites) ok = ok && s.passed();
    failed += ok ? 0 : 1;
    std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), c.seconds);
    for (const auto& s : c.suites) {
      std::printf("       %s: %zu checks, %zu failures; %s\n", s.name.c_str(), s.checks, s.failures, s.detail.c_str());
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
