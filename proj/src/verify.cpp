#include "regmdp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "regmdp/policy_engine.hpp"
#include "regmdp/scenario.hpp"
#include "regmdp/simulation.hpp"
#include "regmdp/threshold.hpp"

namespace regmdp::verify {

namespace {

double unif(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

SuiteResult named(std::string name) {
  SuiteResult r;
  r.name = std::move(name);
  return r;
}

void record_failure(SuiteResult& r, const std::string& what) {
  if (r.failures == 0) r.detail = what;
  ++r.failures;
}

void summarize(SuiteResult& r) {
  if (r.failures == 0) {
    std::ostringstream s;
    s << r.checks << " checks, no failures";
    r.detail = s.str();
  }
}

WelfareModel random_welfare(std::mt19937_64& rng) {
  const double h_min = unif(rng, 0.02, 0.3);
  const double h_max = std::min(1.0, unif(rng, h_min + 0.3, h_min + 0.9));
  return WelfareModel{HarmModel::exponential(h_min, h_max, unif(rng, 1.0, 6.0)),
                      CostModel(unif(rng, 0.1, 2.0), unif(rng, 0.01, 0.5)), unif(rng, 0.5, 5.0)};
}

// max - min of v over states whose level is <= tau.
double low_spread(const RegulationMdp& mdp, const ValueFunction& v, double tau) {
  double lo = v[0], hi = v[0];
  for (std::size_t s = 0; s < mdp.n_states() && mdp.space().level(s) <= tau; ++s) {
    lo = std::min(lo, v[s]);
    hi = std::max(hi, v[s]);
  }
  return hi - lo;
}

}  // namespace

SuiteResult threshold_optimality_suite(std::uint64_t seed, std::size_t scenarios, double step_multiple) {
  SuiteResult r = named("threshold_optimality");
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < scenarios; ++i) {
    const auto sc = random_scenario(rng);
    const auto mdp = sc.mdp();
    const double e_hat = optimal_threshold(mdp);
    const auto opt = value_iteration(mdp);
    const double allowed = step_multiple * sc.action_step + 1e-12;
    ++r.checks;
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
      const double expected = std::max(e_hat, mdp.space().level(s));
      if (std::abs(opt.policy[s] - expected) > allowed) {
        std::ostringstream msg;
        msg << "scenario " << i << " state " << s << ": value iteration plays " << opt.policy[s]
            << ", threshold policy plays " << expected;
        record_failure(r, msg.str());
        break;
      }
    }
  }
  summarize(r);
  return r;
}

SuiteResult shared_low_value_suite(std::uint64_t seed, std::size_t scenarios, std::size_t taus, double tol) {
  SuiteResult r = named("shared_low_value");
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < scenarios; ++i) {
    const auto mdp = random_scenario(rng).mdp();
    const double e_h = mdp.space().backlash_effort();
    for (std::size_t j = 0; j < taus; ++j) {
      const double tau = e_h * static_cast<double>(j) / static_cast<double>(taus - 1);
      const auto v = evaluate_policy(mdp, threshold_policy(mdp, tau));
      ++r.checks;
      const double spread = low_spread(mdp, v, tau);
      if (spread > tol) {
        std::ostringstream msg;
        msg << "scenario " << i << " tau " << tau << ": spread " << spread;
        record_failure(r, msg.str());
      }
    }
  }
  summarize(r);
  return r;
}

SuiteResult backlash_worst_state_suite(std::uint64_t seed, std::size_t scenarios, std::size_t taus, double tol) {
  SuiteResult r = named("backlash_worst_state");
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < scenarios; ++i) {
    const auto mdp = random_scenario(rng).mdp();
    const double e_h = mdp.space().backlash_effort();
    const std::size_t top = mdp.space().backlash_index();
    for (std::size_t j = 0; j < taus; ++j) {
      const double tau = e_h * static_cast<double>(j) / static_cast<double>(taus - 1);
      const auto v = evaluate_policy(mdp, threshold_policy(mdp, tau));
      for (std::size_t s = 0; s < mdp.n_states(); ++s) {
        ++r.checks;
        if (v[top] > v[s] + tol) {
          std::ostringstream msg;
          msg << "scenario " << i << " tau " << tau << " state " << s << ": v(e_h) " << v[top] << " > v " << v[s];
          record_failure(r, msg.str());
        }
      }
    }
  }
  summarize(r);
  return r;
}

SuiteResult preference_sign_suite(std::uint64_t seed, std::size_t scenarios, std::size_t triples, double margin) {
  SuiteResult r = named("preference_sign");
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < scenarios; ++i) {
    const auto mdp = random_scenario(rng).mdp();
    const auto& grid = mdp.actions();

    // Arbitrary feasible policy.
    Policy pi{mdp.space().levels()};
    for (std::size_t s = 0; s < pi.size(); ++s) {
      pi.choice[s] = grid.effort(std::uniform_int_distribution<std::size_t>(
          grid.first_feasible(mdp.space().level(s)), grid.size() - 1)(rng));
    }
    const auto v = evaluate_policy(mdp, pi);
    const double v_h = v[mdp.space().backlash_index()];

    for (std::size_t t = 0; t < triples; ++t) {
      const auto s = std::uniform_int_distribution<std::size_t>(0, mdp.n_states() - 1)(rng);
      const std::size_t first = grid.first_feasible(mdp.space().level(s));
      if (first + 1 >= grid.size()) continue;
      auto pick = std::uniform_int_distribution<std::size_t>(first, grid.size() - 1);
      std::size_t i1 = pick(rng), i2 = pick(rng);
      while (i2 == i1) i2 = pick(rng);
      if (i1 > i2) std::swap(i1, i2);
      const double e1 = grid.effort(i1), e2 = grid.effort(i2);

      const double lhs = continuation_value(mdp, v, s) - v_h;
      const double rhs = (mdp.cost().cost(e2) - mdp.cost().cost(e1)) /
                         (mdp.gamma() * (mdp.harm().prob(e1) - mdp.harm().prob(e2)));
      if (std::abs(lhs - rhs) <= margin) continue;
      ++r.checks;
      const bool q_prefers_e2 = q_value(mdp, v, s, e2) > q_value(mdp, v, s, e1);
      if (q_prefers_e2 != (lhs > rhs)) {
        std::ostringstream msg;
        msg << "scenario " << i << " state " << s << " e1 " << e1 << " e2 " << e2 << ": lhs " << lhs << " rhs " << rhs;
        record_failure(r, msg.str());
      }
    }
  }
  summarize(r);
  return r;
}

SuiteResult static_minimum_suite(std::uint64_t seed, std::size_t draws, double fine_max) {
  SuiteResult r = named("static_bare_minimum");
  std::mt19937_64 rng(seed);
  const auto sc = canonical_scenario();
  const auto mdp = sc.mdp();
  const auto& grid = mdp.actions().efforts();

  for (std::size_t i = 0; i < draws; ++i) {
    const double audit = unif(rng, 0.0, 1.0);
    double fine = std::exp(unif(rng, std::log(1e-3), std::log(fine_max)));
    if (i == 0) fine = fine_max;
    if (i == 1) fine = 0.0;
    const FailModel families[] = {StepFailModel{unif(rng, 0.05, 1.0)}, RampFailModel{unif(rng, 0.5, 50.0)}};
    for (const auto& fail : families) {
      const StaticRegime regime(audit, fine, fail);
      for (double e_c : sc.levels) {
        ++r.checks;
        double induced = 0.0;
        try {
          induced = static_optimal_effort(regime, sc.cost, grid, e_c);
        } catch (const std::logic_error& err) {
          record_failure(r, err.what());
          continue;
        }
        // Direct argmax of the utility over the grid plus e_c.
        double best = -std::numeric_limits<double>::infinity(), best_e = 0.0;
        std::vector<double> cand = grid;
        cand.push_back(e_c);
        std::sort(cand.begin(), cand.end());
        for (double e : cand) {
          const double eu = -sc.cost.cost(e) - audit * fail_prob(fail, e, e_c) * fine;
          if (eu > best) {
            best = eu;
            best_e = e;
          }
        }
        if (induced > e_c || induced != best_e) {
          std::ostringstream msg;
          msg << "r " << audit << " F " << fine << " e_c " << e_c << ": induced " << induced << " (oracle " << best_e
              << ")";
          record_failure(r, msg.str());
        }
      }
    }
  }
  summarize(r);
  return r;
}

SuiteResult design_suite(std::uint64_t seed, std::size_t feasible, double step_multiple) {
  SuiteResult r = named("backlash_design_round_trip");
  std::mt19937_64 rng(seed);
  constexpr double kEMax = 3.0;
  constexpr double kStep = 1e-3;
  std::size_t attempts = 0;
  while (r.checks < feasible && attempts < 50 * feasible) {
    ++attempts;
    const auto welfare = random_welfare(rng);
    const double gamma = unif(rng, 0.6, 0.95);
    const double e_star = socially_optimal_effort(welfare, kEMax);
    if (e_star < 0.05 || e_star > 0.8 * kEMax) continue;

    const auto n_lower = std::uniform_int_distribution<std::size_t>(4, 15)(rng);
    const double top = e_star * unif(rng, 0.3, 0.95);
    std::vector<double> lower(n_lower);
    for (std::size_t i = 0; i < n_lower; ++i) lower[i] = top * static_cast<double>(i) / static_cast<double>(n_lower - 1);
    const auto drift = DriftModel::constant(unif(rng, 0.0, 0.8), n_lower + 1);
    const BacklashTemplate tmpl{lower, kEMax, kStep};
    const double tol = step_multiple * kStep;

    BacklashDesign design;
    try {
      design = design_backlash(welfare, gamma, tmpl, drift, tol);
    } catch (const BracketError&) {
      continue;  // infeasible instance, not a failure
    }
    ++r.checks;
    const auto mdp = backlash_mdp(welfare, gamma, tmpl, drift, design.designed_e_h);
    const double e_hat = optimal_threshold(mdp);
    const auto opt = value_iteration(mdp);
    std::ostringstream msg;
    if (!(design.designed_e_h > e_star)) {
      msg << "designed e_h " << design.designed_e_h << " <= e* " << e_star;
    } else if (std::abs(e_hat - e_star) > tol + 1e-12) {
      msg << "re-solved e_hat " << e_hat << " vs e* " << e_star;
    } else if (std::abs(opt.policy[0] - e_star) > tol + 1e-12) {
      msg << "value iteration plays " << opt.policy[0] << " at the lowest state vs e* " << e_star;
    }
    if (!msg.str().empty()) record_failure(r, msg.str());
  }
  if (r.checks < feasible) {
    std::ostringstream msg;
    msg << "only " << r.checks << " feasible instances in " << attempts << " attempts";
    record_failure(r, msg.str());
  }
  summarize(r);
  return r;
}

SuiteResult overreaction_suite(std::uint64_t seed, std::size_t scenarios) {
  SuiteResult r = named("overreaction_necessary");
  std::mt19937_64 rng(seed);
  std::size_t attempts = 0;
  while (r.checks < scenarios && attempts < 50 * scenarios) {
    ++attempts;
    const auto welfare = random_welfare(rng);
    const double e_star = socially_optimal_effort(welfare, 1.0);
    if (e_star < 0.05) continue;
    const double e_h = r.checks == 0 ? e_star : e_star * unif(rng, 0.3, 1.0);
    const auto n = std::uniform_int_distribution<std::size_t>(5, 20)(rng);
    const auto space = build_state_space(0.0, 1.0, n, e_h);
    const RegulationMdp mdp(space, 1.0, 1e-3, welfare.harm, welfare.cost, DriftModel::constant(unif(rng, 0.0, 0.8), n),
                            unif(rng, 0.5, 0.99));
    ++r.checks;
    try {
      const double gap = overreaction_gap(mdp, welfare);
      if (!(gap < 0.0)) {
        std::ostringstream msg;
        msg << "e_h " << e_h << " <= e* " << e_star << " but gap " << gap;
        record_failure(r, msg.str());
      }
    } catch (const std::logic_error& err) {
      record_failure(r, err.what());
    }
  }
  summarize(r);
  return r;
}

SuiteResult impossibility_suite(double tol) {
  SuiteResult r = named("two_cost_impossibility");
  const auto sc = canonical_scenario();
  const auto mdp = sc.mdp();
  const ImpossibilityInputs in{sc.harm,
                               sc.damage,
                               sc.cost,
                               CostModel(0.2, 0.05),
                               sc.e_max,
                               sc.levels,
                               mdp.actions().efforts(),
                               StaticRegime(1.0, 1e6, StepFailModel{1.0}),
                               tol};
  const auto rep = impossibility_report(in);
  ++r.checks;
  if (rep.degenerate || !rep.impossibility_holds) record_failure(r, rep.note);
  for (const auto& row : rep.rows) {
    ++r.checks;
    if (row.gap_1 <= tol && row.gap_2 <= tol) {
      std::ostringstream msg;
      msg << "required effort " << row.required_effort << " attains both optima";
      record_failure(r, msg.str());
    }
  }
  summarize(r);
  return r;
}

SuiteResult monte_carlo_suite(std::uint64_t seed, std::size_t scenarios, std::size_t episodes, double truncation,
                              double allowed_failure_rate) {
  SuiteResult r = named("monte_carlo_vs_analytic");
  r.allowed_failure_rate = allowed_failure_rate;
  std::mt19937_64 rng(seed);
  ScenarioRanges ranges;
  ranges.gamma_hi = 0.9;
  ranges.states_hi = 15;
  std::ostringstream summary;
  for (std::size_t i = 0; i < scenarios; ++i) {
    const auto mdp = random_scenario(rng, ranges).mdp();
    const auto policy = threshold_policy(mdp, optimal_threshold(mdp));
    const auto v = evaluate_policy(mdp, policy);
    const std::size_t start = mdp.space().backlash_index();
    const auto est = estimate_value(mdp, policy, start, episodes, minimal_horizon(mdp, truncation), seed + i, truncation);
    ++r.checks;
    const double err = std::abs(est.mean - v[start]);
    summary << (i ? "; " : "") << "z=" << err / est.std_error;
    if (err > est.half_width_95 + est.truncation_bound) {
      std::ostringstream msg;
      msg << "scenario " << i << ": |mean - v| = " << err << " > " << est.half_width_95 + est.truncation_bound;
      record_failure(r, msg.str());
    }
  }
  if (r.failures == 0) r.detail = summary.str();
  return r;
}

SuiteResult hygiene_suite(std::uint64_t seed, std::size_t points, std::size_t welfare_sets) {
  SuiteResult r = named("numerical_hygiene");
  std::mt19937_64 rng(seed);
  constexpr double kDelta = 1e-6;

  for (std::size_t i = 0; i < points; ++i) {
    const auto w = random_welfare(rng);
    const double e = unif(rng, 1e-3, 1.0);
    const double fd_h = (w.harm.prob(e + kDelta) - w.harm.prob(e - kDelta)) / (2 * kDelta);
    const double fd_c = (w.cost.cost(e + kDelta) - w.cost.cost(e - kDelta)) / (2 * kDelta);
    const double rel_h = std::abs(fd_h - w.harm.derivative(e)) / std::abs(w.harm.derivative(e));
    const double rel_c = std::abs(fd_c - w.cost.derivative(e)) / std::abs(w.cost.derivative(e));
    r.checks += 2;
    if (rel_h > 1e-6) record_failure(r, "h' disagrees with central differences at e = " + std::to_string(e));
    if (rel_c > 1e-6) record_failure(r, "c' disagrees with central differences at e = " + std::to_string(e));
  }

  for (std::size_t i = 0; i < welfare_sets; ++i) {
    const auto sc = random_scenario(rng);
    const auto mdp = sc.mdp();
    for (const auto& pi : {threshold_policy(mdp, optimal_threshold(mdp)), comply_policy(mdp)}) {
      ++r.checks;
      const double res = bellman_residual(mdp, pi, evaluate_policy(mdp, pi));
      if (res > 1e-10) record_failure(r, "Bellman residual " + std::to_string(res));
    }

    const auto w = sc.welfare();
    const double e_star = socially_optimal_effort(w, 1.0);
    double best = -std::numeric_limits<double>::infinity(), best_e = 0.0;
    for (int j = 0; j <= 10000; ++j) {
      const double e = j * 1e-4;
      const double ew = expected_welfare(w, e);
      if (ew > best) {
        best = ew;
        best_e = e;
      }
    }
    ++r.checks;
    if (std::abs(e_star - best_e) > 2e-4) {
      record_failure(r, "e* " + std::to_string(e_star) + " vs grid argmax " + std::to_string(best_e));
    }
  }
  summarize(r);
  return r;
}

}  // namespace regmdp::verify
