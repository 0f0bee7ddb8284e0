#include "regmdp/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "regmdp/kernels.hpp"

namespace regmdp {

// ---------------------------------------------------------------------------
// Static regime

double fail_prob(const FailModel& model, double e, double e_c) {
  if (e >= e_c) return 0.0;
  if (const auto* step = std::get_if<StepFailModel>(&model)) return step->p0;
  const auto& ramp = std::get<RampFailModel>(model);
  return std::min(1.0, ramp.beta * (e_c - e));
}

StaticRegime::StaticRegime(double r, double f, FailModel fm) : audit_prob(r), fine(f), fail(fm) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("audit probability must lie in [0,1]");
  if (!(f >= 0.0)) throw DomainError("fine must be non-negative");
  if (const auto* step = std::get_if<StepFailModel>(&fail)) {
    if (!(step->p0 >= 0.0 && step->p0 <= 1.0)) throw DomainError("step failure probability must lie in [0,1]");
  } else if (!(std::get<RampFailModel>(fail).beta > 0.0)) {
    throw DomainError("ramp slope must be positive");
  }
}

double static_expected_utility(const StaticRegime& regime, const CostModel& cost, double e, double e_c) {
  return -cost.cost(e) - regime.audit_prob * fail_prob(regime.fail, e, e_c) * regime.fine;
}

double static_optimal_effort(const StaticRegime& regime, const CostModel& cost, const std::vector<double>& grid,
                             double e_c) {
  if (grid.empty()) throw DomainError("static optimization needs a non-empty action grid");
  std::vector<double> candidates = grid;
  candidates.push_back(e_c);
  std::sort(candidates.begin(), candidates.end());

  double best = -std::numeric_limits<double>::infinity();
  double best_e = candidates.front();
  for (double e : candidates) {
    const double eu = static_expected_utility(regime, cost, e, e_c);
    if (eu > best) {
      best = eu;
      best_e = e;
    }
  }
  if (best_e > e_c) {
    std::ostringstream msg;
    msg << "static optimum " << best_e << " exceeds the adequate effort " << e_c;
    throw std::logic_error(msg.str());
  }
  return best_e;
}

// ---------------------------------------------------------------------------
// Stable effort

double threshold_gap(const RegulationMdp& mdp, double e) {
  if (mdp.gamma() == 0.0) return -std::numeric_limits<double>::infinity();
  const auto v = evaluate_threshold_policy(mdp, e);
  const double marginal = mdp.cost().derivative(e) / (mdp.gamma() * mdp.harm().derivative(e));
  return v[0] - v[mdp.space().backlash_index()] + marginal;
}

double optimal_threshold(const RegulationMdp& mdp, double refine_tol, Backend backend) {
  if (!(refine_tol > 0.0)) throw DomainError("refinement tolerance must be positive");
  if (mdp.gamma() == 0.0) return 0.0;

  const double e_h = mdp.space().backlash_effort();
  const auto& efforts = mdp.actions().efforts();
  std::vector<double> candidates(efforts.begin(), std::upper_bound(efforts.begin(), efforts.end(), e_h));
  std::vector<double> gaps(candidates.size());
  auto gap = [&mdp](double e) { return threshold_gap(mdp, e); };
  if (backend == Backend::Parallel) {
    kernels::omp::map(candidates, gaps, gap);
  } else {
    kernels::serial::map(candidates, gaps, gap);
  }

  std::size_t last = candidates.size();
  for (std::size_t i = candidates.size(); i-- > 0;) {
    if (gaps[i] >= 0.0) {
      last = i;
      break;
    }
  }
  if (last == candidates.size()) return 0.0;
  if (last + 1 == candidates.size()) return candidates.back();

  double lo = candidates[last];
  double hi = candidates[last + 1];
  while (hi - lo > refine_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (threshold_gap(mdp, mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// ---------------------------------------------------------------------------
// Backlash design

double backlash_constant(const HarmModel& harm, const CostModel& cost, double gamma, double e_star) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("backlash design needs gamma in (0,1)");
  const double h = harm.prob(e_star);
  const double marginal = cost.derivative(e_star) * (1.0 - gamma * (1.0 - h)) / (gamma * harm.derivative(e_star));
  return (cost.cost(e_star) - marginal) / (1.0 - gamma);
}

RegulationMdp backlash_mdp(const WelfareModel& welfare, double gamma, const BacklashTemplate& tmpl,
                           const DriftModel& drift, double e_h) {
  std::vector<double> levels = tmpl.lower_levels;
  levels.push_back(e_h);
  return RegulationMdp(StateSpace(std::move(levels)), tmpl.e_max, tmpl.action_step, welfare.harm, welfare.cost, drift,
                       gamma);
}

BacklashDesign design_backlash(const WelfareModel& welfare, double gamma, const BacklashTemplate& tmpl,
                               const DriftModel& drift, double tol) {
  if (tmpl.lower_levels.empty()) throw DomainError("backlash template needs at least one lower level");
  if (drift.size() != tmpl.lower_levels.size() + 1) throw DomainError("drift must cover the lower levels plus e_h");
  if (!(tol > 0.0)) throw DomainError("design tolerance must be positive");

  BacklashDesign out;
  out.target_e_star = socially_optimal_effort(welfare, tmpl.e_max);
  out.degenerate = out.target_e_star == 0.0;
  out.k_constant = backlash_constant(welfare.harm, welfare.cost, gamma, out.target_e_star);
  const double cost_at_max = welfare.cost.cost(tmpl.e_max);

  auto g_of = [&](double e_h) {
    const auto mdp = backlash_mdp(welfare, gamma, tmpl, drift, e_h);
    const auto v = evaluate_threshold_policy(mdp, out.target_e_star);
    return -v[mdp.space().backlash_index()] - out.k_constant;
  };
  auto finish = [&](double e_h) {
    out.designed_e_h = e_h;
    out.residual = g_of(e_h);
    const auto mdp = backlash_mdp(welfare, gamma, tmpl, drift, e_h);
    out.achieved_threshold = optimal_threshold(mdp, std::min(1e-10, 1e-3 * tol));
    out.verified = std::abs(out.achieved_threshold - out.target_e_star) <= tol;
    return out;
  };

  const double top_lower = tmpl.lower_levels.back();
  if (!(top_lower < tmpl.e_max)) throw DomainError("lower levels must lie below e_max");
  double lo = std::max(top_lower, out.target_e_star);
  double hi = tmpl.e_max;
  if (lo == top_lower) lo += 1e-9 * (hi - lo);

  const double g_hi = g_of(hi);
  const double g_lo = lo < hi ? g_of(lo) : g_hi;
  if (g_hi <= 0.0 || g_lo >= 0.0) {
    if (out.degenerate) return finish(std::min(tmpl.e_max, top_lower + tmpl.action_step));
    std::ostringstream msg;
    if (g_hi <= 0.0) {
      msg << "insufficient maximum effort: -v(e_h) cannot reach K = " << out.k_constant
          << " for e_h <= e_max (c(e_max) = " << cost_at_max << ")";
    } else {
      msg << "backlash range starts too high: G > 0 already at e_h = " << lo
          << "; lower the top required-effort level (K = " << out.k_constant << ")";
    }
    throw BracketError(msg.str(), out.k_constant, cost_at_max);
  }

  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g_of(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return finish(0.5 * (lo + hi));
}

double overreaction_gap(const RegulationMdp& mdp, const WelfareModel& welfare, double refine_tol) {
  const double e_star = socially_optimal_effort(welfare, mdp.e_max());
  const double e_hat = optimal_threshold(mdp, refine_tol);
  const double gap = e_hat - e_star;
  if (mdp.space().backlash_effort() <= e_star && !(gap < 0.0)) {
    std::ostringstream msg;
    msg << "backlash " << mdp.space().backlash_effort() << " <= e* " << e_star << " yet stable effort " << e_hat
        << " is not below e*";
    throw std::logic_error(msg.str());
  }
  return gap;
}

// ---------------------------------------------------------------------------
// Two-cost demonstration

ImpossibilityReport impossibility_report(const ImpossibilityInputs& in) {
  if (!(in.tol > 0.0)) throw DomainError("tolerance must be positive");
  const WelfareModel w1{in.harm, in.cost_1, in.damage};
  const WelfareModel w2{in.harm, in.cost_2, in.damage};

  ImpossibilityReport rep;
  rep.e_star_1 = socially_optimal_effort(w1, in.e_max);
  rep.e_star_2 = socially_optimal_effort(w2, in.e_max);
  rep.degenerate = std::abs(rep.e_star_1 - rep.e_star_2) <= in.tol;

  std::vector<double> required = in.candidates;
  required.push_back(rep.e_star_1);
  required.push_back(rep.e_star_2);
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());

  const double best_1 = expected_welfare(w1, rep.e_star_1);
  const double best_2 = expected_welfare(w2, rep.e_star_2);
  bool any_attains_both = false;
  for (double e_c : required) {
    ImpossibilityRow row{};
    row.required_effort = e_c;
    row.induced_1 = static_optimal_effort(in.enforcement, in.cost_1, in.action_grid, e_c);
    row.induced_2 = static_optimal_effort(in.enforcement, in.cost_2, in.action_grid, e_c);
    row.gap_1 = std::abs(row.induced_1 - rep.e_star_1);
    row.gap_2 = std::abs(row.induced_2 - rep.e_star_2);
    row.welfare_loss_1 = best_1 - expected_welfare(w1, row.induced_1);
    row.welfare_loss_2 = best_2 - expected_welfare(w2, row.induced_2);
    row.attains_both = row.gap_1 <= in.tol && row.gap_2 <= in.tol;
    any_attains_both = any_attains_both || row.attains_both;
    rep.rows.push_back(row);
  }

  rep.impossibility_holds = !rep.degenerate && !any_attains_both;
  std::ostringstream note;
  if (rep.degenerate) {
    note << "indistinguishable costs: e*_1 = " << rep.e_star_1 << " and e*_2 = " << rep.e_star_2
         << " coincide, so one required effort serves both and the impossibility claim does not bind";
  } else if (rep.impossibility_holds) {
    note << "no required effort induces both e*_1 = " << rep.e_star_1 << " and e*_2 = " << rep.e_star_2;
  } else {
    note << "some required effort induces both optima; check the enforcement regime";
  }
  rep.note = note.str();
  return rep;
}

}  // namespace regmdp
