#include "regmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace regmdp {

StateSpace::StateSpace(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2) throw ConstructionError("state space needs at least two levels");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i]) || levels_[i] < 0.0) throw ConstructionError("state levels must be finite and >= 0");
    if (i > 0 && !(levels_[i] > levels_[i - 1])) throw ConstructionError("state levels must be strictly increasing");
  }
}

StateSpace build_state_space(double min_effort, double max_effort, std::size_t n_states, double backlash_effort) {
  if (n_states < 2) throw ConstructionError("n_states must be at least 2");
  if (!(min_effort >= 0.0)) throw ConstructionError("min_effort must be >= 0");
  if (!(backlash_effort > min_effort)) throw ConstructionError("backlash effort must exceed min_effort");
  if (!(backlash_effort <= max_effort)) throw ConstructionError("backlash effort must not exceed max_effort");

  std::vector<double> levels(n_states);
  const double step = (backlash_effort - min_effort) / static_cast<double>(n_states - 1);
  for (std::size_t i = 0; i + 1 < n_states; ++i) levels[i] = min_effort + static_cast<double>(i) * step;
  levels.back() = backlash_effort;
  return StateSpace(std::move(levels));
}

std::size_t next_lower_state(const StateSpace& space, std::size_t state) {
  if (state >= space.size()) throw DomainError("state index out of range");
  if (state == 0) throw DomainError("the lowest state has no lower neighbour");
  return state - 1;
}

std::size_t state_floor(const StateSpace& space, double e) {
  const auto& lv = space.levels();
  if (!(e >= lv.front())) {
    std::ostringstream msg;
    msg << "effort " << e << " is below the lowest state " << lv.front();
    throw DomainError(msg.str());
  }
  auto it = std::upper_bound(lv.begin(), lv.end(), e);
  return static_cast<std::size_t>(std::distance(lv.begin(), it)) - 1;
}

ActionGrid::ActionGrid(double e_max, double step, const StateSpace& space) : step_(step) {
  if (!(e_max > 0.0) || !std::isfinite(e_max)) throw ConstructionError("e_max must be positive and finite");
  if (!(step > 0.0) || step > e_max) throw ConstructionError("action step must lie in (0, e_max]");
  if (space.backlash_effort() > e_max) throw ConstructionError("state levels must not exceed e_max");

  const auto n = static_cast<std::size_t>(std::ceil(e_max / step - 1e-9));
  std::vector<double> uniform;
  uniform.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) uniform.push_back(static_cast<double>(i) * step);
  uniform.push_back(e_max);

  // Levels replace grid points that coincide with them up to rounding, so the
  // exact level value is what policies see.
  const double snap = 1e-9 * step;
  std::vector<double> merged;
  merged.reserve(uniform.size() + space.size());
  std::merge(uniform.begin(), uniform.end(), space.levels().begin(), space.levels().end(), std::back_inserter(merged));
  for (double e : merged) {
    if (!efforts_.empty() && e - efforts_.back() <= snap) {
      const bool is_level = std::binary_search(space.levels().begin(), space.levels().end(), e);
      if (is_level) efforts_.back() = e;
      continue;
    }
    efforts_.push_back(e);
  }
}

std::size_t ActionGrid::first_feasible(double level) const {
  auto it = std::lower_bound(efforts_.begin(), efforts_.end(), level);
  return static_cast<std::size_t>(std::distance(efforts_.begin(), it));
}

RegulationMdp::RegulationMdp(StateSpace space, double e_max, double action_step, HarmModel harm, CostModel cost,
                             DriftModel drift, double gamma)
    : space_(std::move(space)),
      e_max_(e_max),
      actions_(e_max, action_step, space_),
      harm_(std::move(harm)),
      cost_(cost),
      drift_(std::move(drift)),
      gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConstructionError("gamma must lie in [0,1)");
  if (drift_.size() != space_.size()) throw ConstructionError("drift model size must match the number of states");
  if (e_max > harm_.domain_max()) throw ConstructionError("e_max exceeds the harm model domain");
}

RegulationMdp RegulationMdp::with_gamma(double gamma) const {
  return RegulationMdp(space_, e_max_, actions_.step(), harm_, cost_, drift_, gamma);
}

std::vector<Transition> transition_distribution(const RegulationMdp& mdp, std::size_t state, double e) {
  const auto& space = mdp.space();
  if (state >= space.size()) throw DomainError("state index out of range");
  if (e < space.level(state)) {
    std::ostringstream msg;
    msg << "effort " << e << " is below the required effort " << space.level(state);
    throw FeasibilityError(msg.str());
  }
  const double harm = mdp.harm().prob(e);
  const double g = mdp.drift().prob(state);

  std::vector<Transition> out;
  auto add = [&out](std::size_t s, double p) {
    for (auto& t : out) {
      if (t.state == s) {
        t.prob += p;
        return;
      }
    }
    out.push_back({s, p});
  };
  add(space.backlash_index(), harm);
  if (state > 0) {
    add(state - 1, (1.0 - harm) * g);
    add(state, (1.0 - harm) * (1.0 - g));
  } else {
    add(state, 1.0 - harm);
  }
  return out;
}

void require_feasible(const RegulationMdp& mdp, const Policy& policy) {
  if (policy.size() != mdp.n_states()) throw FeasibilityError("policy size does not match the number of states");
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (policy[i] < mdp.space().level(i)) {
      std::ostringstream msg;
      msg << "policy plays " << policy[i] << " in state " << i << " requiring " << mdp.space().level(i);
      throw FeasibilityError(msg.str());
    }
    if (policy[i] > mdp.e_max()) throw FeasibilityError("policy effort exceeds e_max");
  }
}

Policy comply_policy(const RegulationMdp& mdp) { return Policy{mdp.space().levels()}; }

Policy threshold_policy(const RegulationMdp& mdp, double tau) {
  Policy p{mdp.space().levels()};
  for (auto& e : p.choice) e = std::max(tau, e);
  return p;
}

}  // namespace regmdp
