#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "regmdp/primitives.hpp"

namespace regmdp {

/// An effort below the required level of the current state.
class FeasibilityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed state spaces, action grids or MDPs.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Required-effort levels of the public model, sorted strictly increasing.
 * The top level is the backlash state e_h that follows a harm event.
 */
class StateSpace {
 public:
  explicit StateSpace(std::vector<double> levels);

  std::size_t size() const { return levels_.size(); }
  double level(std::size_t i) const { return levels_.at(i); }
  const std::vector<double>& levels() const { return levels_; }

  std::size_t backlash_index() const { return levels_.size() - 1; }
  double backlash_effort() const { return levels_.back(); }
  double lowest() const { return levels_.front(); }

 private:
  std::vector<double> levels_;
};

/// n_states - 1 uniform levels on [min_effort, backlash_effort) topped by the
/// backlash level.
StateSpace build_state_space(double min_effort, double max_effort, std::size_t n_states, double backlash_effort);

/// Index of the adjacent lower level. Throws DomainError at the lowest state.
std::size_t next_lower_state(const StateSpace& space, std::size_t state);

/// Index of the largest level <= e. Throws DomainError when e is below the
/// lowest level.
std::size_t state_floor(const StateSpace& space, double e);

/**
 * Finite set of candidate efforts. Built from a uniform grid on [0, e_max]
 * merged with every state level, so complying exactly is always available.
 */
class ActionGrid {
 public:
  ActionGrid(double e_max, double step, const StateSpace& space);

  std::size_t size() const { return efforts_.size(); }
  double effort(std::size_t i) const { return efforts_[i]; }
  const std::vector<double>& efforts() const { return efforts_; }
  double step() const { return step_; }
  double max_effort() const { return efforts_.back(); }

  /// First action index with effort >= level.
  std::size_t first_feasible(double level) const;

 private:
  std::vector<double> efforts_;
  double step_;
};

/// Deterministic policy: one effort per state.
struct Policy {
  std::vector<double> choice;

  double operator[](std::size_t i) const { return choice[i]; }
  std::size_t size() const { return choice.size(); }
};

struct Transition {
  std::size_t state;
  double prob;
};

/**
 * The platform's decision process. From state e_c under effort e >= e_c:
 * harm sends the chain to e_h with probability h(e); otherwise it drifts one
 * level down with probability g(e_c) or stays. The reward is -c(e).
 */
class RegulationMdp {
 public:
  RegulationMdp(StateSpace space, double e_max, double action_step, HarmModel harm, CostModel cost, DriftModel drift,
                double gamma);

  const StateSpace& space() const { return space_; }
  const ActionGrid& actions() const { return actions_; }
  const HarmModel& harm() const { return harm_; }
  const CostModel& cost() const { return cost_; }
  const DriftModel& drift() const { return drift_; }
  double gamma() const { return gamma_; }
  double e_max() const { return e_max_; }
  std::size_t n_states() const { return space_.size(); }

  /// Same MDP with a different discount.
  RegulationMdp with_gamma(double gamma) const;

 private:
  StateSpace space_;
  double e_max_;
  ActionGrid actions_;
  HarmModel harm_;
  CostModel cost_;
  DriftModel drift_;
  double gamma_;
};

/// Support of the next-state distribution with coinciding states merged.
/// Throws FeasibilityError if e is below the state's required effort.
std::vector<Transition> transition_distribution(const RegulationMdp& mdp, std::size_t state, double e);

/// Throws FeasibilityError unless choice(e_c) >= e_c for every state.
void require_feasible(const RegulationMdp& mdp, const Policy& policy);

/// pi(e_c) = e_c.
Policy comply_policy(const RegulationMdp& mdp);

/// pi^tau(e_c) = max(tau, e_c).
Policy threshold_policy(const RegulationMdp& mdp, double tau);

}  // namespace regmdp
