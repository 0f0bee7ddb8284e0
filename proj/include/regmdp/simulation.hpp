#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "regmdp/mdp.hpp"
#include "regmdp/policy_engine.hpp"

namespace regmdp {

struct TrajectoryStep {
  std::size_t state_index;
  double state;   ///< required effort
  double action;  ///< chosen effort
  bool harm;
  double reward;  ///< -c(action)
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::uint64_t seed = 0;
  std::uint64_t episode = 0;
  double discounted_return = 0.0;
};

/// Horizon too short for the requested truncation bound.
class HorizonError : public std::invalid_argument {
 public:
  HorizonError(const std::string& what, std::size_t minimal_horizon)
      : std::invalid_argument(what), minimal_horizon_(minimal_horizon) {}
  std::size_t minimal_horizon() const { return minimal_horizon_; }

 private:
  std::size_t minimal_horizon_;
};

/// Samples one episode. Each period draws harm with probability h(action),
/// then a one-level drift with probability g(state) if no harm occurred.
/// The start state defaults to e_h. Episode `episode` of seed `seed` is the
/// same stream estimate_value uses, so results replay exactly.
Trajectory sample_trajectory(const RegulationMdp& mdp, const Policy& policy, std::uint64_t seed, std::size_t horizon,
                             std::optional<std::size_t> start = std::nullopt, std::uint64_t episode = 0);

/// gamma^horizon c(e_max) / (1 - gamma): worst-case tail omitted by truncation.
double truncation_bound(const RegulationMdp& mdp, std::size_t horizon);

/// Smallest horizon whose truncation bound is <= bound.
std::size_t minimal_horizon(const RegulationMdp& mdp, double bound = 1e-6);

struct ValueEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;  ///< 1.96 * standard error
  double std_error = 0.0;
  double truncation_bound = 0.0;
  std::size_t episodes = 0;
  std::size_t horizon = 0;
};

/// Monte Carlo discounted return from `start`. Throws HorizonError when the
/// truncation bound exceeds max_truncation.
ValueEstimate estimate_value(const RegulationMdp& mdp, const Policy& policy, std::size_t start, std::size_t n_episodes,
                             std::size_t horizon, std::uint64_t seed, double max_truncation = 1e-6,
                             Backend backend = Backend::Parallel);

}  // namespace regmdp
