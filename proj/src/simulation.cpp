#include "regmdp/simulation.hpp"

#include <cmath>
#include <sstream>

#include "regmdp/kernels.hpp"

namespace regmdp {

Trajectory sample_trajectory(const RegulationMdp& mdp, const Policy& policy, std::uint64_t seed, std::size_t horizon,
                             std::optional<std::size_t> start, std::uint64_t episode) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  const auto tables = kernels::EpisodeTables::from(mdp, policy);
  std::size_t s = start.value_or(mdp.space().backlash_index());
  if (s >= mdp.n_states()) throw DomainError("start state out of range");

  Trajectory traj;
  traj.seed = seed;
  traj.episode = episode;
  traj.steps.reserve(horizon);
  auto eng = kernels::episode_engine(seed, episode);
  double discount = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto next = kernels::step(tables, s, eng);
    traj.steps.push_back({s, mdp.space().level(s), policy[s], next.harm, tables.reward[s]});
    traj.discounted_return += discount * tables.reward[s];
    discount *= mdp.gamma();
    s = next.next;
  }
  return traj;
}

double truncation_bound(const RegulationMdp& mdp, std::size_t horizon) {
  return std::pow(mdp.gamma(), static_cast<double>(horizon)) * mdp.cost().cost(mdp.e_max()) / (1.0 - mdp.gamma());
}

std::size_t minimal_horizon(const RegulationMdp& mdp, double bound) {
  if (!(bound > 0.0)) throw DomainError("truncation bound must be positive");
  if (mdp.gamma() == 0.0) return 1;
  const double scale = mdp.cost().cost(mdp.e_max()) / (1.0 - mdp.gamma());
  if (scale <= bound) return 1;
  auto h = static_cast<std::size_t>(std::ceil(std::log(bound / scale) / std::log(mdp.gamma())));
  h = std::max<std::size_t>(h, 1);
  while (truncation_bound(mdp, h) > bound) ++h;
  while (h > 1 && truncation_bound(mdp, h - 1) <= bound) --h;
  return h;
}

ValueEstimate estimate_value(const RegulationMdp& mdp, const Policy& policy, std::size_t start, std::size_t n_episodes,
                             std::size_t horizon, std::uint64_t seed, double max_truncation, Backend backend) {
  if (n_episodes < 2) throw DomainError("need at least two episodes");
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (start >= mdp.n_states()) throw DomainError("start state out of range");
  const double bound = truncation_bound(mdp, horizon);
  if (bound > max_truncation) {
    const auto need = minimal_horizon(mdp, max_truncation);
    std::ostringstream msg;
    msg << "horizon " << horizon << " leaves truncation bound " << bound << " > " << max_truncation
        << "; minimal horizon is " << need;
    throw HorizonError(msg.str(), need);
  }

  const auto tables = kernels::EpisodeTables::from(mdp, policy);
  std::vector<double> returns(n_episodes);
  if (backend == Backend::Parallel) {
    kernels::omp::episode_returns(tables, seed, 0, start, horizon, returns);
  } else {
    kernels::serial::episode_returns(tables, seed, 0, start, horizon, returns);
  }

  // Aggregated in episode order so the estimate does not depend on threads.
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= static_cast<double>(n_episodes);
  double ss = 0.0;
  for (double r : returns) ss += (r - mean) * (r - mean);
  const double var = ss / static_cast<double>(n_episodes - 1);

  ValueEstimate est;
  est.mean = mean;
  est.std_error = std::sqrt(var / static_cast<double>(n_episodes));
  est.half_width_95 = 1.96 * est.std_error;
  est.truncation_bound = bound;
  est.episodes = n_episodes;
  est.horizon = horizon;
  return est;
}

}  // namespace regmdp
