#include "regmdp/kernels.hpp"

#include <limits>

namespace regmdp::kernels {

BellmanTables BellmanTables::from(const RegulationMdp& mdp) {
  BellmanTables t;
  const auto& grid = mdp.actions();
  t.action_cost.reserve(grid.size());
  t.action_harm.reserve(grid.size());
  for (double a : grid.efforts()) {
    t.action_cost.push_back(mdp.cost().cost(a));
    t.action_harm.push_back(mdp.harm().prob(a));
  }
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    t.first_action.push_back(grid.first_feasible(mdp.space().level(s)));
    t.drift.push_back(mdp.drift().prob(s));
  }
  t.backlash = mdp.space().backlash_index();
  t.gamma = mdp.gamma();
  return t;
}

EpisodeTables EpisodeTables::from(const RegulationMdp& mdp, const Policy& policy) {
  require_feasible(mdp, policy);
  EpisodeTables t;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    t.reward.push_back(-mdp.cost().cost(policy[s]));
    t.harm.push_back(mdp.harm().prob(policy[s]));
    t.drift.push_back(mdp.drift().prob(s));
  }
  t.backlash = mdp.space().backlash_index();
  t.gamma = mdp.gamma();
  return t;
}

std::mt19937_64 episode_engine(std::uint64_t seed, std::uint64_t episode) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(episode), static_cast<std::uint32_t>(episode >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

StepOutcome step(const EpisodeTables& t, std::size_t s, std::mt19937_64& eng) {
  if (uniform01(eng) < t.harm[s]) return {t.backlash, true};
  if (s > 0 && uniform01(eng) < t.drift[s]) return {s - 1, false};
  return {s, false};
}

namespace detail {

void bellman_state(const BellmanTables& t, std::span<const double> v, std::size_t s, double& value,
                   std::size_t& action) {
  const double d = s > 0 ? t.drift[s] * v[s - 1] + (1.0 - t.drift[s]) * v[s] : v[s];
  const double vh = v[t.backlash];
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_a = t.first_action[s];
  for (std::size_t a = t.first_action[s]; a < t.action_cost.size(); ++a) {
    const double h = t.action_harm[a];
    const double q = -t.action_cost[a] + t.gamma * (h * vh + (1.0 - h) * d);
    // Strict comparison while scanning upward keeps the lowest effort on ties.
    if (q > best) {
      best = q;
      best_a = a;
    }
  }
  value = best;
  action = best_a;
}

double episode_return(const EpisodeTables& t, std::uint64_t seed, std::uint64_t episode, std::size_t start,
                      std::size_t horizon) {
  auto eng = episode_engine(seed, episode);
  double total = 0.0;
  double discount = 1.0;
  std::size_t s = start;
  for (std::size_t k = 0; k < horizon; ++k) {
    total += discount * t.reward[s];
    discount *= t.gamma;
    s = step(t, s, eng).next;
  }
  return total;
}

}  // namespace detail

namespace serial {

void bellman_sweep(const BellmanTables& t, std::span<const double> v, std::span<double> v_out,
                   std::span<std::size_t> argmax) {
  for (std::size_t s = 0; s < v.size(); ++s) detail::bellman_state(t, v, s, v_out[s], argmax[s]);
}

void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& fn) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
}

void episode_returns(const EpisodeTables& t, std::uint64_t seed, std::uint64_t first_episode, std::size_t start,
                     std::size_t horizon, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = detail::episode_return(t, seed, first_episode + i, start, horizon);
}

}  // namespace serial

}  // namespace regmdp::kernels
