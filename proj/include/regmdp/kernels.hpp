#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// regmdp::kernels::serial and an OpenMP version in regmdp::kernels::omp with
// identical results: each output element is computed independently, so the
// two agree bit for bit regardless of thread count or scheduling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "regmdp/mdp.hpp"

namespace regmdp::kernels {

/// Per-action and per-state arrays for Bellman optimality sweeps.
struct BellmanTables {
  std::vector<double> action_cost;         // c(a) for each grid action
  std::vector<double> action_harm;         // h(a) for each grid action
  std::vector<std::size_t> first_action;   // first feasible action per state
  std::vector<double> drift;               // g(e_c) per state
  std::size_t backlash = 0;
  double gamma = 0.0;

  static BellmanTables from(const RegulationMdp& mdp);
};

/// Per-state arrays for simulating a fixed policy.
struct EpisodeTables {
  std::vector<double> reward;  // -c(pi(e_c))
  std::vector<double> harm;    // h(pi(e_c))
  std::vector<double> drift;   // g(e_c)
  std::size_t backlash = 0;
  double gamma = 0.0;

  static EpisodeTables from(const RegulationMdp& mdp, const Policy& policy);
};

/// Independent random stream of one episode, derived from (seed, episode).
std::mt19937_64 episode_engine(std::uint64_t seed, std::uint64_t episode);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& eng);

struct StepOutcome {
  std::size_t next;
  bool harm;
};

/// Advance the chain one period from state s under the tabulated policy.
StepOutcome step(const EpisodeTables& t, std::size_t s, std::mt19937_64& eng);

namespace serial {

/// One Jacobi sweep of the Bellman optimality operator. Writes (T v)(s) and
/// the lowest-effort maximizing action index for every state.
void bellman_sweep(const BellmanTables& t, std::span<const double> v, std::span<double> v_out,
                   std::span<std::size_t> argmax);

/// out[i] = fn(xs[i]).
void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& fn);

/// Discounted return of episodes first_episode .. first_episode + out.size().
void episode_returns(const EpisodeTables& t, std::uint64_t seed, std::uint64_t first_episode, std::size_t start,
                     std::size_t horizon, std::span<double> out);

}  // namespace serial

namespace omp {

void bellman_sweep(const BellmanTables& t, std::span<const double> v, std::span<double> v_out,
                   std::span<std::size_t> argmax);

void map(std::span<const double> xs, std::span<double> out, const std::function<double(double)>& fn);

void episode_returns(const EpisodeTables& t, std::uint64_t seed, std::uint64_t first_episode, std::size_t start,
                     std::size_t horizon, std::span<double> out);

}  // namespace omp

namespace detail {

// Shared per-element bodies; both backends call these so they cannot drift.
void bellman_state(const BellmanTables& t, std::span<const double> v, std::size_t s, double& value,
                   std::size_t& action);
double episode_return(const EpisodeTables& t, std::uint64_t seed, std::uint64_t episode, std::size_t start,
                      std::size_t horizon);

}  // namespace detail

}  // namespace regmdp::kernels
