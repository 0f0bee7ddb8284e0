#include "regmdp/policy_engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "regmdp/kernels.hpp"

namespace regmdp {

namespace {

constexpr std::size_t kMaxValueIterations = 1'000'000;
constexpr double kSharedValueTolerance = 1e-9;

void require_state(const RegulationMdp& mdp, std::size_t state) {
  if (state >= mdp.n_states()) throw DomainError("state index out of range");
}

}  // namespace

ValueFunction evaluate_policy(const RegulationMdp& mdp, const Policy& policy) {
  require_feasible(mdp, policy);
  const auto n = static_cast<Eigen::Index>(mdp.n_states());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto su = static_cast<std::size_t>(s);
    r(s) = -mdp.cost().cost(policy[su]);
    for (const auto& t : transition_distribution(mdp, su, policy[su])) {
      a(s, static_cast<Eigen::Index>(t.state)) -= mdp.gamma() * t.prob;
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd v = lu.solve(r);
  // One step of iterative refinement.
  v += lu.solve(r - a * v);
  if (!v.allFinite()) throw std::runtime_error("policy evaluation produced a non-finite value");
  return ValueFunction{std::vector<double>(v.data(), v.data() + v.size())};
}

double bellman_residual(const RegulationMdp& mdp, const Policy& policy, const ValueFunction& v) {
  double worst = 0.0;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    double expected = 0.0;
    for (const auto& t : transition_distribution(mdp, s, policy[s])) expected += t.prob * v[t.state];
    const double rhs = -mdp.cost().cost(policy[s]) + mdp.gamma() * expected;
    worst = std::max(worst, std::abs(v[s] - rhs));
  }
  return worst;
}

double continuation_value(const RegulationMdp& mdp, const ValueFunction& v, std::size_t state) {
  require_state(mdp, state);
  if (state == 0) return v[0];
  const double g = mdp.drift().prob(state);
  return g * v[state - 1] + (1.0 - g) * v[state];
}

double q_value(const RegulationMdp& mdp, const ValueFunction& v, std::size_t state, double e) {
  require_state(mdp, state);
  if (e < mdp.space().level(state)) {
    std::ostringstream msg;
    msg << "effort " << e << " is below the required effort " << mdp.space().level(state);
    throw FeasibilityError(msg.str());
  }
  const double h = mdp.harm().prob(e);
  const double d = continuation_value(mdp, v, state);
  return -mdp.cost().cost(e) + mdp.gamma() * (h * v[mdp.space().backlash_index()] + (1.0 - h) * d);
}

OptimalSolution value_iteration(const RegulationMdp& mdp, double tol, Backend backend) {
  if (!(tol > 0.0)) throw DomainError("value iteration tolerance must be positive");
  const auto tables = kernels::BellmanTables::from(mdp);
  const std::size_t n = mdp.n_states();
  std::vector<double> v(n, 0.0), next(n);
  std::vector<std::size_t> argmax(n);

  OptimalSolution out;
  for (std::size_t it = 1; it <= kMaxValueIterations; ++it) {
    if (backend == Backend::Parallel) {
      kernels::omp::bellman_sweep(tables, v, next, argmax);
    } else {
      kernels::serial::bellman_sweep(tables, v, next, argmax);
    }
    double residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) residual = std::max(residual, std::abs(next[s] - v[s]));
    v.swap(next);
    if (residual <= tol) {
      // Greedy policy and residual with respect to the returned values.
      if (backend == Backend::Parallel) {
        kernels::omp::bellman_sweep(tables, v, next, argmax);
      } else {
        kernels::serial::bellman_sweep(tables, v, next, argmax);
      }
      out.residual = 0.0;
      for (std::size_t s = 0; s < n; ++s) out.residual = std::max(out.residual, std::abs(next[s] - v[s]));
      out.iterations = it;
      out.values.values = v;
      out.policy.choice.resize(n);
      for (std::size_t s = 0; s < n; ++s) out.policy.choice[s] = mdp.actions().effort(argmax[s]);
      return out;
    }
  }
  throw std::runtime_error("value iteration hit the iteration cap without converging");
}

std::vector<Improvement> policy_improvement_check(const RegulationMdp& mdp, const Policy& policy, double tol) {
  const auto v = evaluate_policy(mdp, policy);
  std::vector<Improvement> out;
  const auto& grid = mdp.actions();
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    double best_gain = tol;
    double best_effort = -1.0;
    for (std::size_t a = grid.first_feasible(mdp.space().level(s)); a < grid.size(); ++a) {
      const double gain = q_value(mdp, v, s, grid.effort(a)) - v[s];
      if (gain > best_gain) {
        best_gain = gain;
        best_effort = grid.effort(a);
      }
    }
    if (best_effort >= 0.0) out.push_back({s, best_effort, best_gain});
  }
  return out;
}

ValueFunction evaluate_threshold_policy(const RegulationMdp& mdp, double tau) {
  if (!(tau >= 0.0 && tau <= mdp.space().backlash_effort())) {
    std::ostringstream msg;
    msg << "threshold " << tau << " outside [0, " << mdp.space().backlash_effort() << "]";
    throw DomainError(msg.str());
  }
  auto v = evaluate_policy(mdp, threshold_policy(mdp, tau));

  double lo = v[0], hi = v[0];
  for (std::size_t s = 0; s < mdp.n_states() && mdp.space().level(s) <= tau; ++s) {
    lo = std::min(lo, v[s]);
    hi = std::max(hi, v[s]);
  }
  if (hi - lo > kSharedValueTolerance) {
    std::ostringstream msg;
    msg << "threshold policy values below tau differ by " << (hi - lo);
    throw std::logic_error(msg.str());
  }
  return v;
}

}  // namespace regmdp
