#pragma once

#include <cstddef>
#include <vector>

#include "regmdp/mdp.hpp"

namespace regmdp {

/// Which kernel implementation a sweep uses. Results are identical.
enum class Backend { Serial, Parallel };

/// Expected discounted reward per state. All rewards are -c(e) <= 0.
struct ValueFunction {
  std::vector<double> values;

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

/// Solves v = r_pi + gamma P_pi v by a direct LU solve.
ValueFunction evaluate_policy(const RegulationMdp& mdp, const Policy& policy);

/// max_s |v(s) - (r_pi(s) + gamma (P_pi v)(s))|.
double bellman_residual(const RegulationMdp& mdp, const Policy& policy, const ValueFunction& v);

/// d(pi, e_c) = g(e_c) v(chi(e_c)) + (1 - g(e_c)) v(e_c); v(e^0) at the lowest state.
double continuation_value(const RegulationMdp& mdp, const ValueFunction& v, std::size_t state);

/// q(e_c, e) = -c(e) + gamma [h(e) v(e_h) + (1 - h(e)) d(pi, e_c)].
double q_value(const RegulationMdp& mdp, const ValueFunction& v, std::size_t state, double e);

struct OptimalSolution {
  Policy policy;
  ValueFunction values;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< sup-norm Bellman optimality residual at exit
};

/// Brute-force value iteration over the per-state feasible action grid.
/// Stops once the sup-norm residual is <= tol; greedy ties go to the lowest
/// effort.
OptimalSolution value_iteration(const RegulationMdp& mdp, double tol = 1e-11, Backend backend = Backend::Parallel);

struct Improvement {
  std::size_t state;
  double effort;  ///< best improving grid effort in that state
  double gain;    ///< q(e_c, effort) - v(e_c)
};

/// States where some feasible grid action beats the policy by more than tol.
/// Empty iff the policy cannot be improved by a one-step greedy deviation.
std::vector<Improvement> policy_improvement_check(const RegulationMdp& mdp, const Policy& policy, double tol = 1e-9);

/// Value of the threshold strategy max(tau, e_c). Also checks that every state
/// at or below tau shares one value to within 1e-9 and throws std::logic_error
/// otherwise. tau must lie in [0, e_h].
ValueFunction evaluate_threshold_policy(const RegulationMdp& mdp, double tau);

}  // namespace regmdp
