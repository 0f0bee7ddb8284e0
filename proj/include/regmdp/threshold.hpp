#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "regmdp/mdp.hpp"
#include "regmdp/policy_engine.hpp"
#include "regmdp/primitives.hpp"

namespace regmdp {

// ---------------------------------------------------------------------------
// Static negligence regime
// ---------------------------------------------------------------------------

/// Audit-failure probability P_f(e | e_c). Every family is zero for e >= e_c.
struct StepFailModel {
  double p0 = 1.0;  ///< failure probability for any e < e_c
};
struct RampFailModel {
  double beta = 1.0;  ///< P_f = min(1, beta (e_c - e)) for e < e_c
};
using FailModel = std::variant<StepFailModel, RampFailModel>;

double fail_prob(const FailModel& model, double e, double e_c);

struct StaticRegime {
  double audit_prob;  ///< r
  double fine;        ///< F
  FailModel fail;

  StaticRegime(double audit_prob, double fine, FailModel fail);
};

/// EU(e | e_c) = -c(e) - r P_f(e | e_c) F.
double static_expected_utility(const StaticRegime& regime, const CostModel& cost, double e, double e_c);

/// Argmax of static_expected_utility over the whole grid (ties to the lowest
/// effort). Throws std::logic_error if the maximizer ever exceeds e_c.
double static_optimal_effort(const StaticRegime& regime, const CostModel& cost, const std::vector<double>& grid,
                             double e_c);

// ---------------------------------------------------------------------------
// Stable effort of the adaptive public model
// ---------------------------------------------------------------------------

/// [v(e^0) - v(e_h)] + c'(e) / (gamma h'(e)) under the threshold strategy pi^e.
/// The stable effort is the largest e in [0, e_h] where this is >= 0.
double threshold_gap(const RegulationMdp& mdp, double e);

/// The platform's optimal threshold: grid scan of threshold_gap followed by
/// bisection on the last sign change down to refine_tol. Returns 0 when the
/// gap is negative on the whole grid, or when gamma == 0.
double optimal_threshold(const RegulationMdp& mdp, double refine_tol = 1e-9, Backend backend = Backend::Parallel);

// ---------------------------------------------------------------------------
// Backlash design
// ---------------------------------------------------------------------------

/// No e_h in the search range makes the platform settle on e*.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double k_constant, double cost_at_max)
      : std::runtime_error(what), k_constant_(k_constant), cost_at_max_(cost_at_max) {}
  double k_constant() const { return k_constant_; }
  double cost_at_max() const { return cost_at_max_; }

 private:
  double k_constant_;
  double cost_at_max_;
};

/// Fixed part of the MDP while the backlash level is searched: the required
/// effort levels below e_h, the effort cap and the action grid spacing.
struct BacklashTemplate {
  std::vector<double> lower_levels;
  double e_max;
  double action_step;
};

struct BacklashDesign {
  double target_e_star = 0.0;
  double designed_e_h = 0.0;
  double achieved_threshold = 0.0;
  double residual = 0.0;    ///< G(e_h) = -v(e_h) - K at the designed e_h
  double k_constant = 0.0;  ///< K
  bool degenerate = false;  ///< e* = 0: nothing to induce
  bool verified = false;    ///< |achieved - target| <= tol
};

/// K = (c(e*) - c'(e*) (1 - gamma (1 - h(e*))) / (gamma h'(e*))) / (1 - gamma):
/// the value -v(e_h) must reach for e* to be the stable effort.
double backlash_constant(const HarmModel& harm, const CostModel& cost, double gamma, double e_star);

/// MDP with lower_levels plus e_h on top. drift must cover lower_levels.size() + 1 states.
RegulationMdp backlash_mdp(const WelfareModel& welfare, double gamma, const BacklashTemplate& tmpl,
                           const DriftModel& drift, double e_h);

/// Searches e_h in (max(top lower level, e*), e_max] for G(e_h) = 0 by
/// bisection, then re-solves the stable effort on the designed MDP.
/// Throws BracketError when G(e_max) <= 0 (insufficient maximum effort) or
/// when G is already positive at the bottom of the range.
BacklashDesign design_backlash(const WelfareModel& welfare, double gamma, const BacklashTemplate& tmpl,
                               const DriftModel& drift, double tol);

/// e_hat - e*. Throws std::logic_error if e_h <= e* and the gap is not negative.
double overreaction_gap(const RegulationMdp& mdp, const WelfareModel& welfare, double refine_tol = 1e-9);

// ---------------------------------------------------------------------------
// Two-cost demonstration that a static required effort cannot serve both
// ---------------------------------------------------------------------------

struct ImpossibilityRow {
  double required_effort;   ///< candidate e_c
  double induced_1;         ///< platform effort under cost 1
  double induced_2;         ///< platform effort under cost 2
  double gap_1;             ///< |induced_1 - e*_1|
  double gap_2;
  double welfare_loss_1;    ///< EW_1(e*_1) - EW_1(induced_1)
  double welfare_loss_2;
  bool attains_both;
};

struct ImpossibilityReport {
  double e_star_1 = 0.0;
  double e_star_2 = 0.0;
  bool degenerate = false;          ///< e*_1 and e*_2 indistinguishable
  bool impossibility_holds = false; ///< no row attains both optima
  std::string note;
  std::vector<ImpossibilityRow> rows;
};

struct ImpossibilityInputs {
  HarmModel harm;
  double damage;
  CostModel cost_1;
  CostModel cost_2;
  double e_max;
  std::vector<double> candidates;  ///< required efforts to tabulate; e*_1, e*_2 are added
  std::vector<double> action_grid; ///< grid the platform optimizes over
  StaticRegime enforcement;        ///< audit regime enforcing compliance
  double tol;
};

ImpossibilityReport impossibility_report(const ImpossibilityInputs& in);

}  // namespace regmdp
