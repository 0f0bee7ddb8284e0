#pragma once

#include <random>
#include <vector>

#include "regmdp/mdp.hpp"
#include "regmdp/primitives.hpp"

namespace regmdp {

/// Everything needed to instantiate one RegulationMdp plus its welfare model.
struct Scenario {
  HarmModel harm;
  CostModel cost;
  double damage;
  double gamma;
  std::vector<double> levels;  ///< required-effort levels, top one is e_h
  std::vector<double> drift;   ///< per level, first entry 0
  double e_max;
  double action_step;

  RegulationMdp mdp() const;
  WelfareModel welfare() const;
};

struct ScenarioRanges {
  double gamma_lo = 0.5;
  double gamma_hi = 0.99;
  std::size_t states_lo = 11;
  std::size_t states_hi = 31;
  double action_step = 1e-3;
  double e_max = 1.0;
};

/// Random scenario inside the validated parameter ranges. Alternates between
/// uniform and irregular level grids and between constant and per-state drift
/// depending on the draws.
Scenario random_scenario(std::mt19937_64& rng, const ScenarioRanges& ranges = {});

/// h = (0.1, 0.9, 3), c = (0.5, 0.1), D = 2, gamma = 0.9, 11 levels on [0, 1], g = 0.3.
Scenario canonical_scenario();

}  // namespace regmdp
