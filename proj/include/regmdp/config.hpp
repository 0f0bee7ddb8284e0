#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "regmdp/mdp.hpp"
#include "regmdp/primitives.hpp"
#include "regmdp/threshold.hpp"

namespace regmdp {

/// Unreadable, unparsable or invalid configuration. Every violated constraint
/// is listed, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/**
 * One flat scenario document. Every key is optional and defaults to the
 * canonical scenario, so `{}` is a valid config.
 */
struct ScenarioConfig {
  // Harm: "exponential" uses (h_min, h_max, k); "piecewise_linear" uses knots.
  std::string harm_family = "exponential";
  double h_min = 0.1;
  double h_max = 0.9;
  double k = 3.0;
  std::vector<std::pair<double, double>> harm_knots;

  double a = 0.5;
  double b = 0.1;
  std::optional<double> a2;  ///< second cost, impossibility only
  std::optional<double> b2;

  double damage = 2.0;
  double gamma = 0.9;

  // State grid: n_states - 1 uniform levels on [state_min, e_h) plus e_h,
  // unless state_levels lists them explicitly.
  double state_min = 0.0;
  double e_max = 1.0;
  std::size_t n_states = 11;
  double e_h = 1.0;
  std::vector<double> state_levels;

  std::vector<double> drift{0.3};  ///< one entry = constant, else per state
  double action_step = 1e-3;

  double refine_tol = 1e-9;
  double value_tol = 1e-11;
  double design_tol = 2e-3;
  std::uint64_t seed = 20240901;

  // static
  double audit_prob = 0.5;
  double fine = 10.0;
  std::string fail_model = "step";
  double fail_p0 = 1.0;
  double fail_beta = 5.0;
  std::size_t static_draws = 100;
  double fine_max = 1e9;

  // simulate
  std::size_t episodes = 100000;
  std::size_t horizon = 0;  ///< 0 = smallest horizon meeting truncation_bound
  long start_state = -1;    ///< -1 = every state
  double truncation_bound = 1e-6;
  std::size_t trajectories = 0;

  // verify
  std::size_t verify_scenarios = 20;

  HarmModel harm() const;
  CostModel cost() const;
  std::optional<CostModel> cost2() const;
  WelfareModel welfare() const;
  StateSpace state_space() const;
  DriftModel drift_model() const;
  RegulationMdp mdp() const;
  FailModel fail() const;
};

/// Validates a parsed document. Unknown keys are errors.
ScenarioConfig config_from_json(const nlohmann::json& doc);
/// Reads a config file, or the "config" object of a run's metadata file.
ScenarioConfig load_config(const std::string& path);
/// Every field, including defaults, in the input format.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

}  // namespace regmdp
