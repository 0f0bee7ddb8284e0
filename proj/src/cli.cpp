#include "regmdp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "regmdp/policy_engine.hpp"
#include "regmdp/report.hpp"
#include "regmdp/simulation.hpp"
#include "regmdp/threshold.hpp"
#include "regmdp/verify.hpp"

namespace regmdp::cli {

namespace {

using nlohmann::json;

struct Outcome {
  Table table{{}};
  json results = json::object();
  std::vector<std::string> warnings;
  int exit_code = kOk;
  std::vector<std::string> extra_files;
};

std::int64_t as_int(std::size_t x) { return static_cast<std::int64_t>(x); }

Outcome run_welfare(const ScenarioConfig& cfg) {
  const auto w = cfg.welfare();
  const double e_star = socially_optimal_effort(w, cfg.e_max);
  Outcome out;
  out.table = Table({"e", "EW", "h", "c"});
  constexpr int kPoints = 200;
  for (int i = 0; i <= kPoints; ++i) {
    const double e = cfg.e_max * i / kPoints;
    out.table.add({e, expected_welfare(w, e), w.harm.prob(e), w.cost.cost(e)});
  }
  out.results["e_star"] = e_star;
  out.results["ew_star"] = expected_welfare(w, e_star);
  return out;
}

Outcome run_solve(const ScenarioConfig& cfg) {
  const auto mdp = cfg.mdp();
  const double e_hat = optimal_threshold(mdp, cfg.refine_tol);
  const auto pi = threshold_policy(mdp, e_hat);
  const auto v = evaluate_policy(mdp, pi);
  const auto vi = value_iteration(mdp, cfg.value_tol);
  const double allowed = mdp.actions().step() + 1e-12;

  Outcome out;
  out.table = Table({"state_index", "state", "effort", "value", "vi_effort", "vi_value"});
  bool match = true;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    match = match && std::abs(vi.policy[s] - pi[s]) <= allowed;
    out.table.add({as_int(s), mdp.space().level(s), pi[s], v[s], vi.policy[s], vi.values[s]});
  }
  out.results["e_hat"] = e_hat;
  out.results["vi_match"] = match;
  out.results["vi_iterations"] = vi.iterations;
  out.results["vi_residual"] = vi.residual;
  out.results["bellman_residual"] = bellman_residual(mdp, pi, v);
  out.results["improvement_violations"] = policy_improvement_check(mdp, pi).size();
  if (!match) {
    out.warnings.push_back("value iteration disagrees with the threshold policy by more than one action step");
    out.exit_code = kCheckFailed;
  }
  return out;
}

Outcome run_design(const ScenarioConfig& cfg, std::ostream& log) {
  const auto w = cfg.welfare();
  auto levels = cfg.state_space().levels();
  levels.pop_back();
  const BacklashTemplate tmpl{levels, cfg.e_max, cfg.action_step};

  Outcome out;
  out.table = Table({"target_e_star", "designed_e_h", "achieved_threshold", "residual", "k_constant", "degenerate",
                     "verified"});
  const double e_star = socially_optimal_effort(w, cfg.e_max);
  if (e_star > 0.0 && cfg.gamma > 0.0) {
    const double k = backlash_constant(w.harm, w.cost, cfg.gamma, e_star);
    const double ceiling = w.cost.cost(cfg.e_max) / (1.0 - cfg.gamma);
    if (ceiling < k) {
      out.warnings.push_back("c(e_max)/(1-gamma) = " + format_cell(ceiling) + " < K = " + format_cell(k) +
                             ": no backlash level up to e_max can induce e*");
    }
  }

  try {
    const auto d = design_backlash(w, cfg.gamma, tmpl, cfg.drift_model(), cfg.design_tol);
    out.table.add({d.target_e_star, d.designed_e_h, d.achieved_threshold, d.residual, d.k_constant, d.degenerate,
                   d.verified});
    out.results["target_e_star"] = d.target_e_star;
    out.results["designed_e_h"] = d.designed_e_h;
    out.results["achieved_threshold"] = d.achieved_threshold;
    out.results["residual"] = d.residual;
    out.results["k_constant"] = d.k_constant;
    out.results["degenerate"] = d.degenerate;
    out.results["verified"] = d.verified;
    if (d.degenerate) {
      const std::string notice = "degenerate design: e* = 0, nothing to induce; stable effort " +
                                 format_cell(d.achieved_threshold) + " at e_h = " + format_cell(d.designed_e_h);
      out.warnings.push_back(notice);
      log << notice << '\n';
    } else if (!d.verified) {
      out.exit_code = kCheckFailed;
    }
  } catch (const BracketError& e) {
    out.results["error"] = e.what();
    out.results["k_constant"] = e.k_constant();
    out.results["cost_at_max"] = e.cost_at_max();
    out.exit_code = kConfigError;
    log << "error: " << e.what() << '\n';
  }
  return out;
}

Outcome run_static(const ScenarioConfig& cfg) {
  const auto mdp = cfg.mdp();
  const auto& grid = mdp.actions().efforts();
  const auto& levels = mdp.space().levels();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Outcome out;
  out.table = Table({"draw", "audit_prob", "fine", "state", "induced_effort", "exceeds"});
  std::vector<double> max_induced(levels.size(), 0.0);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < cfg.static_draws; ++i) {
    double r = cfg.audit_prob, fine = cfg.fine;
    if (i > 0) {
      r = unit(rng);
      fine = cfg.fine_max > 1e-3 ? std::exp(std::log(1e-3) + unit(rng) * (std::log(cfg.fine_max) - std::log(1e-3)))
                                 : cfg.fine_max * unit(rng);
    }
    const StaticRegime regime(r, fine, cfg.fail());
    for (std::size_t s = 0; s < levels.size(); ++s) {
      double induced = 0.0;
      bool exceeds = false;
      try {
        induced = static_optimal_effort(regime, cfg.cost(), grid, levels[s]);
      } catch (const std::logic_error&) {
        exceeds = true;
      }
      exceeds = exceeds || induced > levels[s];
      violations += exceeds ? 1 : 0;
      max_induced[s] = std::max(max_induced[s], induced);
      out.table.add({as_int(i), r, fine, levels[s], induced, exceeds});
    }
  }
  out.results["max_induced_effort"] = max_induced;
  out.results["violations"] = violations;
  out.results["never_exceeds_required"] = violations == 0;
  if (violations > 0) out.exit_code = kCheckFailed;
  return out;
}

Outcome run_impossibility(const ScenarioConfig& cfg) {
  const auto cost2 = cfg.cost2();
  if (!cost2) throw ConfigError({"a2 and b2 are required for impossibility"});
  const auto mdp = cfg.mdp();
  const ImpossibilityInputs in{cfg.harm(),
                               cfg.damage,
                               cfg.cost(),
                               *cost2,
                               cfg.e_max,
                               mdp.space().levels(),
                               mdp.actions().efforts(),
                               StaticRegime(cfg.audit_prob, cfg.fine, cfg.fail()),
                               cfg.action_step};
  const auto rep = impossibility_report(in);

  Outcome out;
  out.table = Table({"required_effort", "induced_1", "induced_2", "gap_1", "gap_2", "welfare_loss_1",
                     "welfare_loss_2", "attains_both"});
  for (const auto& row : rep.rows) {
    out.table.add({row.required_effort, row.induced_1, row.induced_2, row.gap_1, row.gap_2, row.welfare_loss_1,
                   row.welfare_loss_2, row.attains_both});
  }
  out.results["e_star_1"] = rep.e_star_1;
  out.results["e_star_2"] = rep.e_star_2;
  out.results["degenerate"] = rep.degenerate;
  out.results["impossibility_holds"] = rep.impossibility_holds;
  out.results["note"] = rep.note;
  if (rep.degenerate) out.warnings.push_back(rep.note);
  if (!rep.degenerate && !rep.impossibility_holds) out.exit_code = kCheckFailed;
  return out;
}

Outcome run_simulate(const ScenarioConfig& cfg, const std::string& out_dir) {
  const auto mdp = cfg.mdp();
  const double e_hat = optimal_threshold(mdp, cfg.refine_tol);
  const auto pi = threshold_policy(mdp, e_hat);
  const auto v = evaluate_policy(mdp, pi);
  const std::size_t horizon = cfg.horizon > 0 ? cfg.horizon : minimal_horizon(mdp, cfg.truncation_bound);

  std::vector<std::size_t> starts;
  if (cfg.start_state >= 0) {
    starts.push_back(static_cast<std::size_t>(cfg.start_state));
  } else {
    for (std::size_t s = 0; s < mdp.n_states(); ++s) starts.push_back(s);
  }

  Outcome out;
  out.table = Table({"state_index", "state", "analytic", "mc_mean", "half_width_95", "std_error", "truncation_bound",
                     "z", "within_ci"});
  std::size_t outliers = 0;
  for (std::size_t s : starts) {
    const auto est = estimate_value(mdp, pi, s, cfg.episodes, horizon, cfg.seed + s, cfg.truncation_bound);
    const double err = est.mean - v[s];
    const double z = est.std_error > 0.0 ? err / est.std_error : (err == 0.0 ? 0.0 : INFINITY);
    const bool within = std::abs(err) <= est.half_width_95 + est.truncation_bound;
    outliers += std::abs(z) >= 4.0 ? 1 : 0;
    out.table.add({as_int(s), mdp.space().level(s), v[s], est.mean, est.half_width_95, est.std_error,
                   est.truncation_bound, z, within});
  }
  out.results["e_hat"] = e_hat;
  out.results["horizon"] = horizon;
  out.results["episodes"] = cfg.episodes;
  out.results["outliers_abs_z_ge_4"] = outliers;
  if (outliers > 0) out.exit_code = kCheckFailed;

  if (cfg.trajectories > 0) {
    const std::size_t start = cfg.start_state >= 0 ? static_cast<std::size_t>(cfg.start_state)
                                                   : mdp.space().backlash_index();
    Table traj({"episode", "t", "state", "action", "harm", "reward"});
    for (std::size_t ep = 0; ep < cfg.trajectories; ++ep) {
      const auto tr = sample_trajectory(mdp, pi, cfg.seed + start, horizon, start, ep);
      for (std::size_t t = 0; t < tr.steps.size(); ++t) {
        const auto& st = tr.steps[t];
        traj.add({as_int(ep), as_int(t), st.state, st.action, st.harm, st.reward});
      }
    }
    const auto path = (std::filesystem::path(out_dir) / "simulate.trajectories.csv").string();
    emit_csv(traj, path);
    out.extra_files.push_back(path);
  }
  return out;
}

Outcome run_verify(const ScenarioConfig& cfg) {
  const std::uint64_t seed = cfg.seed;
  const std::size_t n = cfg.verify_scenarios;
  const std::vector<verify::SuiteResult> suites = {
      verify::threshold_optimality_suite(seed, n),
      verify::shared_low_value_suite(seed + 1, n),
      verify::backlash_worst_state_suite(seed + 1, n),
      verify::preference_sign_suite(seed + 2, n),
      verify::static_minimum_suite(seed + 3, cfg.static_draws, cfg.fine_max),
      verify::design_suite(seed + 4),
      verify::overreaction_suite(seed + 5),
      verify::impossibility_suite(),
      verify::monte_carlo_suite(seed + 6, 5, cfg.episodes, cfg.truncation_bound),
      verify::hygiene_suite(seed + 7),
  };

  Outcome out;
  out.table = Table({"suite", "checks", "failures", "allowed_failure_rate", "passed", "detail"});
  std::size_t failed = 0;
  for (const auto& s : suites) {
    out.table.add({s.name, as_int(s.checks), as_int(s.failures), s.allowed_failure_rate, s.passed(), s.detail});
    failed += s.passed() ? 0 : 1;
  }
  out.results["suites"] = suites.size();
  out.results["suites_failed"] = failed;
  if (failed > 0) out.exit_code = kCheckFailed;
  return out;
}

json versions() {
  return {{"tool", kVersion},
          {"compiler", __VERSION__},
          {"cplusplus", static_cast<std::int64_t>(__cplusplus)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"welfare", "static", "solve", "design-backlash",
                                                 "impossibility", "simulate", "verify"};
  return names;
}

int run(const std::string& subcommand, ScenarioConfig config, const std::string& out_dir, const Overrides& overrides,
        std::ostream* log) {
  std::ostream& err = log ? *log : std::cerr;
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    err << "error: unknown subcommand " << subcommand << '\n';
    return kConfigError;
  }
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.episodes) config.episodes = *overrides.episodes;
  if (overrides.trajectories) config.trajectories = *overrides.trajectories;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create " << out_dir << ": " << ec.message() << '\n';
    return kIoError;
  }
  const auto base = std::filesystem::path(out_dir) / subcommand;
  const auto csv_path = base.string() + ".csv";
  const auto meta_path = base.string() + ".meta.json";

  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    // Revalidates after overrides.
    config = config_from_json(config_to_json(config));
    if (subcommand == "welfare") out = run_welfare(config);
    else if (subcommand == "solve") out = run_solve(config);
    else if (subcommand == "design-backlash") out = run_design(config, err);
    else if (subcommand == "static") out = run_static(config);
    else if (subcommand == "impossibility") out = run_impossibility(config);
    else if (subcommand == "simulate") out = run_simulate(config, out_dir);
    else out = run_verify(config);
  } catch (const ConfigError& e) {
    err << "config error:\n" << e.what() << '\n';
    out.results["error"] = e.what();
    out.exit_code = kConfigError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const HorizonError& e) {
    err << "error: " << e.what() << '\n';
    out.results["error"] = e.what();
    out.results["minimal_horizon"] = e.minimal_horizon();
    out.exit_code = kConfigError;
  } catch (const std::invalid_argument& e) {
    // DomainError, FeasibilityError, ConstructionError: inputs the models reject.
    err << "error: " << e.what() << '\n';
    out.results["error"] = e.what();
    out.exit_code = kConfigError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    out.results["error"] = e.what();
    out.exit_code = kConfigError;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& w : out.warnings) err << "warning: " << w << '\n';

  json meta;
  meta["tool"] = kToolName;
  meta["versions"] = versions();
  meta["subcommand"] = subcommand;
  meta["config"] = config_to_json(config);
  meta["seed"] = config.seed;
  meta["timings_ms"] = {{"total", ms}};
  meta["results"] = out.results;
  meta["warnings"] = out.warnings;
  meta["outputs"] = json::array({csv_path});
  for (const auto& f : out.extra_files) meta["outputs"].push_back(f);
  meta["exit_code"] = out.exit_code;
  try {
    emit_csv(out.table, csv_path);
    write_json(meta, meta_path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return out.exit_code;
}

int main(int argc, char** argv) {
  CLI::App app{"Regulation MDP solver: welfare, stable effort, backlash design, static regime, simulation"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes, trajectories;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "flat JSON scenario file, or a previous run's .meta.json")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--episodes", episodes, "Monte Carlo episodes (overrides the config)");
    sub->add_option("--trajectories", trajectories, "simulate: also export this many trajectories");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  ScenarioConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return kConfigError;
  }
  return run(app.get_subcommands().front()->get_name(), cfg, out_dir, {seed, episodes, trajectories});
}

}  // namespace regmdp::cli
