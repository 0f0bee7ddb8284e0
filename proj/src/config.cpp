#include "regmdp/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace regmdp {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

std::string show(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void number(const nlohmann::json& v, const std::string& key, double& out) {
    if (!v.is_number()) return type_error(key, "a number");
    out = v.get<double>();
  }

  void count(const nlohmann::json& v, const std::string& key, std::size_t& out) {
    if (!v.is_number_integer() || v.get<long long>() < 0) return type_error(key, "a non-negative integer");
    out = v.get<std::size_t>();
  }

  void integer(const nlohmann::json& v, const std::string& key, long& out) {
    if (!v.is_number_integer()) return type_error(key, "an integer");
    out = v.get<long>();
  }

  void seed(const nlohmann::json& v, const std::string& key, std::uint64_t& out) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      return type_error(key, "a non-negative integer");
    }
    out = v.get<std::uint64_t>();
  }

  void text(const nlohmann::json& v, const std::string& key, std::string& out) {
    if (!v.is_string()) return type_error(key, "a string");
    out = v.get<std::string>();
  }

  void optional_number(const nlohmann::json& v, const std::string& key, std::optional<double>& out) {
    if (v.is_null()) {
      out.reset();
      return;
    }
    double x = 0.0;
    if (!v.is_number()) return type_error(key, "a number or null");
    number(v, key, x);
    out = x;
  }

  void numbers(const nlohmann::json& v, const std::string& key, std::vector<double>& out) {
    if (v.is_number()) {
      out = {v.get<double>()};
      return;
    }
    if (!v.is_array()) return type_error(key, "a number or an array of numbers");
    std::vector<double> xs;
    for (const auto& x : v) {
      if (!x.is_number()) return type_error(key, "an array of numbers");
      xs.push_back(x.get<double>());
    }
    out = std::move(xs);
  }

  void knots(const nlohmann::json& v, const std::string& key, std::vector<std::pair<double, double>>& out) {
    if (!v.is_array()) return type_error(key, "an array of [effort, probability] pairs");
    std::vector<std::pair<double, double>> ks;
    for (const auto& p : v) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        return type_error(key, "an array of [effort, probability] pairs");
      }
      ks.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    out = std::move(ks);
  }

 private:
  void type_error(const std::string& key, const std::string& expected) {
    problems_.push_back(key + " must be " + expected);
  }
  std::vector<std::string>& problems_;
};

void validate(const ScenarioConfig& c, std::vector<std::string>& p) {
  auto require = [&p](bool ok, const std::string& field, double value, const std::string& constraint) {
    if (!ok) p.push_back(field + " = " + show(value) + ": must " + constraint);
  };

  if (c.harm_family == "exponential") {
    require(c.h_min > 0.0 && c.h_min < 1.0, "h_min", c.h_min, "lie in (0,1)");
    require(c.h_max > c.h_min && c.h_max <= 1.0, "h_max", c.h_max, "lie in (h_min,1]");
    require(c.k > 0.0, "k", c.k, "be positive");
  } else if (c.harm_family == "piecewise_linear") {
    try {
      HarmModel::piecewise_linear(c.harm_knots);
    } catch (const std::exception& e) {
      p.push_back(std::string("harm_knots: ") + e.what());
    }
  } else {
    p.push_back("harm_family = " + c.harm_family + ": must be exponential or piecewise_linear");
  }

  require(c.a > 0.0, "a", c.a, "be positive");
  require(c.b > 0.0, "b", c.b, "be positive");
  if (c.a2.has_value() != c.b2.has_value()) p.push_back("a2 and b2 must be given together");
  if (c.a2) require(*c.a2 > 0.0, "a2", *c.a2, "be positive");
  if (c.b2) require(*c.b2 > 0.0, "b2", *c.b2, "be positive");
  require(c.damage >= 0.0, "damage", c.damage, "be non-negative");
  require(c.gamma >= 0.0 && c.gamma < 1.0, "gamma", c.gamma, "lie in [0,1)");

  require(c.e_max > 0.0, "e_max", c.e_max, "be positive");
  require(c.action_step > 0.0 && c.action_step <= c.e_max, "action_step", c.action_step, "lie in (0, e_max]");
  if (c.state_levels.empty()) {
    require(c.state_min >= 0.0, "state_min", c.state_min, "be non-negative");
    require(c.n_states >= 2, "n_states", static_cast<double>(c.n_states), "be at least 2");
    require(c.e_h > c.state_min && c.e_h <= c.e_max, "e_h", c.e_h, "lie in (state_min, e_max]");
  } else {
    require(c.state_levels.size() >= 2, "state_levels", static_cast<double>(c.state_levels.size()),
            "list at least 2 levels");
    for (std::size_t i = 0; i < c.state_levels.size(); ++i) {
      const double x = c.state_levels[i];
      require(x >= 0.0 && x <= c.e_max, "state_levels[" + std::to_string(i) + "]", x, "lie in [0, e_max]");
      if (i > 0) require(x > c.state_levels[i - 1], "state_levels[" + std::to_string(i) + "]", x, "exceed the previous level");
    }
  }

  const std::size_t n = c.state_levels.empty() ? c.n_states : c.state_levels.size();
  if (c.drift.size() != 1 && c.drift.size() != n) {
    p.push_back("drift: must be one number or list one probability per state (" + std::to_string(n) + ")");
  }
  for (std::size_t i = 0; i < c.drift.size(); ++i) {
    require(c.drift[i] >= 0.0 && c.drift[i] <= 1.0, "drift[" + std::to_string(i) + "]", c.drift[i], "lie in [0,1]");
  }
  if (c.drift.size() > 1 && c.drift.front() != 0.0) {
    require(false, "drift[0]", c.drift.front(), "be 0 (the lowest state cannot drift)");
  }

  require(c.refine_tol > 0.0, "refine_tol", c.refine_tol, "be positive");
  require(c.value_tol > 0.0, "value_tol", c.value_tol, "be positive");
  require(c.design_tol > 0.0, "design_tol", c.design_tol, "be positive");

  require(c.audit_prob >= 0.0 && c.audit_prob <= 1.0, "audit_prob", c.audit_prob, "lie in [0,1]");
  require(c.fine >= 0.0, "fine", c.fine, "be non-negative");
  if (c.fail_model != "step" && c.fail_model != "ramp") {
    p.push_back("fail_model = " + c.fail_model + ": must be step or ramp");
  }
  require(c.fail_p0 >= 0.0 && c.fail_p0 <= 1.0, "fail_p0", c.fail_p0, "lie in [0,1]");
  require(c.fail_beta >= 0.0, "fail_beta", c.fail_beta, "be non-negative");
  require(c.fine_max >= 0.0, "fine_max", c.fine_max, "be non-negative");
  require(c.static_draws >= 1, "static_draws", static_cast<double>(c.static_draws), "be at least 1");

  require(c.episodes >= 2, "episodes", static_cast<double>(c.episodes), "be at least 2");
  require(c.start_state >= -1 && c.start_state < static_cast<long>(n), "start_state", static_cast<double>(c.start_state),
          "be -1 or a state index");
  require(c.truncation_bound > 0.0, "truncation_bound", c.truncation_bound, "be positive");
  require(c.verify_scenarios >= 1, "verify_scenarios", static_cast<double>(c.verify_scenarios), "be at least 1");

  // Cross-field constraints the model constructors enforce.
  if (p.empty()) {
    try {
      c.mdp();
    } catch (const std::exception& e) {
      p.push_back(e.what());
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

HarmModel ScenarioConfig::harm() const {
  if (harm_family == "piecewise_linear") return HarmModel::piecewise_linear(harm_knots);
  return HarmModel::exponential(h_min, h_max, k);
}

CostModel ScenarioConfig::cost() const { return CostModel(a, b); }

std::optional<CostModel> ScenarioConfig::cost2() const {
  if (!a2 || !b2) return std::nullopt;
  return CostModel(*a2, *b2);
}

WelfareModel ScenarioConfig::welfare() const { return WelfareModel{harm(), cost(), damage}; }

StateSpace ScenarioConfig::state_space() const {
  if (!state_levels.empty()) return StateSpace(state_levels);
  return build_state_space(state_min, e_max, n_states, e_h);
}

DriftModel ScenarioConfig::drift_model() const {
  const std::size_t n = state_space().size();
  if (drift.size() == 1) return DriftModel::constant(drift.front(), n);
  return DriftModel(drift);
}

RegulationMdp ScenarioConfig::mdp() const {
  return RegulationMdp(state_space(), e_max, action_step, harm(), cost(), drift_model(), gamma);
}

FailModel ScenarioConfig::fail() const {
  if (fail_model == "ramp") return RampFailModel{fail_beta};
  return StepFailModel{fail_p0};
}

ScenarioConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});
  ScenarioConfig c;
  std::vector<std::string> problems;
  Reader r(problems);

  using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
  const std::map<std::string, Setter> fields = {
      {"harm_family", [&](auto& v, auto& k) { r.text(v, k, c.harm_family); }},
      {"h_min", [&](auto& v, auto& k) { r.number(v, k, c.h_min); }},
      {"h_max", [&](auto& v, auto& k) { r.number(v, k, c.h_max); }},
      {"k", [&](auto& v, auto& k) { r.number(v, k, c.k); }},
      {"harm_knots", [&](auto& v, auto& k) { r.knots(v, k, c.harm_knots); }},
      {"a", [&](auto& v, auto& k) { r.number(v, k, c.a); }},
      {"b", [&](auto& v, auto& k) { r.number(v, k, c.b); }},
      {"a2", [&](auto& v, auto& k) { r.optional_number(v, k, c.a2); }},
      {"b2", [&](auto& v, auto& k) { r.optional_number(v, k, c.b2); }},
      {"damage", [&](auto& v, auto& k) { r.number(v, k, c.damage); }},
      {"gamma", [&](auto& v, auto& k) { r.number(v, k, c.gamma); }},
      {"state_min", [&](auto& v, auto& k) { r.number(v, k, c.state_min); }},
      {"e_max", [&](auto& v, auto& k) { r.number(v, k, c.e_max); }},
      {"n_states", [&](auto& v, auto& k) { r.count(v, k, c.n_states); }},
      {"e_h", [&](auto& v, auto& k) { r.number(v, k, c.e_h); }},
      {"state_levels", [&](auto& v, auto& k) { r.numbers(v, k, c.state_levels); }},
      {"drift", [&](auto& v, auto& k) { r.numbers(v, k, c.drift); }},
      {"action_step", [&](auto& v, auto& k) { r.number(v, k, c.action_step); }},
      {"refine_tol", [&](auto& v, auto& k) { r.number(v, k, c.refine_tol); }},
      {"value_tol", [&](auto& v, auto& k) { r.number(v, k, c.value_tol); }},
      {"design_tol", [&](auto& v, auto& k) { r.number(v, k, c.design_tol); }},
      {"seed", [&](auto& v, auto& k) { r.seed(v, k, c.seed); }},
      {"audit_prob", [&](auto& v, auto& k) { r.number(v, k, c.audit_prob); }},
      {"fine", [&](auto& v, auto& k) { r.number(v, k, c.fine); }},
      {"fail_model", [&](auto& v, auto& k) { r.text(v, k, c.fail_model); }},
      {"fail_p0", [&](auto& v, auto& k) { r.number(v, k, c.fail_p0); }},
      {"fail_beta", [&](auto& v, auto& k) { r.number(v, k, c.fail_beta); }},
      {"static_draws", [&](auto& v, auto& k) { r.count(v, k, c.static_draws); }},
      {"fine_max", [&](auto& v, auto& k) { r.number(v, k, c.fine_max); }},
      {"episodes", [&](auto& v, auto& k) { r.count(v, k, c.episodes); }},
      {"horizon", [&](auto& v, auto& k) { r.count(v, k, c.horizon); }},
      {"start_state", [&](auto& v, auto& k) { r.integer(v, k, c.start_state); }},
      {"truncation_bound", [&](auto& v, auto& k) { r.number(v, k, c.truncation_bound); }},
      {"trajectories", [&](auto& v, auto& k) { r.count(v, k, c.trajectories); }},
      {"verify_scenarios", [&](auto& v, auto& k) { r.count(v, k, c.verify_scenarios); }},
  };

  for (const auto& [key, value] : doc.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      problems.push_back("unknown key " + key);
      continue;
    }
    it->second(value, key);
  }
  if (problems.empty()) validate(c, problems);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path});
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({"cannot parse " + path + ": " + e.what()});
  }
  // A run's metadata file carries its config under "config".
  if (doc.is_object() && doc.contains("config") && doc.contains("tool")) return config_from_json(doc["config"]);
  return config_from_json(doc);
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["harm_family"] = c.harm_family;
  j["h_min"] = c.h_min;
  j["h_max"] = c.h_max;
  j["k"] = c.k;
  j["harm_knots"] = nlohmann::json::array();
  for (const auto& [e, h] : c.harm_knots) j["harm_knots"].push_back({e, h});
  j["a"] = c.a;
  j["b"] = c.b;
  j["a2"] = c.a2 ? nlohmann::json(*c.a2) : nlohmann::json(nullptr);
  j["b2"] = c.b2 ? nlohmann::json(*c.b2) : nlohmann::json(nullptr);
  j["damage"] = c.damage;
  j["gamma"] = c.gamma;
  j["state_min"] = c.state_min;
  j["e_max"] = c.e_max;
  j["n_states"] = c.n_states;
  j["e_h"] = c.e_h;
  j["state_levels"] = c.state_levels;
  j["drift"] = c.drift;
  j["action_step"] = c.action_step;
  j["refine_tol"] = c.refine_tol;
  j["value_tol"] = c.value_tol;
  j["design_tol"] = c.design_tol;
  j["seed"] = c.seed;
  j["audit_prob"] = c.audit_prob;
  j["fine"] = c.fine;
  j["fail_model"] = c.fail_model;
  j["fail_p0"] = c.fail_p0;
  j["fail_beta"] = c.fail_beta;
  j["static_draws"] = c.static_draws;
  j["fine_max"] = c.fine_max;
  j["episodes"] = c.episodes;
  j["horizon"] = c.horizon;
  j["start_state"] = c.start_state;
  j["truncation_bound"] = c.truncation_bound;
  j["trajectories"] = c.trajectories;
  j["verify_scenarios"] = c.verify_scenarios;
  return j;
}

}  // namespace regmdp
