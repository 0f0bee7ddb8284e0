#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "regmdp/config.hpp"
#include "regmdp/report.hpp"

using namespace regmdp;
using nlohmann::json;

namespace {

std::vector<std::string> problems_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& ps, const std::string& needle) {
  for (const auto& p : ps) {
    if (p.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("regmdp_test_" + name)).string();
}

}  // namespace

TEST(Config, EmptyDocumentIsCanonical) {
  const auto c = config_from_json(json::object());
  EXPECT_EQ(c.gamma, 0.9);
  EXPECT_EQ(c.damage, 2.0);
  EXPECT_EQ(c.n_states, 11u);
  const auto mdp = c.mdp();
  EXPECT_EQ(mdp.n_states(), 11u);
  EXPECT_DOUBLE_EQ(mdp.drift().prob(3), 0.3);
  EXPECT_EQ(mdp.drift().prob(0), 0.0);
}

TEST(Config, GammaOneRejected) {
  const auto ps = problems_of({{"gamma", 1.0}});
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0], "gamma = 1: must lie in [0,1)");
}

TEST(Config, HarmOrderingRejected) {
  EXPECT_TRUE(mentions(problems_of({{"h_min", 0.5}, {"h_max", 0.4}}), "h_max = 0.4"));
}

TEST(Config, EveryViolationListed) {
  const auto ps = problems_of({{"a", -1.0}, {"k", 0.0}, {"drift", 1.5}, {"gamma", 2.0}});
  EXPECT_EQ(ps.size(), 4u);
  EXPECT_TRUE(mentions(ps, "a = -1"));
  EXPECT_TRUE(mentions(ps, "k = 0"));
  EXPECT_TRUE(mentions(ps, "drift[0] = 1.5"));
  EXPECT_TRUE(mentions(ps, "gamma = 2"));
}

TEST(Config, TypeAndKeyErrors) {
  EXPECT_TRUE(mentions(problems_of({{"gamma", "high"}}), "gamma must be a number"));
  EXPECT_TRUE(mentions(problems_of({{"gama", 0.9}}), "unknown key gama"));
  EXPECT_TRUE(mentions(problems_of({{"n_states", 2.5}}), "n_states must be a non-negative integer"));
  EXPECT_THROW(config_from_json(json::array()), ConfigError);
}

TEST(Config, PerStateDrift) {
  const auto c = config_from_json({{"n_states", 3}, {"e_h", 1.0}, {"drift", {0.0, 0.2, 0.4}}});
  EXPECT_DOUBLE_EQ(c.drift_model().prob(2), 0.4);
  EXPECT_FALSE(problems_of({{"n_states", 3}, {"drift", {0.0, 0.2}}}).empty());
  EXPECT_FALSE(problems_of({{"n_states", 3}, {"drift", {0.1, 0.2, 0.3}}}).empty());
}

TEST(Config, ExplicitLevelsAndPiecewiseHarm) {
  const auto c = config_from_json({{"state_levels", {0.0, 0.5, 0.8}},
                                   {"harm_family", "piecewise_linear"},
                                   {"harm_knots", {{0.0, 0.8}, {0.5, 0.4}, {1.0, 0.2}}}});
  const auto mdp = c.mdp();
  EXPECT_EQ(mdp.n_states(), 3u);
  EXPECT_DOUBLE_EQ(mdp.space().backlash_effort(), 0.8);
  EXPECT_DOUBLE_EQ(mdp.harm().prob(0.25), 0.6);
}

TEST(Config, RoundTripThroughJson) {
  const auto c = config_from_json({{"gamma", 0.7}, {"a2", 0.2}, {"b2", 0.05}, {"seed", 5}});
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  ASSERT_TRUE(back.cost2().has_value());
  EXPECT_EQ(back.cost2()->a, 0.2);
}

TEST(Config, LoadErrors) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
  const auto path = tmp_path("bad.json");
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_config(path), ConfigError);
  std::ofstream(path) << R"({"gamma": 0.5})";
  EXPECT_EQ(load_config(path).gamma, 0.5);
  std::filesystem::remove(path);
}

TEST(Csv, HeaderOnlyWhenEmpty) {
  const Table t({"state", "effort"});
  EXPECT_EQ(to_csv(t), "state,effort\r\n");
}

TEST(Csv, PolicyTableColumns) {
  Table t({"state", "effort"});
  t.add({0.1, 0.45});
  t.add({1.0, 1.0});
  EXPECT_EQ(to_csv(t), "state,effort\r\n0.1,0.45\r\n1,1\r\n");
  EXPECT_THROW(t.add({1.0}), std::invalid_argument);
}

TEST(Csv, QuotingAndCellKinds) {
  Table t({"name", "n", "flag"});
  t.add({std::string("a,\"b\""), std::int64_t{7}, true});
  const auto text = to_csv(t);
  EXPECT_EQ(text, "name,n,flag\r\n\"a,\"\"b\"\"\",7,true\r\n");
  const auto rows = parse_csv(text);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "a,\"b\"");
}

TEST(Csv, TwelveDigitRoundTrip) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Table t({"x"});
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) {
    xs.push_back(u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10));
    t.add({xs.back()});
  }
  const auto rows = parse_csv(to_csv(t));
  ASSERT_EQ(rows.size(), xs.size() + 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", xs[i]);
    const double parsed = std::strtod(rows[i + 1][0].c_str(), nullptr);
    EXPECT_EQ(parsed, std::strtod(buf, nullptr));
    EXPECT_LE(std::abs(parsed - xs[i]), 1e-11 * std::abs(xs[i]));
  }
}

TEST(Csv, WriteFailureIsIoError) {
  EXPECT_THROW(emit_csv(Table({"x"}), "/nonexistent/dir/out.csv"), IoError);
  EXPECT_THROW(write_json(json::object(), "/nonexistent/dir/out.json"), IoError);
}
