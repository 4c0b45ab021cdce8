#include <gtest/gtest.h>

#include <set>

#include "streamguide/scenario.hpp"

namespace sg = streamguide;
using sg::Vec2;

namespace {

const char* kMinimal = R"({
  "grid": {"L_x": 20, "L_y": 20, "N_x": 100, "N_y": 100},
  "target": {"x": 0.8, "y": 9.8},
  "vessel": {"x0": 18.8, "y0": 9.8, "psi0": 3.14159},
  "obstacles": [
    {"x": 5.8, "y": 9.8, "vx": 0.04, "vy": 0, "r": 1.5, "l": 1.5, "Cv": 1.25, "compliant": false}
  ]
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

}  // namespace

TEST(ParseScenario, MinimalDocumentUsesDefaults) {
  const sg::Scenario sc = sg::parse_scenario(kMinimal);
  EXPECT_EQ(sc.workspace.target, Vec2(0.8, 9.8));
  ASSERT_EQ(sc.workspace.obstacles.size(), 1u);
  EXPECT_EQ(sc.workspace.obstacles[0].vortex_gain, 1.25);
  EXPECT_EQ(sc.planner, sg::PlannerParams{});
  EXPECT_EQ(sc.path, sg::PathParams{});
  EXPECT_EQ(sc.gains, sg::ControlGains{});
  EXPECT_EQ(sc.sim, sg::SimConfig{});
}

TEST(ParseScenario, RoundTrip) {
  for (const sg::Scenario& sc : sg::builtin_scenarios()) {
    const sg::Scenario back = sg::parse_scenario(sg::serialize_scenario(sc));
    EXPECT_TRUE(back == sc) << sc.name;
  }
}

TEST(ParseScenario, UnknownKeyNamesPath) {
  const std::string text = replace(kMinimal, "\"compliant\"", "\"colour\": 1, \"compliant\"");
  try {
    sg::parse_scenario(text);
    FAIL() << "unknown key accepted";
  } catch (const sg::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/obstacles/0/colour"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 0);
  }
}

TEST(ParseScenario, SyntaxErrorHasLineAndColumn) {
  const std::string text = replace(kMinimal, "\"N_y\": 100}", "\"N_y\": 100,}");
  try {
    sg::parse_scenario(text);
    FAIL() << "syntax error accepted";
  } catch (const sg::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 50);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseScenario, MissingSectionAndWrongType) {
  EXPECT_THROW(sg::parse_scenario(replace(kMinimal, "\"target\"", "\"targt\"")), sg::ConfigError);
  EXPECT_THROW(sg::parse_scenario(replace(kMinimal, "\"N_x\": 100", "\"N_x\": \"many\"")),
               sg::ConfigError);
}

TEST(ParseScenario, ScalarGainsExpand) {
  const std::string text = replace(
      kMinimal, "\"obstacles\"",
      "\"controller\": {\"Kp\": 5, \"Knu\": [1, 2, 3], \"kpsi\": 7, \"ud\": 0.3, "
      "\"eps_reg\": 0.02, \"mu\": 0.001}, \"obstacles\"");
  const sg::Scenario sc = sg::parse_scenario(text);
  EXPECT_EQ(sc.gains.K_p, Eigen::Matrix2d(Eigen::Vector2d(5, 5).asDiagonal()));
  EXPECT_EQ(sc.gains.K_nu, Eigen::Matrix3d(Eigen::Vector3d(1, 2, 3).asDiagonal()));
  EXPECT_EQ(sc.gains.u_d, 0.3);
}

TEST(Builtins, SixCases) {
  const auto& all = sg::builtin_scenarios();
  ASSERT_EQ(all.size(), 6u);
  std::set<std::string> names;
  for (const sg::Scenario& sc : all) names.insert(sc.name);
  EXPECT_EQ(names, (std::set<std::string>{"colregs_headon_overtaking", "colregs_crossing",
                                          "anticollision_headon", "anticollision_crossing",
                                          "complex_1", "complex_2"}));
}

TEST(Builtins, ObstacleCounts) {
  EXPECT_EQ(sg::find_builtin("complex_1")->workspace.obstacles.size(), 5u);
  EXPECT_EQ(sg::find_builtin("complex_2")->workspace.obstacles.size(), 6u);
  EXPECT_EQ(sg::find_builtin("anticollision_headon")->workspace.obstacles.size(), 3u);
  EXPECT_EQ(sg::find_builtin("anticollision_crossing")->workspace.obstacles.size(), 4u);
}

TEST(Builtins, TabulatedStrengthRecovered) {
  const sg::Obstacle& o = sg::find_builtin("anticollision_headon")->workspace.obstacles[1];
  EXPECT_NEAR(o.vortex_gain * o.velocity.norm(), 0.1, 1e-15);
  EXPECT_FALSE(o.colregs_compliant);
}

TEST(Builtins, AliasesResolve) {
  EXPECT_EQ(sg::find_builtin("headon_anticollision"), sg::find_builtin("anticollision_headon"));
  EXPECT_EQ(sg::find_builtin("crossing_colregs"), sg::find_builtin("colregs_crossing"));
  EXPECT_EQ(sg::find_builtin("no_such_case"), nullptr);
}

TEST(LoadScenarioFile, MissingFile) {
  EXPECT_THROW(sg::load_scenario_file("/nonexistent/scenario.json"), sg::ConfigError);
}
