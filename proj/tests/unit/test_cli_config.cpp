#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "singlab/measure_lab.hpp"
#include "singlab/report_json.hpp"

namespace singlab::cli {
namespace {

std::string schema_key(const std::string& command, const Json& file, const std::vector<std::string>& overrides = {}) {
  try {
    resolve_config(command, file, overrides);
  } catch (const SchemaError& e) {
    return e.key();
  }
  return "<accepted>";
}

TEST(Config, DefaultsResolveForEveryCommand) {
  for (const auto& cmd : command_names()) {
    const Json c = resolve_config(cmd, Json(), {});
    EXPECT_EQ(c.at("command"), cmd);
    EXPECT_EQ(c.at("name"), cmd);
    EXPECT_EQ(c.at("seed"), 42u);
  }
  EXPECT_EQ(schema_key("plot", Json()), "command");
}

TEST(Config, OverridesWinOverFile) {
  const Json file = {{"map", {{"kind", "LAD_LINE"}}}, {"seed", 7}};
  const Json c = resolve_config("winding", file, {"map.kind=LS_LINE", "m=32", "name=run1"});
  EXPECT_EQ(at_path(c, "map.kind"), "LS_LINE");
  EXPECT_EQ(at_path(c, "m"), 32u);
  EXPECT_EQ(at_path(c, "seed"), 7u);
  EXPECT_EQ(at_path(c, "name"), "run1");
  EXPECT_EQ(at_path(c, "map.tie_tol"), 1e-12);
}

TEST(Config, OverrideValueParsing) {
  Json o = Json::object();
  apply_override(o, "slice.center=[[0,1],[1,0],[2,2]]");
  apply_override(o, "map.kind=PC_LINE");
  apply_override(o, "shrink=0.5");
  EXPECT_TRUE(o["slice"]["center"].is_array());
  EXPECT_EQ(o["map"]["kind"], "PC_LINE");
  EXPECT_EQ(o["shrink"], 0.5);
  EXPECT_THROW(apply_override(o, "noequals"), SchemaError);
  EXPECT_THROW(apply_override(o, "a..b=1"), SchemaError);
}

TEST(Config, SchemaErrorsNameTheKey) {
  EXPECT_EQ(schema_key("winding", {{"bogus", 1}}), "bogus");
  EXPECT_EQ(schema_key("winding", {{"map", {{"colour", "red"}}}}), "map.colour");
  EXPECT_EQ(schema_key("winding", {{"m", -4}}), "m");
  EXPECT_EQ(schema_key("winding", {{"m", 2}}), "m");
  EXPECT_EQ(schema_key("winding", {{"shrink", "half"}}), "shrink");
  EXPECT_EQ(schema_key("winding", {{"shrink", 1.5}}), "shrink");
  EXPECT_EQ(schema_key("winding", {{"map", {{"kind", "SPLINE"}}}}), "map.kind");
  EXPECT_EQ(schema_key("winding", {{"map", {{"kind", "AUG_MEAN"}}}}), "map.kind");
  EXPECT_EQ(schema_key("winding", {{"mode", "fast"}}), "mode");
  EXPECT_EQ(schema_key("winding", {{"command", "cdf"}}), "command");
  EXPECT_EQ(schema_key("winding", {{"name", "../x"}}), "name");
  EXPECT_EQ(schema_key("lfplot", {{"slice", {{"n_points", 3}, {"center", {{0, 0}, {1, 1}}}}}}), "slice.center");
  EXPECT_EQ(schema_key("lfplot", {{"slice", {{"center", {{0, 0, 1}, {1, 1}, {2, 2}}}}}}), "slice.center[0]");
  EXPECT_EQ(schema_key("lfplot", {{"slice", {{"grid_resolution", 3}}}}), "slice.grid_resolution");
  EXPECT_EQ(schema_key("localize", {{"region", {{"lo", {-0.5, -0.5}}, {"hi", {0.5, 0.7}}}}}), "region.hi");
  EXPECT_EQ(schema_key("oscillate", {{"radii", {0.1, -0.01}}}), "radii[1]");
  EXPECT_EQ(schema_key("oscillate", {{"radii", {0.01, 0.1}}}), "radii[1]");
  EXPECT_EQ(schema_key("severity", {{"radii", {0.1, 0.01}}}), "radii");
  EXPECT_EQ(schema_key("dimension", {{"map", {{"radius", -0.2}}}}), "map.radius");
  EXPECT_EQ(schema_key("dimension", {{"meshes", {0.1, 0.05, 0.02, 0.01}}}), "meshes");
  EXPECT_EQ(schema_key("tube", {{"deltas", {0.01, 0.3}}}), "deltas[1]");
  EXPECT_EQ(schema_key("tube", {{"mc_samples", 100}}), "mc_samples");
  EXPECT_EQ(schema_key("cdf", {{"q_hi", 0.2}}), "q_hi");
  EXPECT_EQ(schema_key("cdf", {{"n_samples", 10}}), "n_samples");
  EXPECT_EQ(schema_key("cdf", {{"seed", 1.5}}), "seed");
  EXPECT_EQ(schema_key("tradeoff", {{"presets", Json::array({{{"name", "A"}, {"weights", {1, 1}}, {"w0", 0.5}}})}}),
            "presets[0].weights");
  EXPECT_EQ(schema_key("cdf", {{"threads", -1}}), "threads");
  EXPECT_EQ(schema_key("cdf", Json::array()), "<root>");
}

TEST(Config, NegativeRadiusWritesNothing) {
  const auto dir = std::filesystem::temp_directory_path() / "singlab_cfg_negative_radius";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  EXPECT_THROW(resolve_config("oscillate", {{"radii", {-0.1}}}, {}), SchemaError);
  EXPECT_TRUE(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

TEST(ReportJson, NonFiniteBecomesNull) {
  TradeoffReport r;
  r.n_points = 1;
  TradeoffEntry e;
  e.preset_name = "single";
  e.dist_S_to_P = std::numeric_limits<double>::infinity();
  e.flagged = true;
  r.entries.push_back(e);
  const Json j = r;
  EXPECT_TRUE(j["entries"][0]["dist_S_to_P"].is_null());
  EXPECT_EQ(j["entries"][0]["flagged"], true);
}

TEST(ReportJson, TailFitKeysAndRenderShape) {
  TailFit t;
  t.exponent = 2.0;
  t.std_error = 0.1;
  const Json j = t;
  EXPECT_EQ(j["exponent"], 2.0);
  EXPECT_EQ(j["stderr"], 0.1);
  EXPECT_EQ(j["quantile_window"], Json::array({0.002, 0.05}));
  const std::string text = render_report(Json{{"b", 1}, {"a", 2}}, Json{{"x", 1}});
  EXPECT_EQ(text.back(), '\n');
  const Json back = Json::parse(text);
  EXPECT_TRUE(back.contains("config"));
  EXPECT_TRUE(back.contains("result"));
  EXPECT_LT(text.find("\"config\""), text.find("\"result\""));
}

TEST(Commands, RunWritesReportEchoingConfig) {
  const auto dir = std::filesystem::temp_directory_path() / "singlab_cfg_run";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const Json c = resolve_config("winding", Json(), {"name=w", "threads=3", "out_dir=\"/elsewhere\""});
  std::ostringstream log;
  ASSERT_EQ(run_command(c, dir, log), kOk);
  std::ifstream in(dir / "w.json");
  const Json rep = Json::parse(in);
  EXPECT_EQ(rep["config"]["m"], 64u);
  EXPECT_FALSE(rep["config"].contains("threads"));
  EXPECT_FALSE(rep["config"].contains("out_dir"));
  EXPECT_EQ(rep["result"]["status"], "OK");
  EXPECT_EQ(rep["result"]["winding"]["degree"], 2);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace singlab::cli
