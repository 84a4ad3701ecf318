// End-to-end checks of the singlab binary: schema rejection of the malformed
// fixtures, exit codes, and byte-reproducible outputs across thread counts.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kBinary = SINGLAB_BINARY;
const fs::path kFixtures = SINGLAB_FIXTURES_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

struct Run {
  int exit_code = -1;
  std::string log;
};

Run run(const std::vector<std::string>& args, const fs::path& scratch) {
  fs::create_directories(scratch);
  const fs::path log = scratch.parent_path() / (scratch.filename().string() + ".log");
  std::string cmd = quote(kBinary.string());
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2> " + quote(log.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.log = slurp(log);
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "singlab_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::map<std::string, std::string> files_in(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

TEST(Cli, MalformedFixturesExitTwoAndNameTheKey) {
  const Json expected = Json::parse(slurp(kFixtures / "malformed" / "expected_keys.json"));
  std::size_t seen = 0;
  for (const auto& e : fs::directory_iterator(kFixtures / "malformed")) {
    const std::string file = e.path().filename().string();
    if (file == "expected_keys.json") continue;
    ++seen;
    ASSERT_TRUE(expected.contains(file)) << file << " has no expected key";
    const auto& x = expected[file];
    const fs::path out = fresh_dir("malformed_" + e.path().stem().string());
    const auto r = run({x["command"].get<std::string>(), "-c", e.path().string(), "-o", out.string()}, out);
    EXPECT_EQ(r.exit_code, 2) << file << ": " << r.log;
    EXPECT_NE(r.log.find("'" + x["key"].get<std::string>() + "'"), std::string::npos) << file << ": " << r.log;
    EXPECT_TRUE(fs::is_empty(out)) << file << " wrote files";
  }
  EXPECT_EQ(seen, expected.size());
}

TEST(Cli, UsageErrorsExitTwo) {
  const fs::path out = fresh_dir("usage");
  EXPECT_EQ(run({}, out).exit_code, 2);
  EXPECT_EQ(run({"frobnicate"}, out).exit_code, 2);
  EXPECT_EQ(run({"winding", "--threads", "-2"}, out).exit_code, 2);
  EXPECT_EQ(run({"winding", "-c", (kFixtures / "missing.json").string(), "-o", out.string()}, out).exit_code, 2);
  EXPECT_EQ(run({"winding", "--set", "m", "-o", out.string()}, out).exit_code, 2);
  EXPECT_TRUE(fs::is_empty(out));
}

TEST(Cli, LocalizePcFindsTheCenterBox) {
  const fs::path out = fresh_dir("localize_pc");
  const auto r = run({"localize", "-c", (kFixtures / "valid" / "localize_pc.json").string(), "-o", out.string()}, out);
  ASSERT_EQ(r.exit_code, 0) << r.log;
  const Json rep = Json::parse(slurp(out / "localize.json"));
  const double eps = rep["config"]["eps"].get<double>();
  int at_center = 0;
  for (const auto& b : rep["result"]["boxes"]) {
    if (b["status"] != "CERTIFIED") continue;
    if (std::hypot(b["center"][0].get<double>(), b["center"][1].get<double>()) <= eps) ++at_center;
  }
  EXPECT_EQ(at_center, 1);
}

TEST(Cli, SingularLoopIsExitThree) {
  const fs::path out = fresh_dir("lad_localize");
  const auto r = run({"localize", "--set", "map.kind=LAD_LINE", "-o", out.string()}, out);
  EXPECT_EQ(r.exit_code, 3) << r.log;
  const Json rep = Json::parse(slurp(out / "localize.json"));
  EXPECT_EQ(rep["result"]["status"], "LOOP_HITS_SINGULARITY");
}

TEST(Cli, CdfTwiceIsByteIdentical) {
  const fs::path a = fresh_dir("cdf_a");
  const fs::path b = fresh_dir("cdf_b");
  const std::string cfg = (kFixtures / "valid" / "cdf_ls.json").string();
  ASSERT_EQ(run({"cdf", "-c", cfg, "-o", a.string()}, a).exit_code, 0);
  ASSERT_EQ(run({"cdf", "-c", cfg, "-o", b.string()}, b).exit_code, 0);
  EXPECT_EQ(slurp(a / "cdf.csv"), slurp(b / "cdf.csv"));
  EXPECT_EQ(slurp(a / "cdf.json"), slurp(b / "cdf.json"));
  const std::string csv = slurp(a / "cdf.csv");
  EXPECT_EQ(csv.rfind("distance\n", 0), 0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  const fs::path out = fresh_dir("env_out");
  const std::string cmd = "SINGLAB_OUT_DIR=" + quote(out.string()) + " " + quote(kBinary.string()) +
                          " winding --set name=from_env 2>/dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(out / "from_env.json"));
}

// Every command, with knobs trimmed for test time, at threads 1 and 4.
struct Case {
  std::string command;
  std::vector<std::string> sets;
};

std::vector<Case> determinism_cases() {
  return {
      {"lfplot", {"slice.grid_resolution=24"}},
      {"winding", {"map.kind=LAD_LINE"}},
      {"localize", {}},
      {"oscillate", {"samples=64", "dataset.slice_u=[0.2,0.1]"}},
      {"severity", {"samples=64"}},
      {"derivprofile", {}},
      {"derivprofile", {"target=oscillator", "name=osc"}},
      {"tube", {"fixture=circle", "mc_samples=20000"}},
      {"cdf", {"map.kind=PC_LINE", "n_samples=20000", "bootstrap=10"}},
      {"dimension", {}},
      {"tradeoff", {"cloud_samples=2000"}},
  };
}

TEST(Cli, EveryCommandIsByteReproducibleAcrossThreadCounts) {
  int k = 0;
  for (const auto& c : determinism_cases()) {
    std::map<std::string, std::string> reference;
    for (const char* threads : {"1", "4", "4"}) {
      const fs::path out = fresh_dir("det_" + std::to_string(k) + "_" + c.command + "_" + threads);
      std::vector<std::string> args = {c.command, "-t", threads, "-o", out.string()};
      for (const auto& s : c.sets) {
        args.push_back("--set");
        args.push_back(s);
      }
      const auto r = run(args, out);
      ASSERT_TRUE(r.exit_code == 0 || r.exit_code == 3) << c.command << ": " << r.log;
      const auto files = files_in(out);
      ASSERT_FALSE(files.empty()) << c.command;
      if (reference.empty()) {
        reference = files;
      } else {
        EXPECT_EQ(files, reference) << c.command << " differs at threads=" << threads;
      }
    }
    ++k;
  }
}

}  // namespace
