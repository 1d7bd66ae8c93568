#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "pswl/config.hpp"
#include "pswl/errors.hpp"
#include "pswl/report_io.hpp"
#include "pswl/simkernel.hpp"
#include "pswl/sweep.hpp"
#include "pswl/toml_lite.hpp"
#include "toy.hpp"

using namespace pswl;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = PSWL_CONFIG_DIR;

ExperimentConfig from_toml(const std::string& text) {
  return config_from_json(parse_toml(text));
}

}  // namespace

TEST(Toml, ScalarsTablesAndArrays) {
  const auto j = parse_toml(R"(
# comment
seed = 7
name = "a # not a comment"
raw = 'C:\path'
big = 1_000
x = -2.5e3
flag = true
[a.b]
list = [1, 2,
        3]  # trailing
nested = [[3, 1], [4, 2]]
empty = []
)");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["name"], "a # not a comment");
  EXPECT_EQ(j["raw"], "C:\\path");
  EXPECT_EQ(j["big"], 1000);
  EXPECT_EQ(j["x"], -2500.0);
  EXPECT_EQ(j["flag"], true);
  EXPECT_EQ(j["a"]["b"]["list"], nlohmann::json({1, 2, 3}));
  EXPECT_EQ(j["a"]["b"]["nested"], nlohmann::json({{3, 1}, {4, 2}}));
  EXPECT_TRUE(j["a"]["b"]["empty"].is_array());
}

TEST(Toml, ErrorsNameTheLine) {
  try {
    parse_toml("a = 1\nb = \n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_toml("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_toml("[t]\n[t]\n"), ConfigError);
  EXPECT_THROW(parse_toml("s = \"open\n"), ConfigError);
}

TEST(Config, DefaultsMatchDocumentedValues) {
  const ExperimentConfig c = from_toml("");
  EXPECT_DOUBLE_EQ(c.params.failure.mu, std::log(3000.0));
  EXPECT_EQ(c.params.failure.sigma, 0.1);
  EXPECT_EQ(c.params.controller.gains.kp, 0.5);
  EXPECT_EQ(c.params.controller.gains.ki, 0.01);
  EXPECT_EQ(c.params.controller.gains.kd, 0.1);
  EXPECT_EQ(c.params.controller.t0, 4096u);
  EXPECT_EQ(c.params.controller.lambda, 0.02);
  EXPECT_EQ(c.params.controller.lambda_restart, 0.04);
  EXPECT_EQ(c.params.hotness.window, 65536u);
  EXPECT_EQ(c.flash.overprovision, 0.10);
  EXPECT_EQ(c.flash.gc_threshold, 0.05);
  EXPECT_EQ(c.latency.read_page, 50.0);
  EXPECT_EQ(c.latency.program_page, 500.0);
  EXPECT_EQ(c.latency.erase_block, 3000.0);
  EXPECT_EQ(c.workload.inter_arrival_us, 10.0);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c = toy::config(PolicyKind::Edm);
  c.scheme = ScalingScheme::SDM;
  c.raid_level = RaidLevel::Raid6;
  c.k_o = 5;
  c.k_s = 2;
  c.initial_wear.mode = InitialWearMode::PerDisk;
  c.initial_wear.per_disk = {1, 2, 3, 4, 5};
  const auto j = config_to_json(c);
  const ExperimentConfig back = config_from_json(j);
  EXPECT_EQ(config_to_json(back).dump(), j.dump());
}

TEST(Config, UnknownKeysAreRejected) {
  EXPECT_THROW(from_toml("sed = 1\n"), ConfigError);
  EXPECT_THROW(from_toml("[array]\nk_0 = 3\n"), ConfigError);
  EXPECT_THROW(from_toml("[nosuch]\nx = 1\n"), ConfigError);
  EXPECT_THROW(from_toml("[array]\nk_o = \"three\"\n"), ConfigError);
}

TEST(Config, ValidationRejectsBadCombinations) {
  auto invalid = [](const std::string& text) {
    EXPECT_THROW(from_toml(text).validate(), ConfigError) << text;
  };
  invalid("[array]\nscheme = \"fastscale\"\nraid_level = \"raid5\"\n");
  invalid("[array]\nscheme = \"gsr\"\nraid_level = \"raid0\"\n");
  invalid("[array]\nscheme = \"sdm\"\nraid_level = \"raid5\"\n");
  invalid("[array]\nk_o = 2\nraid_level = \"raid6\"\n");
  invalid("[reliability]\nsigma = 0\n");
  invalid("[controller]\nlambda = 0.05\nlambda_restart = 0.04\n");
  invalid("[workload]\nsource = \"trace\"\n");
  invalid("[initial_wear]\nmode = \"per_disk\"\nper_disk = [1, 2]\n");
  invalid("[geometry]\noverprovision = 1.0\n");
  EXPECT_NO_THROW(from_toml("[array]\nk_s = 0\n").validate());
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"sweep_write_intensive.toml", "sweep_ablation.toml"}) {
    SCOPED_TRACE(name);
    EXPECT_NO_THROW(load_matrix(kConfigDir + "/" + name));
  }
  const ExperimentConfig c = load_config(kConfigDir + "/example_run.toml");
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ReportConfigCanBeReloaded) {
  const ExperimentConfig c = toy::config();
  const auto r = run(c);
  const fs::path dir = fs::temp_directory_path() / "pswl_config_test";
  write_report(r, dir.string());
  const ExperimentConfig back = load_config((dir / "report.json").string());
  EXPECT_EQ(config_to_json(back).dump(), config_to_json(c).dump());
}

TEST(Sweep, MatrixExpandsAxes) {
  const auto doc = parse_toml(R"(
[array]
k_o = 3
[sweep]
policies = ["pswl", "swans"]
schemes = ["rr", "gsr", "sdm"]
scales = [[3, 1], [4, 2]]
seeds = [1, 2]
)");
  const auto m = parse_matrix(doc);
  EXPECT_EQ(m.cells.size(), 2u * 3 * 2 * 2);
  std::set<std::string> names;
  for (const auto& cell : m.cells) {
    EXPECT_TRUE(names.insert(cell.name).second) << cell.name;
    EXPECT_NO_THROW(cell.config.validate()) << cell.name;
    if (cell.config.scheme == ScalingScheme::GSR) EXPECT_EQ(cell.config.raid_level, RaidLevel::Raid5);
    if (cell.config.scheme == ScalingScheme::SDM) EXPECT_EQ(cell.config.raid_level, RaidLevel::Raid6);
  }
}

TEST(Sweep, ParallelRunMatchesSerial) {
  auto doc = config_to_json(toy::config());
  doc["sweep"] = {{"policies", {"pswl", "edm"}}, {"schemes", {"rr", "fastscale"}}};
  const auto m = parse_matrix(doc);
  const auto serial = run_sweep(m, 1, "");
  const auto parallel = run_sweep(m, 3, "");
  ASSERT_EQ(serial.size(), 4u);
  EXPECT_EQ(summary_csv(serial), summary_csv(parallel));
  for (size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].status, "ok");
    EXPECT_EQ(report_to_json(serial[i].report).dump(), report_to_json(parallel[i].report).dump());
  }
}
