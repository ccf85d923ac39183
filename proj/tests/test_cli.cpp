#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"
#include "tpp/errors.hpp"

using namespace tpp;
using namespace tpp::cli;

namespace {

RunConfig load(const std::string& name) {
  std::ifstream in(std::string(TPP_CONFIG_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  return RunConfig::parse(in);
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  const std::string prefix = key + " = ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return {};
}

int parse_error_line(std::string_view text) {
  try {
    RunConfig::parse_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(RunConfig, ParsesCommentsAndFractions) {
  const auto c = RunConfig::parse_string("# header\nn = 1000\n\nlambda_M = 1/168  # weekly\nrho=3\n");
  EXPECT_EQ(c.get_int("n"), 1000);
  EXPECT_DOUBLE_EQ(c.get_double("lambda_M"), 1.0 / 168);
  EXPECT_EQ(c.get_int("rho"), 3);
  EXPECT_EQ(c.raw("overlay"), "uniform");
}

TEST(RunConfig, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("n = 1\nbogus = 2\n"), 2);
  EXPECT_EQ(parse_error_line("n = 1\n# c\nn = 2\n"), 3);
  EXPECT_EQ(parse_error_line("rho 1\n"), 1);
  EXPECT_EQ(parse_error_line("n = 1\nrho =\n"), 2);
}

TEST(RunConfig, MissingRequiredKey) {
  const auto c = RunConfig::parse_string("n = 1000\nN = 100\np_N = 0.01\np_max = 0.01\nT = 168\n");
  try {
    c.require_all();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "missing key: rho");
  }
}

TEST(RunConfig, OverridesAndUnknownKeys) {
  auto c = load("main_run.conf");
  c.set("rho=4");
  EXPECT_EQ(c.get_int("rho"), 4);
  c.set("seed", "9");
  EXPECT_EQ(c.get_int("seed"), 9);
  EXPECT_THROW(c.set("nonsense=1"), ConfigError);
  EXPECT_THROW(c.set("rho"), ConfigError);
  c.set("max_steps=2e6");
  EXPECT_EQ(c.get_int("max_steps"), 2'000'000);
  c.set("rho=two");
  EXPECT_THROW(c.get_int("rho"), ConfigError);
}

TEST(RunConfig, DumpRoundTrips) {
  for (const char* name : {"main_run.conf", "attack.conf", "mute.conf", "epidemic.conf",
                           "million_devices.conf", "call_network_94.conf", "coverage.conf",
                           "lambda_sweep.conf"}) {
    const auto c = load(name);
    std::ostringstream first;
    c.dump(first);
    const auto again = RunConfig::parse_string(first.str());
    std::ostringstream second;
    again.dump(second);
    EXPECT_EQ(first.str(), second.str()) << name;
  }
}

TEST(RunConfig, TimeoutResolution) {
  auto c = load("main_run.conf");
  EXPECT_EQ(protocol_params(c).timeout, 30);
  c.set("timeout=solve");
  EXPECT_EQ(protocol_params(c).timeout, 3163);
  c.set("timeout=closed");
  EXPECT_EQ(protocol_params(c).timeout, 3156);
  c.set("timeout=17");
  EXPECT_EQ(protocol_params(c).timeout, 17);
}

TEST(RunConfig, SimConfigRoles) {
  auto c = load("attack.conf");
  const auto sc = sim_config(c, Command::kAttack, 3);
  EXPECT_EQ(sc.adversary.kind, AttackKind::kFraming);
  EXPECT_EQ(sc.adversary.k, 100);
  EXPECT_EQ(sc.adversary.target_app, 1);
  EXPECT_EQ(sc.seed, 3u);
  EXPECT_EQ(sc.malicious_app_ids, std::vector<AppId>{0});

  const auto mc = sim_config(load("mute.conf"), Command::kMute, 1);
  EXPECT_EQ(mc.adversary.kind, AttackKind::kMuting);
  EXPECT_DOUBLE_EQ(mc.adversary.p_mute, 0.1);

  EXPECT_THROW(sim_config(c, Command::kSimulate, 1), ConfigError);

  c = load("epidemic.conf");
  c.set("overlay=uniform");
  EXPECT_THROW(epidemic_config(c, 1), ConfigError);
}

TEST(Sweep, ParsesAndSnapsGrid) {
  const auto s = parse_sweep("p_max=0.02:0.1:0.01");
  EXPECT_EQ(s.key, "p_max");
  const auto v = s.values();
  ASSERT_EQ(v.size(), 9u);
  EXPECT_EQ(v[7], 0.09);
  EXPECT_EQ(v.back(), 0.1);
  EXPECT_THROW(parse_sweep("p_max=0.1:0.02:0.01"), ConfigError);
  EXPECT_THROW(parse_sweep("p_max=0.1:0.2"), ConfigError);
  EXPECT_THROW(parse_sweep("0.1:0.2:0.1"), ConfigError);
}

TEST(Quantile, Interpolates) {
  EXPECT_DOUBLE_EQ(quantile({3, 1, 2}, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.0), 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(quantile({inf, 1, 2}, 0.5), 2.0);
  EXPECT_EQ(quantile({inf, inf, 1}, 0.5), inf);
}

TEST(Commands, AnalyzeMillionDevices) {
  std::ostringstream out;
  run_command(Command::kAnalyze, load("million_devices.conf"), {}, out);
  EXPECT_NEAR(std::stod(value_of(out.str(), "max_load_lambda_a")), 35.51163, 0.04);
  EXPECT_GT(std::stod(value_of(out.str(), "benefit_factor")), 5000);
}

TEST(Commands, AnalyzeSweepTable) {
  RunOptions opt;
  opt.sweep = "p_max=0.02:0.1:0.02";
  std::ostringstream out;
  run_command(Command::kAnalyze, load("call_network_94.conf"), opt, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# tpp-sim csv v1");
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("p_max,", 0), 0u);
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Commands, SimulateWritesCsvAndSummary) {
  auto c = load("main_run.conf");
  c.set("n=200");
  c.set("N=20");
  c.set("p_N=0.05");
  c.set("p_max=0.05");
  c.set("T=24");
  c.set("downloads=8");
  const auto dir = std::filesystem::temp_directory_path() / "tpp_cli_test";
  std::filesystem::remove_all(dir);
  RunOptions opt;
  opt.seeds = 3;
  opt.threads = 2;
  opt.out_dir = dir.string();
  std::ostringstream out;
  run_command(Command::kSimulate, c, opt, out);
  EXPECT_EQ(value_of(out.str(), "runs"), "3");
  for (int s = 1; s <= 3; ++s) {
    EXPECT_TRUE(std::filesystem::exists(dir / ("simulate_seed" + std::to_string(s) + ".csv")));
  }
  // same summary with one thread
  opt.threads = 1;
  opt.out_dir.reset();
  std::ostringstream serial;
  run_command(Command::kSimulate, c, opt, serial);
  EXPECT_EQ(out.str(), serial.str());
  std::filesystem::remove_all(dir);
}

TEST(Commands, LambdaSweepArgmin) {
  std::ostringstream out;
  run_command(Command::kSweep, load("lambda_sweep.conf"), {}, out);
  EXPECT_NEAR(std::stod(value_of(out.str(), "lambda_argmin")), 0.5, 0.01);
}

TEST(Commands, MissingKeyIsReported) {
  const auto c = RunConfig::parse_string("n = 1000\n");
  std::ostringstream out;
  EXPECT_THROW(run_command(Command::kAnalyze, c, {}, out), ConfigError);
}
