#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "run_config.hpp"
#include "tpp/errors.hpp"

namespace {

struct Invocation {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::int64_t> seed;
  bool dump = false;
  tpp::cli::RunOptions options;
};

CLI::App* add_command(CLI::App& app, tpp::cli::Command cmd, const std::string& help,
                      Invocation& inv) {
  auto* sub = app.add_subcommand(std::string(tpp::cli::to_string(cmd)), help);
  sub->add_option("-c,--config", inv.config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  sub->add_option("--set", inv.sets, "override a config key (key=value), repeatable");
  sub->add_option("--seed", inv.seed, "base seed (overrides the seed key)");
  sub->add_option("--seeds", inv.options.seeds, "number of replicas")
      ->check(CLI::PositiveNumber);
  sub->add_option("-j,--threads", inv.options.threads, "replicas run concurrently")
      ->check(CLI::PositiveNumber);
  sub->add_option("-o,--out", inv.options.out_dir, "directory for per-run CSV files");
  sub->add_flag("--dump-config", inv.dump, "print the resolved config and exit");
  if (cmd == tpp::cli::Command::kAnalyze) {
    sub->add_option("--sweep", inv.options.sweep, "key=lo:hi:step table over one key");
  }
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  using tpp::cli::Command;
  CLI::App app{"tpp-sim: alert propagation analytics and simulation"};
  app.require_subcommand(1);
  Invocation inv;
  const std::pair<Command, const char*> commands[] = {
      {Command::kAnalyze, "analytic bounds and loads"},
      {Command::kSimulate, "protocol simulation"},
      {Command::kAttack, "framing attack simulation"},
      {Command::kMute, "muting attack simulation"},
      {Command::kEpidemic, "SIR epidemic with and without the protocol"},
      {Command::kCoverage, "random-walk coverage experiment"},
      {Command::kSweep, "vaccination time over the lambda split"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, help] : commands) subs.emplace_back(cmd, add_command(app, cmd, help, inv));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    Command cmd = Command::kAnalyze;
    for (const auto& [c, sub] : subs) {
      if (sub->parsed()) cmd = c;
    }
    tpp::cli::RunConfig config;
    if (!inv.config_path.empty()) {
      std::ifstream in(inv.config_path);
      config = tpp::cli::RunConfig::parse(in);
    }
    for (const auto& s : inv.sets) config.set(s);
    if (inv.seed) config.set("seed", std::to_string(*inv.seed));

    if (inv.dump) {
      config.require_all();
      config.dump(std::cout);
      return 0;
    }
    tpp::cli::run_command(cmd, config, inv.options, std::cout);
  } catch (const tpp::ParseError& e) {
    std::cerr << "tpp-sim: " << inv.config_path << ": " << e.what() << '\n';
    return 2;
  } catch (const tpp::Error& e) {
    std::cerr << "tpp-sim: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tpp-sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
