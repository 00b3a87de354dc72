#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitThreshold = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pamlab: numerical laboratory for the multiplicative stochastic heat equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string ensemble_dir;
  std::uint64_t selftest_seed = 424243;
  bool quick = false;

  auto add_config_opts = [&](CLI::App* cmd, bool required) {
    cmd->add_option("-c,--config", config_path, "JSON config file")->required(required);
    cmd->add_option("--set", overrides,
                    "dotted-path override, e.g. --set grid.N=1024 (repeatable)");
  };

  CLI::App* selftest = app.add_subcommand("selftest", "run the module oracle battery");
  selftest->add_option("--seed", selftest_seed, "master seed for the oracle battery");
  selftest->add_flag("--quick", quick, "reduced sample counts");
  selftest->add_option("-o,--output-dir", ensemble_dir, "directory for selftest.csv");

  CLI::App* chaos = app.add_subcommand("chaos", "tabulate chaos variances vs bounds");
  add_config_opts(chaos, true);

  CLI::App* simulate = app.add_subcommand("simulate", "run a solver ensemble");
  add_config_opts(simulate, true);

  CLI::App* holder = app.add_subcommand("holder", "increment moments and exponent fits");
  add_config_opts(holder, true);

  CLI::App* bounds = app.add_subcommand("bounds", "tabulate bound formulas over grids");
  add_config_opts(bounds, true);

  CLI::App* report = app.add_subcommand("report", "summarize artifacts in an output dir");
  report->add_option("-d,--dir", ensemble_dir, "artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      const std::vector<pamlab::CheckRow> rows = pamlab::run_selftest(selftest_seed, quick);
      pamlab::print_selftest(rows, std::cout);
      if (!ensemble_dir.empty())
        pam::write_text_file(ensemble_dir + "/selftest.csv", pamlab::selftest_csv(rows));
      for (const pamlab::CheckRow& r : rows)
        if (!r.pass) return kExitThreshold;
      return kExitOk;
    }
    if (report->parsed()) return pamlab::cmd_report(ensemble_dir);

    const std::string command = chaos->parsed()     ? "chaos"
                                : simulate->parsed() ? "simulate"
                                : holder->parsed()   ? "holder"
                                                     : "bounds";
    pam::Config config = pam::Config::from_file(config_path, overrides);
    const std::vector<std::string> errors = config.validate(command);
    if (!errors.empty()) {
      std::cerr << "config validation failed:\n";
      for (const std::string& e : errors) std::cerr << "  - " << e << '\n';
      return kExitConfig;
    }
    if (chaos->parsed()) return pamlab::cmd_chaos(config);
    if (simulate->parsed()) return pamlab::cmd_simulate(config);
    if (holder->parsed()) return pamlab::cmd_holder(config);
    return pamlab::cmd_bounds(config);
  } catch (const pam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
