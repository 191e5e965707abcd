// gravgas — scenario runner for exact self-gravitating gas evolutions.
//
//   gravgas run <config>            run the mode named in the config
//   gravgas collapse-time <config>  force collapse-time mode
//   gravgas perturbation <config>   force perturbation mode
//
// Exit status: 0 success, 1 config error, 2 collapse/crossing detected
// before a requested output time (the event time is in summary.txt).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gravgas/gravgas.hpp"

namespace {

int run_with_config(const std::string& path, std::optional<gravgas::RunMode> forced_mode) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "gravgas: cannot open config file '" << path << "'\n";
    return gravgas::kExitConfigError;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  try {
    gravgas::ScenarioConfig cfg = gravgas::parse_config(buf.str());
    if (forced_mode) cfg.mode = *forced_mode;
    gravgas::ScenarioRunner runner(std::move(cfg));
    const int code = runner.run();
    std::cout << runner.summary();
    return code;
  } catch (const gravgas::ConfigError& e) {
    std::cerr << "gravgas: config error: " << e.what() << "\n";
    return gravgas::kExitConfigError;
  } catch (const gravgas::Error& e) {
    std::cerr << "gravgas: " << e.what() << "\n";
    return gravgas::kExitConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact evolutions of self-gravitating pressureless gas"};
  app.require_subcommand(1);

  std::string run_config, ct_config, pert_config;
  CLI::App* run_cmd = app.add_subcommand("run", "run the scenario described by a config file");
  run_cmd->add_option("config", run_config, "config file path")->required();
  CLI::App* ct_cmd = app.add_subcommand("collapse-time", "report the collapse time only");
  ct_cmd->add_option("config", ct_config, "config file path")->required();
  CLI::App* pert_cmd = app.add_subcommand("perturbation", "run the linear-perturbation probe");
  pert_cmd->add_option("config", pert_config, "config file path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) return run_with_config(run_config, std::nullopt);
  if (ct_cmd->parsed()) return run_with_config(ct_config, gravgas::RunMode::CollapseTime);
  return run_with_config(pert_config, gravgas::RunMode::Perturbation);
}
