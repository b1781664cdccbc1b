#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"
#include "widom/version.hpp"

int main(int argc, char** argv) {
  namespace cli = widom::cli;
  CLI::App app{"Widom factors, equilibrium measures and Chebyshev polynomials of planar sets"};
  std::string config_path, out_dir, task;
  bool quiet = false;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory, overrides output.dir");
  app.add_option("--task", task, "task override: capacity, green, levin, cheb, series, verify-theorems, diagnostics");
  app.add_flag("--quiet", quiet, "suppress progress output");
  app.set_version_flag("--version", std::string(widom::kToolkitName) + " " + widom::kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitInvalid;
  }

  try {
    auto cfg = cli::load_config(config_path, task.empty() ? std::nullopt : std::optional<std::string>(task));
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return cli::run(cfg, std::cerr, quiet).exit_code;
  } catch (const widom::ValidationError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return cli::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return cli::kExitInvalid;
  }
}
