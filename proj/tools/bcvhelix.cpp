#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "bcvhelix/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Helicoidal surfaces in BCV spaces: charts, CMC families, verification and mesh export"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool quiet = false;
  for (const char* name : {"classify", "chart", "cmc", "minimal", "deform", "verify", "export"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON job description")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--override", overrides, "key.path=value, applied to the config before validation");
    sub->add_flag("--quiet", quiet, "do not print the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bcvapp::kBadConfig;
  }
  const auto cmd = bcvapp::parse_command(app.get_subcommands().front()->get_name());

  try {
    const auto cfg = bcvapp::load_config(config_path, overrides);
    const auto res = bcvapp::run(*cmd, cfg, out_dir);
    if (!quiet) std::cout << res.report.dump(2) << "\n";
    for (const auto& c : res.report["checks"]) {
      if (!c["passed"].get<bool>()) std::cerr << "check failed: " << c["name"].get<std::string>() << "\n";
    }
    return res.passed ? bcvapp::kPassed : bcvapp::kChecksFailed;
  } catch (const bcvapp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return bcvapp::kBadConfig;
  } catch (const bcv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bcvapp::kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bcvapp::kRuntimeError;
  }
}
