// Command-line front end: runs the recession-forecasting pipeline grid from
// a single JSON configuration. Exit codes: 0 ok, 1 config error, 2 runtime
// error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "atrisk/config.hpp"
#include "atrisk/errors.hpp"
#include "atrisk/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int cmd_run(const std::string& config_path) {
  const atrisk::RunConfig config = atrisk::load_config(config_path);
  atrisk::run_experiment(config, std::cout);
  return kExitOk;
}

int cmd_validate(const std::string& config_path) {
  const atrisk::RunConfig config = atrisk::load_config(config_path);
  atrisk::validate_config(config);
  if (!std::ifstream(config.data_path)) {
    std::cout << "note: data file not readable yet: " << config.data_path << "\n";
  }
  std::cout << "config ok (hash " << atrisk::config_hash(config) << ")\n";
  return kExitOk;
}

int cmd_subsets(const std::string& config_path) {
  const atrisk::RunConfig config = atrisk::load_config(config_path);
  atrisk::Diagnostics diag;
  const auto subsets = atrisk::list_subsets(config, &diag);

  // Validate user-defined sets against the panel when the data file loads.
  if (std::ifstream(config.data_path)) {
    const atrisk::PanelMatrix panel = atrisk::load_panel(config, &diag);
    for (const auto& [name, ids] : config.user_subsets) {
      for (const auto& raw : subsets.at(name)) {
        if (!panel.column_of(raw)) {
          std::string known;
          for (const auto& m : panel.meta) {
            if (!known.empty()) known += ", ";
            known += m.id;
          }
          throw atrisk::ConfigError("subset " + name + ": unknown series id '" + raw +
                                    "'; resolvable ids: " + known);
        }
      }
    }
  }
  for (const auto& [name, ids] : subsets) {
    std::cout << name << " (" << ids.size() << "):";
    for (const auto& id : ids) std::cout << ' ' << id;
    std::cout << "\n";
  }
  for (const auto& w : diag.warnings) std::cout << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_dump_panel(const std::string& config_path, const std::string& out_path) {
  const atrisk::RunConfig config = atrisk::load_config(config_path);
  atrisk::Diagnostics diag;
  const atrisk::PanelMatrix panel = atrisk::load_panel(config, &diag);
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << "\n";
  if (out_path.empty()) {
    atrisk::write_csv(panel, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw atrisk::Error("cannot write " + out_path);
    atrisk::write_csv(panel, out);
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recession forecasting with binarized (at-risk) predictors"};
  app.require_subcommand(1);

  std::string config_path;
  std::string dump_out;

  auto* run = app.add_subcommand("run", "Execute the configured pipeline grid");
  run->add_option("config", config_path, "JSON run configuration")->required();

  auto* validate = app.add_subcommand("validate", "Check a configuration without running");
  validate->add_option("config", config_path, "JSON run configuration")->required();

  auto* subsets = app.add_subcommand("subsets", "List built-in and user variable subsets");
  subsets->add_option("config", config_path, "JSON run configuration")->required();

  auto* dump = app.add_subcommand("dump-panel", "Write the aligned panel as CSV");
  dump->add_option("config", config_path, "JSON run configuration")->required();
  dump->add_option("-o,--out", dump_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (validate->parsed()) return cmd_validate(config_path);
    if (subsets->parsed()) return cmd_subsets(config_path);
    if (dump->parsed()) return cmd_dump_panel(config_path, dump_out);
  } catch (const atrisk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
