// Command-line front end: bounds | spectrum | localization | control |
// cost-scan | example5, configured through JSON files or presets.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "vvc/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for boundary control of 1D advection-diffusion "
               "in the vanishing-viscosity limit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset, eps_csv;
  const std::vector<std::string> commands = {"bounds",  "spectrum",  "localization",
                                             "control", "cost-scan", "example5"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--preset", preset, "named preset (example5-minus, example5-plus, ...)");
    sub->add_option("--eps", eps_csv, "comma-separated viscosity list");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  vvc::RunConfig cfg;
  try {
    if (!preset.empty()) cfg = vvc::preset_config(preset);
    if (!config_path.empty()) {
      vvc::RunConfig file_cfg = vvc::parse_config_file(config_path);
      if (!preset.empty()) {
        file_cfg.preset = cfg.preset;  // config file overrides the preset body
      }
      cfg = file_cfg;
    }
    if (preset.empty() && config_path.empty()) cfg = vvc::preset_config("example5-minus");
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!eps_csv.empty()) {
      cfg.eps.clear();
      std::size_t pos = 0;
      while (pos < eps_csv.size()) {
        std::size_t next = eps_csv.find(',', pos);
        if (next == std::string::npos) next = eps_csv.size();
        cfg.eps.push_back(std::stod(eps_csv.substr(pos, next - pos)));
        pos = next + 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return vvc::kExitConfig;
  }

  return vvc::run_command(cmd, cfg);
}
