#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtomo/config.hpp"
#include "qtomo/data_io.hpp"
#include "qtomo/error.hpp"
#include "qtomo/experiment.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

std::filesystem::path output_root(const std::string& cli_out, const qtomo::ExperimentConfig& c) {
  if (!cli_out.empty()) return cli_out;
  if (c.output_dir) return *c.output_dir;
  if (const char* env = std::getenv("QTOMO_OUTPUT_DIR"); env && *env) return env;
  return "qtomo-out";
}

void print_violations(const qtomo::ValidationError& e) {
  std::cerr << "invalid configuration:\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtomo: tomograms and entanglement indicators for Kerr, AP and Lambda models"};
  app.set_version_flag("--version", qtomo::version());
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a config file or a preset");
  std::string config_path, preset, out;
  auto* cfg_opt = run->add_option("config", config_path, "Config file")->check(CLI::ExistingFile);
  auto* preset_opt = run->add_option("--preset", preset, "Built-in preset name");
  cfg_opt->excludes(preset_opt);
  run->add_option("--out", out, "Output root (default: output.dir, $QTOMO_OUTPUT_DIR, qtomo-out)");

  auto* list = app.add_subcommand("list-presets", "List built-in presets");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  std::string validate_path;
  validate->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*list) {
      for (const auto& p : qtomo::presets()) std::cout << p.name << "\t" << p.summary << "\n";
      return 0;
    }
    if (*validate) {
      const auto c = qtomo::parse_config(qtomo::read_text(validate_path));
      std::cout << "ok: " << c.name << " (" << qtomo::to_string(c.model) << ", "
                << c.time.resolve().size() << " times)\n";
      return 0;
    }
    if (config_path.empty() && preset.empty()) {
      std::cerr << "run: give a config file or --preset NAME\n";
      return kExitValidation;
    }
    std::string text;
    if (preset.empty()) {
      text = qtomo::read_text(config_path);
    } else {
      try {
        text = qtomo::find_preset(preset).text;
      } catch (const qtomo::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
      }
    }
    const auto config = qtomo::parse_config(text);
    const auto bundle = qtomo::run(config, output_root(out, config));
    std::cout << bundle.manifest.string() << "\n";
    for (const auto& f : bundle.files) std::cout << f.string() << "\n";
    return 0;
  } catch (const qtomo::ValidationError& e) {
    print_violations(e);
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
