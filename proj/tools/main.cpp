#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kahan/config.hpp"
#include "kahan/run.hpp"

namespace {

int execute(kahan::Command cmd, const std::string& config_path, const std::string& preset, const std::string& out) {
  try {
    kahan::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = kahan::load_config(config_path);
    } else if (!preset.empty()) {
      cfg = kahan::preset_config(preset);
    } else {
      std::cerr << "error: give --config <path> or --preset <name>\n";
      return kahan::kExitConfig;
    }
    const auto artifacts = kahan::run(cmd, cfg, out);
    std::cout << artifacts.text;
    for (const auto& f : artifacts.files) std::cerr << "wrote " << f.string() << "\n";
    return kahan::kExitOk;
  } catch (const kahan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kahan::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kahan::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetrized Kahan discretizations of polynomial ODEs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out = ".";
  std::optional<kahan::Command> chosen;

  for (const char* name : {"discretize", "orbit", "darboux", "analyze-beam", "report"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " step");
    auto* cfg_opt = sub->add_option("--config", config_path, "run configuration file");
    sub->add_option("--preset", preset, "named case: lv, quartic, weierstrass, beam-sym, beam-lag")
        ->excludes(cfg_opt);
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->callback([name, &chosen] { chosen = kahan::parse_command(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kahan::kExitConfig;
  }
  return execute(*chosen, config_path, preset, out);
}
