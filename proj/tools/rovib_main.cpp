// Command-line front end: one subcommand per experiment, each driven by a
// built-in preset or a JSON config file. Exit codes: 0 success, 2 config
// error, 3 runtime/singularity error.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "rovib/errors.hpp"
#include "rovib/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_file;
  std::string preset;
  std::string out_dir;
  bool seedless = false;  // documents that nothing here draws random numbers
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "JSON config file");
  cmd->add_option("--preset", args.preset, "built-in preset name");
  cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
  cmd->add_flag("--seedless", args.seedless,
                "no-op; all runs are deterministic and use no random numbers");
}

int execute(const std::string& experiment, const CommonArgs& args) {
  try {
    rovib::experiments::RunConfig config;
    if (!args.preset.empty() && !args.config_file.empty())
      throw rovib::ConfigError("give either --preset or --config, not both");
    if (!args.preset.empty()) {
      config = rovib::experiments::preset_config(args.preset);
    } else if (!args.config_file.empty()) {
      config = rovib::experiments::config_from_json_file(args.config_file);
    } else {
      throw rovib::ConfigError("one of --preset or --config is required");
    }
    if (rovib::experiments::experiment_name(config.settings) != experiment)
      throw rovib::ConfigError("configuration is for experiment \"" +
                               rovib::experiments::experiment_name(config.settings) +
                               "\", not \"" + experiment + "\"");
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;

    const auto manifest = rovib::experiments::run(config);
    std::printf("%s: completed in %.3f s, %zu output file(s) in %s\n",
                manifest.experiment.c_str(), manifest.wall_clock_seconds,
                manifest.outputs.size(), config.output_dir.string().c_str());
    for (const auto& warning : manifest.warnings)
      std::printf("  warning: %s\n", warning.c_str());
    return 0;
  } catch (const rovib::ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "runtime error: %s\n", err.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum dynamics of a driven diatomic molecule"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rovib::experiments::code_version());

  const char* experiments[] = {"classical-poincare", "classical-critical", "chaos-scan",
                               "quantum-evolve",     "quantum-observables", "two-level-oracle"};
  const char* blurbs[] = {
      "surface-of-section maps of the rotating-frame flow",
      "fixed points of the flow on the section",
      "largest-Lyapunov scan over drive strengths",
      "truncated-basis coefficient evolution",
      "expectation-value time series and phase portraits",
      "resonant pair against the closed-form two-level solution",
  };

  CommonArgs args[std::size(experiments)];
  for (std::size_t i = 0; i < std::size(experiments); ++i)
    add_common(app.add_subcommand(experiments[i], blurbs[i]), args[i]);

  CLI::App* list = app.add_subcommand("list-presets", "print the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& preset : rovib::experiments::list_presets())
      std::printf("%-20s %-20s %s\n", preset.name.c_str(), preset.experiment.c_str(),
                  preset.description.c_str());
    return 0;
  }

  for (std::size_t i = 0; i < std::size(experiments); ++i)
    if (app.get_subcommand(experiments[i])->parsed()) return execute(experiments[i], args[i]);
  return 2;
}
