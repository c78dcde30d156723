// Command-line front end: parse a config file, dispatch the requested mode,
// and report through exit codes (0 ok, 2 configuration error, 3 numeric or
// invariant failure).

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavepacket/config.hpp"
#include "wavepacket/csv.hpp"
#include "wavepacket/errors.hpp"
#include "wavepacket/recipes.hpp"
#include "wavepacket/runner.hpp"
#include "wavepacket/version.hpp"

namespace {

struct ModeArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

int run_mode(const std::string& mode_name, const ModeArgs& args) {
  const std::string text = wavepacket::read_file(args.config_path);

  wavepacket::RunConfig cfg;
  try {
    cfg = wavepacket::parse_config(text, args.overrides);
  } catch (const wavepacket::ConfigError& e) {
    if (std::string(e.what()).find("missing mode") == std::string::npos) throw;
    // file omits the mode; the subcommand supplies it
    std::vector<std::string> with_mode = args.overrides;
    with_mode.push_back("mode=" + mode_name);
    cfg = wavepacket::parse_config(text, with_mode);
  }
  if (std::string(wavepacket::to_string(cfg.mode)) != mode_name)
    throw wavepacket::ConfigError("config: file requests mode " +
                                  std::string(wavepacket::to_string(cfg.mode)) +
                                  " but the " + mode_name +
                                  " subcommand was invoked");
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;

  const wavepacket::ExecutionReport rep = wavepacket::execute(cfg);
  std::printf("completed %s -> %s (%.1f s", mode_name.c_str(),
              rep.dir.c_str(), rep.wall_seconds);
  if (!rep.sub_runs.empty())
    std::printf(", %zu sub-runs", rep.sub_runs.size());
  std::printf(")\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-packet scattering runs, reference comparisons, and "
               "post-processing"};
  app.set_version_flag("--version", std::string(wavepacket::version_string));
  app.require_subcommand(1);

  const std::vector<std::string> modes = {"run1d", "run2d", "oracle",
                                          "analyze", "compare"};
  const std::vector<std::string> blurbs = {
      "evolve a packet against a well on a 1D grid",
      "evolve a packet against a well via angular harmonics",
      "evaluate the semi-analytic square-well reference solution",
      "post-process an existing run directory (peaks, fits)",
      "run the 1D simulation and difference it against the reference"};

  std::vector<ModeArgs> mode_args(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    CLI::App* sub = app.add_subcommand(modes[i], blurbs[i]);
    sub->add_option("--config", mode_args[i].config_path,
                    "key=value configuration file")
        ->required();
    sub->add_option("--out", mode_args[i].out_dir,
                    "output directory (defaults to the config's output.dir)");
    sub->add_option("--override", mode_args[i].overrides,
                    "section.key=value, applied after the file");
  }

  std::string recipes_dir = "recipes";
  CLI::App* recipes =
      app.add_subcommand("recipes", "write one ready-to-run config per "
                                    "catalogued figure");
  recipes->add_option("--out", recipes_dir, "directory for the recipe files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // fold CLI11's usage errors into config errors
  }

  try {
    if (recipes->parsed()) {
      const std::vector<std::string> names =
          wavepacket::emit_figure_recipes(recipes_dir);
      std::printf("wrote %zu recipes to %s\n", names.size(),
                  recipes_dir.c_str());
      return 0;
    }
    for (std::size_t i = 0; i < modes.size(); ++i)
      if (app.get_subcommand(modes[i])->parsed())
        return run_mode(modes[i], mode_args[i]);
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const wavepacket::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const wavepacket::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
