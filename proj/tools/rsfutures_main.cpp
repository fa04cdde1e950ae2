#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rsfutures/cli.hpp"
#include "rsfutures/csv.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Regime-switching futures: pricing, optimal positions, "
               "certainty equivalents, path simulation"};
  app.set_version_flag("--version", std::string(rsf::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool batch = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (JSON)")
        ->required();
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option("--seed", seed, "root seed override");
    return cmd;
  };

  add_common(app.add_subcommand("price", "futures curves and surfaces"));
  add_common(app.add_subcommand("ce", "certainty equivalents over horizons"));
  add_common(app.add_subcommand("phi", "value-function time component"));
  add_common(app.add_subcommand("strategy", "optimal positions over time"));
  CLI::App* simulate =
      add_common(app.add_subcommand("simulate", "spot/futures/wealth paths"));
  simulate->add_flag("--batch", batch,
                     "one long-format file instead of one file per path");

  CLI11_PARSE(app, argc, argv);
  return rsf::run_command(app.get_subcommands().front()->get_name(),
                          config_path, out_dir, seed, batch);
}
