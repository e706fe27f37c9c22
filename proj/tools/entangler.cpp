#include "entangler/commands.hpp"
#include "entangler/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct Invocation {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::string trajectory;
  bool timing = false;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--config,-c", inv.config_path, "scenario file (INI)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--set,-s", inv.overrides, "override section.key=value (repeatable)");
  cmd->add_option("--out,-o", inv.out, "CSV output path (default stdout)");
  cmd->add_flag("--timing", inv.timing, "append wall-clock seconds per row");
}

int run(const std::string& command, const Invocation& inv) {
  using namespace entangler;
  ConfigFile config = load_config(inv.config_path);
  for (const auto& o : inv.overrides) apply_override(config, o);
  if (!inv.out.empty()) config.output.path = inv.out;
  if (!inv.trajectory.empty()) config.output.trajectory = inv.trajectory;
  if (inv.timing) config.output.timing = true;

  const CsvTable table = run_command(command, config);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  if (config.output.path.empty()) {
    write_csv(std::cout, table, config);
  } else {
    std::ofstream file(config.output.path);
    if (!file) throw InvalidArgument("cannot open output '" + config.output.path + "'");
    write_csv(file, table, config);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fock-state entanglement protocol simulator"};
  app.set_version_flag("--version", ENTANGLER_VERSION);
  app.require_subcommand(1);
  Invocation inv;
  auto* shifts = app.add_subcommand("shifts", "dispersive shifts and planned tone frequencies");
  auto* simulate = app.add_subcommand("simulate", "one protocol run");
  auto* sweep = app.add_subcommand("sweep", "protocol runs over the [sweep] axes");
  auto* collisions = app.add_subcommand("collisions", "collision report, or closed-form scan over the axes");
  for (auto* cmd : {shifts, simulate, sweep, collisions}) add_common(cmd, inv);
  simulate->add_option("--trajectory", inv.trajectory, "CSV of level populations every monitor_every steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, inv);
  } catch (const entangler::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const entangler::NumericalError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
