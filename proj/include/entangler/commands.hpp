// commands.hpp: the four CLI subcommands as functions returning tables.
#pragma once

#include "entangler/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace entangler {

// Bumped whenever a command's column set changes.
inline constexpr int kCsvSchema = 1;

struct CsvTable {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> warnings;  // for stderr, not part of the CSV
};

// One row per sweep point: dispersive shifts, planned tones, chi_a / chi_b.
CsvTable cmd_shifts(const ConfigFile& config);
// One protocol run on the base settings; sweep axes are ignored.
CsvTable cmd_simulate(const ConfigFile& config);
// One protocol run per sweep point, rows in index order.
CsvTable cmd_sweep(const ConfigFile& config);
// Without sweep axes: the collision report. With axes: one closed-form row
// per point (chi_a / chi_b, F, collision count).
CsvTable cmd_collisions(const ConfigFile& config);

CsvTable run_command(const std::string& command, const ConfigFile& config);

// '#' header (tool version, command, schema, config hash), column row, data.
void write_csv(std::ostream& out, const CsvTable& table, const ConfigFile& config);

std::string format_double(double v);

}  // namespace entangler
