#include "entangler/commands.hpp"

#include "entangler/error.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>

#ifndef ENTANGLER_VERSION
#define ENTANGLER_VERSION "dev"
#endif

namespace entangler {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(int v) { return std::to_string(v); }

using Row = std::vector<std::string>;

// Runs f(point_index, settings) over every sweep point; rows come back in
// index order whatever the scheduling. The first failure (lowest index) wins.
template <class F>
std::vector<Row> for_each_point(const ConfigFile& config, F&& f) {
  const std::vector<Settings> points = sweep_points(config);
  const long n = static_cast<long>(points.size());
  std::vector<Row> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(dynamic, 1) if (n > 1)
  for (long i = 0; i < n; ++i) {
    try {
      rows[i] = f(i, points[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (long i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("sweep point " + std::to_string(i) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("sweep point " + std::to_string(i) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<std::string> target_columns() { return {"N", "n1", "m1", "n2", "m2", "alpha", "beta"}; }

void append_target(Row& row, const ScenarioConfig& c) {
  const auto& t = c.target;
  row.push_back(c.noon ? fmt(t.n_1) : "");
  for (int v : {t.n_1, t.m_1, t.n_2, t.m_2}) row.push_back(fmt(v));
  row.push_back(fmt(t.alpha));
  row.push_back(fmt(t.beta));
}

const std::vector<std::string>& simulate_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"point", "scenario", "qutrit"};
    for (auto& s : target_columns()) c.push_back(s);
    for (const char* s : {"omega_e", "n_max_a", "n_max_b", "Omega", "gamma", "kappa_a", "kappa_b", "g_ab", "epsilon",
                          "epsilon_prime", "theta_1", "theta_2", "engine", "P", "F"}) {
      c.push_back(s);
    }
    return c;
  }();
  return cols;
}

Row simulate_row(long point, const ScenarioConfig& c, const ProtocolOutcome& r) {
  Row row = {fmt(static_cast<int>(point)), c.id, std::string(to_string(c.system.qutrit))};
  append_target(row, c);
  row.push_back(fmt(c.system.omega_e));
  row.push_back(fmt(c.system.truncation.n_max_a));
  row.push_back(fmt(c.system.truncation.n_max_b));
  for (double v : {c.drive.Omega, c.rates.gamma, c.rates.kappa_a_value(), c.rates.kappa_b_value(), c.system.g_ab,
                   c.drive.epsilon, c.drive.epsilon_prime, c.measurement.theta_1, c.measurement.theta_2}) {
    row.push_back(fmt(v));
  }
  row.push_back(r.engine);
  row.push_back(fmt(r.success_probability));
  row.push_back(fmt(r.fidelity));
  return row;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CsvTable protocol_table(const std::string& command, const ConfigFile& config) {
  CsvTable table;
  table.command = command;
  table.columns = simulate_columns();
  if (config.output.timing) table.columns.push_back("wall_time_s");
  table.rows = for_each_point(config, [&](long i, const Settings& s) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig c = resolve(s);
    const ProtocolOutcome r = run_protocol(c.system, c.target, c.drive, c.measurement, c.rates, c.options);
    Row row = simulate_row(i, c, r);
    if (config.output.timing) row.push_back(fmt(seconds_since(t0)));
    return row;
  });
  return table;
}

const char* kLevels = "gef";

// Base settings may be incomplete when an axis supplies a required key.
std::vector<std::string> first_point_warnings(const ConfigFile& config) {
  return dispersive_regime_warnings(resolve(sweep_points(config).front()).system);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

CsvTable cmd_shifts(const ConfigFile& config) {
  CsvTable table;
  table.command = "shifts";
  table.columns = {"point", "scenario", "qutrit", "omega_a", "omega_b", "omega_e", "omega_f", "g_a", "g_b",
                   "chi_a", "chi_a_prime", "chi_b", "chi_b_prime", "ratio", "omega_1", "omega_2"};
  // Full Delta table, mode then (k, j).
  for (const char* mode : {"a", "b"}) {
    for (int k = 0; k < kQutritDim; ++k) {
      for (int j = 0; j < kQutritDim; ++j) {
        if (k != j) table.columns.push_back(std::string("chi_") + mode + "_" + kLevels[k] + kLevels[j]);
      }
    }
  }
  table.rows = for_each_point(config, [&](long i, const Settings& s) {
    const ScenarioConfig c = resolve(s);
    const auto& p = c.system;
    const DispersiveShifts sh = dispersive_shifts(p);
    const auto [w1, w2] = planned_drive_frequencies(p, sh, c.target);
    Row row = {fmt(static_cast<int>(i)), c.id, std::string(to_string(p.qutrit))};
    for (double v : {p.omega_a, p.omega_b, p.omega_e, p.omega_f, p.g_a, p.g_b, sh.chi_a, sh.chi_a_prime, sh.chi_b,
                     sh.chi_b_prime, sh.chi_a / sh.chi_b, w1, w2}) {
      row.push_back(fmt(v));
    }
    for (int l = 0; l < 2; ++l) {
      for (int k = 0; k < kQutritDim; ++k) {
        for (int j = 0; j < kQutritDim; ++j) {
          if (k == j) continue;
          row.push_back(p.qutrit == QutritType::Delta ? fmt(sh.table[l][k][j]) : "");
        }
      }
    }
    return row;
  });
  table.warnings = first_point_warnings(config);
  return table;
}

CsvTable cmd_simulate(const ConfigFile& config) {
  ConfigFile single = config;
  CsvTable table;
  if (!single.sweep.empty()) {
    table.warnings.push_back("simulate ignores the [sweep] section; use 'sweep' to run it");
    single.sweep.clear();
  }
  const ScenarioConfig c = resolve(single.settings);
  std::ofstream traj;
  if (!config.output.trajectory.empty()) {
    traj.open(config.output.trajectory);
    if (!traj) throw InvalidArgument("cannot open trajectory file '" + config.output.trajectory + "'");
    traj << "# entangler " << ENTANGLER_VERSION << " trajectory config_hash=" << hash_hex(config_hash(config))
         << "\n"
         << "t,P_g,P_e,P_f,norm\n";
  }
  const auto t0 = std::chrono::steady_clock::now();
  ProtocolOptions options = c.options;
  if (traj.is_open()) {
    options.trajectory = [&traj](const TrajectoryPoint& p) {
      traj << format_double(p.t);
      for (double v : p.level_population) traj << ',' << format_double(v);
      traj << ',' << format_double(p.norm) << '\n';
    };
  }
  const ProtocolOutcome r = run_protocol(c.system, c.target, c.drive, c.measurement, c.rates, options);
  table.command = "simulate";
  table.columns = simulate_columns();
  Row row = simulate_row(0, c, r);
  if (config.output.timing) {
    table.columns.push_back("wall_time_s");
    row.push_back(fmt(seconds_since(t0)));
  }
  table.rows.push_back(std::move(row));
  for (auto& w : dispersive_regime_warnings(c.system)) table.warnings.push_back(w);
  return table;
}

CsvTable cmd_sweep(const ConfigFile& config) {
  CsvTable table = protocol_table("sweep", config);
  table.warnings = first_point_warnings(config);
  return table;
}

CsvTable cmd_collisions(const ConfigFile& config) {
  CsvTable table;
  table.command = "collisions";
  if (config.sweep.empty()) {
    const ScenarioConfig c = resolve(config.settings);
    const DispersiveShifts sh = dispersive_shifts(c.system);
    const CollisionReport report =
        collision_scan(c.system, sh, c.target, c.drive.Omega, c.collision_threshold);
    table.columns = {"tone", "transition", "n", "m", "lattice_n", "lattice_m", "detuning", "detuning_over_Omega",
                     "predicted_population", "initial_weight"};
    for (const auto& e : report) {
      table.rows.push_back({fmt(e.tone), e.transition, fmt(e.n), fmt(e.m), fmt(e.lattice_n), fmt(e.lattice_m),
                            fmt(e.detuning), fmt(e.detuning / c.drive.Omega), fmt(e.predicted_population),
                            fmt(e.initial_weight)});
    }
    table.warnings = dispersive_regime_warnings(c.system);
    return table;
  }
  table.columns = {"point", "scenario", "qutrit"};
  for (auto& s : target_columns()) table.columns.push_back(s);
  for (const char* s : {"omega_e", "ratio", "Omega", "weights", "F_closed_form", "collisions"}) {
    table.columns.push_back(s);
  }
  table.rows = for_each_point(config, [&](long i, const Settings& s) {
    const ScenarioConfig c = resolve(s);
    const DispersiveShifts sh = dispersive_shifts(c.system);
    const double f = closed_form_fidelity(c.system, sh, c.target, c.drive.Omega, c.drive.omega_1, c.drive.omega_2,
                                          c.weights);
    const auto report = collision_scan(c.system, sh, c.target, c.drive.Omega, c.collision_threshold);
    Row row = {fmt(static_cast<int>(i)), c.id, std::string(to_string(c.system.qutrit))};
    append_target(row, c);
    row.push_back(fmt(c.system.omega_e));
    row.push_back(fmt(sh.chi_a / sh.chi_b));
    row.push_back(fmt(c.drive.Omega));
    row.push_back(std::string(to_string(c.weights)));
    row.push_back(fmt(f));
    row.push_back(fmt(static_cast<int>(report.size())));
    return row;
  });
  return table;
}

CsvTable run_command(const std::string& command, const ConfigFile& config) {
  if (command == "shifts") return cmd_shifts(config);
  if (command == "simulate") return cmd_simulate(config);
  if (command == "sweep") return cmd_sweep(config);
  if (command == "collisions") return cmd_collisions(config);
  throw InvalidArgument("unknown command '" + command + "'");
}

void write_csv(std::ostream& out, const CsvTable& table, const ConfigFile& config) {
  out << "# entangler " << ENTANGLER_VERSION << " command=" << table.command << " schema=" << kCsvSchema
      << " config_hash=" << hash_hex(config_hash(config)) << "\n";
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      } else {
        out << c;
      }
    }
    out << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
}

}  // namespace entangler
