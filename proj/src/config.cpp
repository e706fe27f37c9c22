#include "entangler/config.hpp"

#include "entangler/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace entangler {

namespace {

namespace pt = boost::property_tree;

// Scalar keys. [sweep] takes any of these (except scenario/output) as "section.key".
const std::vector<std::string> kKeys = {
    "scenario.id",
    "system.qutrit", "system.omega_a", "system.omega_b", "system.omega_e", "system.omega_f",
    "system.g_a", "system.g_b", "system.g_ab", "system.n_max_a", "system.n_max_b", "system.shift_ratio",
    "target.kind", "target.N", "target.n1", "target.m1", "target.n2", "target.m2", "target.alpha",
    "target.beta",
    "drive.Omega", "drive.omega_1", "drive.omega_2", "drive.epsilon", "drive.epsilon_prime", "drive.schedule",
    "decoherence.gamma", "decoherence.kappa_a", "decoherence.kappa_b",
    "measurement.level", "measurement.theta_1", "measurement.theta_2",
    "integrator.dt", "integrator.monitor_every", "integrator.enforce_step_bound", "integrator.lindblad",
    "integrator.engine", "integrator.secular", "integrator.tail_tolerance",
    "analysis.weights", "analysis.collision_threshold",
    "output.path", "output.trajectory", "output.timing",
};

bool is_known(const std::string& key) { return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end(); }

bool sweepable(const std::string& key) {
  return is_known(key) && key.rfind("output.", 0) != 0 && key.rfind("scenario.", 0) != 0;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void set_key(ConfigFile& config, const std::string& key, const std::string& value) {
  if (key.rfind("sweep.", 0) == 0) {
    const std::string target = key.substr(6);
    if (!sweepable(target)) throw InvalidArgument("cannot sweep over '" + target + "'");
    if (trim(value).empty()) {
      std::erase_if(config.sweep, [&](const SweepAxis& a) { return a.key == target; });
      return;
    }
    std::vector<std::string> values = expand_axis(value);
    for (const auto& v : values) {
      if (v.empty()) throw InvalidArgument("empty value in sweep axis '" + target + "'");
    }
    auto it = std::find_if(config.sweep.begin(), config.sweep.end(),
                           [&](const SweepAxis& a) { return a.key == target; });
    if (it != config.sweep.end()) {
      it->values = std::move(values);
    } else {
      config.sweep.push_back({target, std::move(values)});
    }
    return;
  }
  if (!is_known(key)) throw InvalidArgument("unknown config key '" + key + "'");
  if (key == "output.path") {
    config.output.path = value;
  } else if (key == "output.trajectory") {
    config.output.trajectory = value;
  } else if (key == "output.timing") {
    config.output.timing = parse_bool(key, value);
  } else {
    config.settings[key] = value;
  }
}

template <class F>
auto with_key(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(key + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& known_keys() { return kKeys; }

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw InvalidArgument(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidArgument(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InvalidArgument(key + ": expected true/false, got '" + text + "'");
}

std::vector<std::string> expand_axis(const std::string& spec) {
  const std::string s = trim(spec);
  for (const char* fn : {"linspace", "logspace"}) {
    const std::string name = fn;
    if (s.rfind(name + "(", 0) != 0) continue;
    if (s.back() != ')') throw InvalidArgument("malformed " + name + " in '" + spec + "'");
    const auto args = split(s.substr(name.size() + 1, s.size() - name.size() - 2), ',');
    if (args.size() != 3) throw InvalidArgument(name + " takes (start, stop, count)");
    const double a = parse_double(name, args[0]), b = parse_double(name, args[1]);
    const int n = parse_int(name, args[2]);
    if (n < 1) throw InvalidArgument(name + ": count must be >= 1");
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
      const double x = n == 1 ? a : a + (b - a) * i / (n - 1);
      out.push_back(format_number(name == "logspace" ? std::pow(10.0, x) : x));
    }
    return out;
  }
  auto out = split(s, ',');
  if (out.empty()) throw InvalidArgument("empty sweep axis");
  return out;
}

ConfigFile parse_config_text(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidArgument(std::string("config syntax: ") + e.what());
  }
  ConfigFile config;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw InvalidArgument("key '" + section + "' outside a section");
    for (const auto& [key, value] : body) set_key(config, section + "." + key, value.data());
  }
  return config;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void apply_override(ConfigFile& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidArgument("override '" + assignment + "' is not key=value");
  set_key(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

ScenarioConfig resolve(const Settings& settings) {
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = settings.find(key);
    if (it == settings.end()) return std::nullopt;
    return it->second;
  };
  auto num = [&](const std::string& key, double fallback) {
    auto v = get(key);
    return v ? parse_double(key, *v) : fallback;
  };
  auto opt_num = [&](const std::string& key) -> std::optional<double> {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_double(key, *v);
  };
  auto integer = [&](const std::string& key) -> std::optional<int> {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_int(key, *v);
  };

  ScenarioConfig c;
  if (auto id = get("scenario.id")) c.id = *id;

  SystemParams& p = c.system;
  if (auto q = get("system.qutrit")) p.qutrit = with_key("system.qutrit", [&] { return parse_qutrit_type(*q); });
  p.omega_a = num("system.omega_a", p.omega_a);
  p.omega_b = num("system.omega_b", p.omega_b);
  p.omega_e = num("system.omega_e", p.omega_e);
  p.omega_f = num("system.omega_f", p.omega_f);
  p.g_a = num("system.g_a", p.g_a);
  p.g_b = num("system.g_b", p.g_b);
  p.g_ab = num("system.g_ab", p.g_ab);
  c.shift_ratio = opt_num("system.shift_ratio");
  if (c.shift_ratio) {
    const double r = *c.shift_ratio;
    if (!(r > 0)) throw InvalidArgument("system.shift_ratio must be positive");
    // Invert chi_a / chi_b = ratio for omega_e at fixed omega_a, omega_b, omega_f.
    switch (p.qutrit) {
      case QutritType::Lambda: p.omega_e = p.omega_f - p.omega_a - (p.omega_f - p.omega_b) / r; break;
      case QutritType::Xi: p.omega_e = (p.omega_f - p.omega_b + r * p.omega_a) / (1.0 + r); break;
      case QutritType::Delta: throw InvalidArgument("system.shift_ratio is defined for lambda and xi qutrits");
    }
  }

  ProtocolOptions& o = c.options;
  o.tail_tolerance = num("integrator.tail_tolerance", o.tail_tolerance);
  if (!(o.tail_tolerance > 0 && o.tail_tolerance < 1)) {
    throw InvalidArgument("integrator.tail_tolerance must lie in (0, 1)");
  }

  const std::string kind = get("target.kind").value_or("noon");
  const double alpha = num("target.alpha", 1.0);
  const double beta = num("target.beta", alpha);
  if (kind == "noon") {
    c.noon = true;
    for (const char* k : {"target.n1", "target.m1", "target.n2", "target.m2"}) {
      if (get(k)) throw InvalidArgument(std::string(k) + " is not used with target.kind=noon");
    }
    const auto N = integer("target.N");
    if (!N) throw InvalidArgument("target.N is required for target.kind=noon");
    c.target = TargetSpec::noon(*N, alpha);
    c.target.beta = beta;
  } else if (kind == "pair") {
    c.noon = false;
    if (get("target.N")) throw InvalidArgument("target.N is not used with target.kind=pair");
    const auto n1 = integer("target.n1"), m1 = integer("target.m1");
    const auto n2 = integer("target.n2"), m2 = integer("target.m2");
    if (!n1 || !m1 || !n2 || !m2) throw InvalidArgument("target.kind=pair needs n1, m1, n2, m2");
    c.target = TargetSpec::pair(*n1, *m1, *n2, *m2, alpha, beta);
  } else {
    throw InvalidArgument("target.kind: expected noon|pair, got '" + kind + "'");
  }
  if (!(c.target.alpha > 0 && c.target.beta > 0)) throw InvalidArgument("target amplitudes must be positive");

  const ModeTruncation automatic = default_truncation(c.target, o.tail_tolerance);
  p.truncation.n_max_a = integer("system.n_max_a").value_or(automatic.n_max_a);
  p.truncation.n_max_b = integer("system.n_max_b").value_or(automatic.n_max_b);
  validate(p);
  validate(c.target, p.truncation);

  const double omega = num("drive.Omega", 1e-3);
  if (!(omega > 0)) throw InvalidArgument("drive.Omega must be positive");
  Schedule schedule = Schedule::Simultaneous;
  if (auto s = get("drive.schedule")) schedule = with_key("drive.schedule", [&] { return parse_schedule(*s); });
  c.drive = planned_drive(p, c.target, omega, schedule);
  c.drive.omega_1 = num("drive.omega_1", c.drive.omega_1);
  c.drive.omega_2 = num("drive.omega_2", c.drive.omega_2);
  c.drive.epsilon = num("drive.epsilon", 0.0);
  c.drive.epsilon_prime = num("drive.epsilon_prime", 0.0);
  if (std::abs(c.drive.epsilon) >= 1.0) throw InvalidArgument("drive.epsilon must lie in (-1, 1)");

  c.rates.gamma = num("decoherence.gamma", 0.0);
  c.rates.kappa_a = opt_num("decoherence.kappa_a");
  c.rates.kappa_b = opt_num("decoherence.kappa_b");
  validate(c.rates);

  if (auto l = get("measurement.level")) {
    if (*l == "g") c.measurement.level = Level::g;
    else if (*l == "e") c.measurement.level = Level::e;
    else if (*l == "f") c.measurement.level = Level::f;
    else throw InvalidArgument("measurement.level: expected g|e|f, got '" + *l + "'");
  }
  c.measurement.theta_1 = num("measurement.theta_1", 0.0);
  c.measurement.theta_2 = num("measurement.theta_2", 0.0);
  validate(c.measurement);

  o.integrator.dt = num("integrator.dt", 0.0);
  if (auto m = integer("integrator.monitor_every")) o.integrator.monitor_every = *m;
  if (auto b = get("integrator.enforce_step_bound")) {
    o.integrator.enforce_step_bound = parse_bool("integrator.enforce_step_bound", *b);
  }
  if (o.integrator.dt < 0) throw InvalidArgument("integrator.dt must be non-negative");
  if (o.integrator.monitor_every < 1) throw InvalidArgument("integrator.monitor_every must be >= 1");
  if (auto l = get("integrator.lindblad")) {
    o.lindblad = with_key("integrator.lindblad", [&] { return parse_lindblad_engine(*l); });
  }
  if (auto e = get("integrator.engine")) o.engine = with_key("integrator.engine", [&] { return parse_pure_engine(*e); });
  if (auto s = get("integrator.secular")) o.secular = parse_bool("integrator.secular", *s);

  if (auto w = get("analysis.weights")) c.weights = with_key("analysis.weights", [&] { return parse_weight_convention(*w); });
  c.collision_threshold = num("analysis.collision_threshold", c.collision_threshold);
  if (!(c.collision_threshold > 0)) throw InvalidArgument("analysis.collision_threshold must be positive");
  return c;
}

std::size_t sweep_size(const ConfigFile& config) {
  std::size_t n = 1;
  for (const auto& axis : config.sweep) n *= axis.values.size();
  return n;
}

std::vector<Settings> sweep_points(const ConfigFile& config) {
  const std::size_t total = sweep_size(config);
  std::vector<Settings> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    Settings s = config.settings;
    std::size_t rest = i;
    for (std::size_t a = config.sweep.size(); a-- > 0;) {
      const auto& axis = config.sweep[a];
      s[axis.key] = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::uint64_t config_hash(const ConfigFile& config) {
  std::string canon;
  for (const auto& [k, v] : config.settings) canon += k + "=" + v + "\n";
  for (const auto& axis : config.sweep) {
    canon += "sweep." + axis.key + "=";
    for (const auto& v : axis.values) canon += v + ";";
    canon += "\n";
  }
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace entangler
