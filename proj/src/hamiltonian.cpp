#include "entangler/hamiltonian.hpp"

#include "entangler/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace entangler {

namespace {

constexpr std::array<Level, kQutritDim> kLevels{Level::g, Level::e, Level::f};

int idx(Level level) { return static_cast<int>(level); }

double checked_inverse_gap(double denominator, const char* what) {
  if (std::abs(denominator) < kResonanceFloor) {
    std::ostringstream msg;
    msg << "resonant, dispersive theory invalid: denominator " << what << " = " << denominator;
    throw NumericalError(msg.str());
  }
  return 1.0 / denominator;
}

double theta(double w_k, double w_j) { return w_k > w_j ? 1.0 : -1.0; }

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(QutritType type) {
  switch (type) {
    case QutritType::Lambda: return "lambda";
    case QutritType::Delta: return "delta";
    case QutritType::Xi: return "xi";
  }
  return "?";
}

QutritType parse_qutrit_type(std::string_view text) {
  const auto t = lower(text);
  if (t == "lambda") return QutritType::Lambda;
  if (t == "delta") return QutritType::Delta;
  if (t == "xi") return QutritType::Xi;
  throw InvalidArgument("unknown qutrit type '" + std::string(text) + "' (expected lambda|delta|xi)");
}

std::string_view to_string(Schedule schedule) {
  return schedule == Schedule::Simultaneous ? "simultaneous" : "sequential";
}

Schedule parse_schedule(std::string_view text) {
  const auto t = lower(text);
  if (t == "simultaneous") return Schedule::Simultaneous;
  if (t == "sequential") return Schedule::Sequential;
  throw InvalidArgument("unknown schedule '" + std::string(text) + "' (expected simultaneous|sequential)");
}

double SystemParams::level_frequency(Level level) const {
  switch (level) {
    case Level::g: return 0.0;
    case Level::e: return omega_e;
    case Level::f: return omega_f;
  }
  return 0.0;
}

void validate(const SystemParams& params) {
  if (!(params.omega_a > 0 && params.omega_b > 0 && params.omega_e > 0 && params.omega_f > 0)) {
    throw InvalidArgument("all mode and level frequencies must be positive");
  }
  if (params.omega_e == params.omega_f) throw InvalidArgument("degenerate qutrit levels e and f");
  if (params.g_a < 0 || params.g_b < 0) throw InvalidArgument("couplings must be non-negative");
  CompositeSpace check(params.truncation);
  (void)check;
}

std::vector<std::string> dispersive_regime_warnings(const SystemParams& params) {
  std::vector<std::string> out;
  auto check = [&](double g, double gap, const char* name) {
    if (g == 0.0) return;
    const double ratio = g / std::abs(gap);
    if (ratio >= 0.2) {
      std::ostringstream msg;
      msg << "dispersive regime questionable: " << name << " coupling/detuning = " << ratio;
      out.push_back(msg.str());
    }
  };
  const double we = params.omega_e, wf = params.omega_f;
  switch (params.qutrit) {
    case QutritType::Lambda:
      check(params.g_a, wf - we - params.omega_a, "g_a/(w_f-w_e-w_a)");
      check(params.g_b, wf - params.omega_b, "g_b/(w_f-w_b)");
      break;
    case QutritType::Xi:
      check(params.g_a, we - params.omega_a, "g_a/(w_e-w_a)");
      check(params.g_b, wf - we - params.omega_b, "g_b/(w_f-w_e-w_b)");
      break;
    case QutritType::Delta:
      for (Level k : kLevels) {
        for (Level j : kLevels) {
          if (k == j) continue;
          const double gap = params.level_frequency(k) - params.level_frequency(j);
          check(params.g_a, gap - params.omega_a, "g_a/(w_k-w_j-w_a)");
          check(params.g_b, gap - params.omega_b, "g_b/(w_k-w_j-w_b)");
        }
      }
      break;
  }
  return out;
}

DispersiveShifts dispersive_shifts(const SystemParams& params) {
  validate(params);
  DispersiveShifts s;
  s.qutrit = params.qutrit;
  const double ga2 = params.g_a * params.g_a;
  const double gb2 = params.g_b * params.g_b;
  const double we = params.omega_e, wf = params.omega_f, wa = params.omega_a, wb = params.omega_b;
  for (auto& mode : s.table) {
    for (auto& row : mode) row.fill(std::numeric_limits<double>::quiet_NaN());
  }
  switch (params.qutrit) {
    case QutritType::Lambda:
      s.chi_a = ga2 * checked_inverse_gap(wf - we - wa, "w_f-w_e-w_a");
      s.chi_a_prime = ga2 * checked_inverse_gap(wf - we + wa, "w_f-w_e+w_a");
      s.chi_b = gb2 * checked_inverse_gap(wf - wb, "w_f-w_b");
      s.chi_b_prime = gb2 * checked_inverse_gap(wf + wb, "w_f+w_b");
      break;
    case QutritType::Xi:
      s.chi_a = ga2 * checked_inverse_gap(we - wa, "w_e-w_a");
      s.chi_a_prime = ga2 * checked_inverse_gap(we + wa, "w_e+w_a");
      s.chi_b = gb2 * checked_inverse_gap(wf - we - wb, "w_f-w_e-w_b");
      s.chi_b_prime = gb2 * checked_inverse_gap(wf - we + wb, "w_f-w_e+w_b");
      break;
    case QutritType::Delta: {
      const std::array<double, 2> g2{ga2, gb2};
      const std::array<double, 2> wl{wa, wb};
      for (int l = 0; l < 2; ++l) {
        for (Level k : kLevels) {
          for (Level j : kLevels) {
            if (k == j) continue;
            const double wk = params.level_frequency(k), wj = params.level_frequency(j);
            const double denom = theta(wk, wj) * (wk - wj - wl[l]);
            s.table[l][idx(k)][idx(j)] = g2[l] * checked_inverse_gap(denom, "Theta(kj)(w_k-w_j-w_l)");
          }
        }
      }
      s.chi_a = s.chi(0, Level::f, Level::e);
      s.chi_a_prime = s.chi(0, Level::e, Level::f);
      s.chi_b = s.chi(1, Level::f, Level::g);
      s.chi_b_prime = s.chi(1, Level::g, Level::f);
      break;
    }
  }
  return s;
}

double effective_energy(const SystemParams& params, const DispersiveShifts& s, Level level, int n, int m) {
  const double free = n * params.omega_a + m * params.omega_b;
  switch (params.qutrit) {
    case QutritType::Lambda:
      switch (level) {
        case Level::g: return free - m * s.chi_b - (m + 1) * s.chi_b_prime;
        case Level::e: return params.omega_e + free - n * s.chi_a - (n + 1) * s.chi_a_prime;
        case Level::f:
          return params.omega_f + free + (n + 1) * s.chi_a + n * s.chi_a_prime + (m + 1) * s.chi_b +
                 m * s.chi_b_prime;
      }
      break;
    case QutritType::Xi: {
      const double sa = s.chi_a + s.chi_a_prime;
      const double sb = s.chi_b + s.chi_b_prime;
      switch (level) {
        case Level::g: return free - s.chi_a_prime - n * sa;
        case Level::e: return params.omega_e + free + s.chi_a - s.chi_b_prime + n * sa - m * sb;
        case Level::f: return params.omega_f + free + s.chi_b + m * sb;
      }
      break;
    }
    case QutritType::Delta: {
      // w_k + sum_{l, j != k} Theta(kj) [chi^l_kj + n_l (chi^l_kj + chi^l_jk)]
      const double wk = params.level_frequency(level);
      double energy = wk + free;
      const std::array<int, 2> photons{n, m};
      for (int l = 0; l < 2; ++l) {
        for (Level j : kLevels) {
          if (j == level) continue;
          const double th = theta(wk, params.level_frequency(j));
          const double kj = s.chi(l, level, j);
          const double jk = s.chi(l, j, level);
          energy += th * (kj + photons[l] * (kj + jk));
        }
      }
      return energy;
    }
  }
  return 0.0;
}

Eigen::VectorXd effective_energies(const SystemParams& params, const DispersiveShifts& shifts) {
  const CompositeSpace space = params.space();
  Eigen::VectorXd energies(space.dim());
  for (int k = 0; k < space.dim(); ++k) {
    const BasisLabel b = space.label(k);
    energies(k) = effective_energy(params, shifts, b.level, b.n, b.m);
  }
  return energies;
}

Operator effective_hamiltonian(const SystemParams& params) {
  const auto shifts = dispersive_shifts(params);
  return effective_energies(params, shifts).cast<Complex>().asDiagonal();
}

Operator lab_hamiltonian(const SystemParams& params) {
  validate(params);
  const auto& tr = params.truncation;
  const Operator a = ladder_operator(tr.n_max_a);
  const Operator b = ladder_operator(tr.n_max_b);
  const Operator ia = identity(tr.n_max_a + 1);
  const Operator ib = identity(tr.n_max_b + 1);
  const Operator iq = identity(kQutritDim);
  const Operator xa = a + a.adjoint();
  const Operator xb = b + b.adjoint();
  auto flip = [](Level k, Level j) { return Operator(qutrit_projector(k, j) + qutrit_projector(j, k)); };

  Operator h = params.omega_a * embed(iq, a.adjoint() * a, ib) + params.omega_b * embed(iq, ia, b.adjoint() * b) +
               params.omega_e * embed(qutrit_projector(Level::e, Level::e), ia, ib) +
               params.omega_f * embed(qutrit_projector(Level::f, Level::f), ia, ib);

  switch (params.qutrit) {
    case QutritType::Lambda:
      h += params.g_a * embed(flip(Level::f, Level::e), xa, ib);
      h += params.g_b * embed(flip(Level::f, Level::g), ia, xb);
      break;
    case QutritType::Xi:
      h += params.g_a * embed(flip(Level::e, Level::g), xa, ib);
      h += params.g_b * embed(flip(Level::f, Level::e), ia, xb);
      break;
    case QutritType::Delta: {
      const Operator all = flip(Level::e, Level::g) + flip(Level::f, Level::g) + flip(Level::f, Level::e);
      h += params.g_a * embed(all, xa, ib);
      h += params.g_b * embed(all, ia, xb);
      break;
    }
  }
  if (params.g_ab != 0.0) h += params.g_ab * embed(iq, xa, xb);
  return h;
}

double DriveSpec::pulse_duration() const {
  if (!(Omega > 0)) throw InvalidArgument("drive intensity Omega must be positive");
  return kPi / (2.0 * Omega);
}

double DriveSpec::total_duration() const {
  return schedule == Schedule::Sequential ? 2.0 * pulse_duration() : pulse_duration();
}

TargetSpec TargetSpec::noon(int N, double amplitude) {
  if (N < 1) throw InvalidArgument("NOON photon number must be >= 1");
  return pair(N, 0, 0, N, amplitude, amplitude);
}

TargetSpec TargetSpec::pair(int n_1, int m_1, int n_2, int m_2, double alpha, double beta) {
  TargetSpec t;
  t.n_1 = n_1;
  t.m_1 = m_1;
  t.n_2 = n_2;
  t.m_2 = m_2;
  t.alpha = alpha;
  t.beta = beta;
  return t;
}

int TargetSpec::max_label() const { return std::max({n_1, m_1, n_2, m_2}); }

void validate(const TargetSpec& target, const ModeTruncation& truncation) {
  if (std::min({target.n_1, target.m_1, target.n_2, target.m_2}) < 0) {
    throw InvalidArgument("target Fock labels must be non-negative");
  }
  if (target.n_1 == target.n_2 || target.m_1 == target.m_2) {
    throw InvalidArgument("target requires n1 != n2 and m1 != m2");
  }
  if (std::max(target.n_1, target.n_2) > truncation.n_max_a ||
      std::max(target.m_1, target.m_2) > truncation.n_max_b) {
    throw InvalidArgument("target Fock labels exceed the truncation");
  }
}

ModeTruncation default_truncation(const TargetSpec& target, double tail_tolerance) {
  const int base = target.max_label() + 8;
  return {std::max(base, minimal_cutoff(target.alpha, tail_tolerance)),
          std::max(base, minimal_cutoff(target.beta, tail_tolerance))};
}

ProtocolLevels protocol_levels(QutritType type) {
  ProtocolLevels p;
  if (type == QutritType::Xi) {
    p.tone_1 = {Level::e, Level::g};
    p.tone_2 = {Level::f, Level::e};
    p.initial_first = Level::g;
    p.initial_second = Level::f;
    p.measured = Level::e;
  } else {
    p.tone_1 = {Level::f, Level::e};
    p.tone_2 = {Level::f, Level::g};
    p.initial_first = Level::g;
    p.initial_second = Level::e;
    p.measured = Level::f;
  }
  return p;
}

std::pair<double, double> drive_frequencies(const SystemParams& params, const DispersiveShifts& s,
                                            const TargetSpec& t) {
  const double wf = params.omega_f, we = params.omega_e;
  switch (params.qutrit) {
    case QutritType::Lambda: {
      const double sa = s.chi_a + s.chi_a_prime;
      const double sb = s.chi_b + s.chi_b_prime;
      const double w1 = wf - we + (2 * t.n_1 + 1) * sa + t.m_1 * sb + s.chi_b;
      const double w2 = wf + (2 * t.m_2 + 1) * sb + t.n_2 * sa + s.chi_a;
      return {w1, w2};
    }
    case QutritType::Delta: {
      auto c = [&](int l, Level k, Level j) { return s.chi(l, k, j); };
      const Level g = Level::g, e = Level::e, f = Level::f;
      const double w1 = wf - we + (2 * t.n_1 + 1) * (c(0, e, f) + c(0, f, e)) +
                        t.n_1 * (c(0, g, f) - c(0, g, e)) + (t.n_1 + 1) * (c(0, f, g) - c(0, e, g)) +
                        (2 * t.m_1 + 1) * (c(1, e, f) + c(1, f, e)) + t.m_1 * (c(1, g, f) - c(1, g, e)) +
                        (t.m_1 + 1) * (c(1, f, g) - c(1, e, g));
      const double w2 = wf + (2 * t.n_2 + 1) * (c(0, g, f) + c(0, f, g)) + t.n_2 * (c(0, e, f) + c(0, e, g)) +
                        (t.n_2 + 1) * (c(0, f, e) + c(0, g, e)) + (2 * t.m_2 + 1) * (c(1, g, f) + c(1, f, g)) +
                        t.m_2 * (c(1, e, f) + c(1, e, g)) + (t.m_2 + 1) * (c(1, f, e) + c(1, g, e));
      return {w1, w2};
    }
    case QutritType::Xi:
      throw InvalidArgument("drive_frequencies: Xi qutrit uses xi_drive_frequencies");
  }
  return {0.0, 0.0};
}

std::pair<double, double> xi_drive_frequencies(const SystemParams& params, const DispersiveShifts& s,
                                               const TargetSpec& t) {
  if (params.qutrit != QutritType::Xi) throw InvalidArgument("xi_drive_frequencies: requires a Xi qutrit");
  const double w1 = effective_energy(params, s, Level::e, t.n_1, t.m_1) -
                    effective_energy(params, s, Level::g, t.n_1, t.m_1);
  const double w2 = effective_energy(params, s, Level::f, t.n_2, t.m_2) -
                    effective_energy(params, s, Level::e, t.n_2, t.m_2);
  return {w1, w2};
}

std::pair<double, double> planned_drive_frequencies(const SystemParams& params, const DispersiveShifts& shifts,
                                                    const TargetSpec& target) {
  return params.qutrit == QutritType::Xi ? xi_drive_frequencies(params, shifts, target)
                                         : drive_frequencies(params, shifts, target);
}

std::pair<double, double> detunings(const SystemParams& params, const DispersiveShifts& s, int n, int m,
                                    double omega_1, double omega_2) {
  const double sa = s.chi_a + s.chi_a_prime;
  const double sb = s.chi_b + s.chi_b_prime;
  const double gap_fe = params.omega_f - params.omega_e + (2 * n + 1) * sa + m * sb + s.chi_b;
  const double gap_fg = params.omega_f + (2 * m + 1) * sb + n * sa + s.chi_a;
  return {gap_fe - omega_1, gap_fg - omega_2};
}

double transition_detuning(const SystemParams& params, const DispersiveShifts& shifts, const Transition& tr, int n,
                           int m, double omega) {
  return effective_energy(params, shifts, tr.upper, n, m) - effective_energy(params, shifts, tr.lower, n, m) - omega;
}

namespace {

void add_crosstalk(PhasedOperatorBuilder& builder, const SystemParams& params, const CompositeSpace& space,
                   const Eigen::VectorXd* energies) {
  if (params.g_ab == 0.0) return;
  const auto& tr = params.truncation;
  for (int q = 0; q < kQutritDim; ++q) {
    const Level level = static_cast<Level>(q);
    for (int n = 0; n <= tr.n_max_a; ++n) {
      for (int m = 0; m <= tr.n_max_b; ++m) {
        const int from = space.index(level, n, m);
        // (a + a^dag)(b + b^dag): a^dag b^dag and a^dag b raise n; pair each
        // with its conjugate once.
        for (int dm : {+1, -1}) {
          const int n2 = n + 1, m2 = m + dm;
          if (!space.contains(n2, m2)) continue;
          const int to = space.index(level, n2, m2);
          const double amp = params.g_ab * std::sqrt(double(n2)) * std::sqrt(double(dm > 0 ? m2 : m));
          const double freq = energies ? (*energies)(to) - (*energies)(from) : 0.0;
          builder.add_hermitian_pair(to, from, amp, freq);
        }
      }
    }
  }
}

}  // namespace

PhasedOperator rotating_frame_hamiltonian(const SystemParams& params, const DriveSpec& drive, ToneSelection tones) {
  const auto shifts = dispersive_shifts(params);
  const CompositeSpace space = params.space();
  const Eigen::VectorXd energies = effective_energies(params, shifts);
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  const auto& tr = params.truncation;

  PhasedOperatorBuilder builder(space.dim());
  auto add_tone = [&](const Transition& t, double amplitude, double omega) {
    for (int n = 0; n <= tr.n_max_a; ++n) {
      for (int m = 0; m <= tr.n_max_b; ++m) {
        const int up = space.index(t.upper, n, m);
        const int lo = space.index(t.lower, n, m);
        builder.add_hermitian_pair(up, lo, amplitude, energies(up) - energies(lo) - omega);
      }
    }
  };
  const double scale = 1.0 + drive.epsilon_prime;
  if (tones.first) add_tone(levels.tone_1, drive.Omega * (1.0 - drive.epsilon), drive.omega_1 * scale);
  if (tones.second) add_tone(levels.tone_2, drive.Omega * (1.0 + drive.epsilon), drive.omega_2 * scale);
  add_crosstalk(builder, params, space, &energies);
  return std::move(builder).build();
}

PhasedOperator resonant_blocks_hamiltonian(const SystemParams& params, const DriveSpec& drive,
                                           const TargetSpec& target, ToneSelection tones) {
  validate(target, params.truncation);
  const auto shifts = dispersive_shifts(params);
  const CompositeSpace space = params.space();
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  const double scale = 1.0 + drive.epsilon_prime;
  PhasedOperatorBuilder builder(space.dim());
  auto add_block = [&](const Transition& t, int n, int m, double amplitude, double omega) {
    const double gap = effective_energy(params, shifts, t.upper, n, m) - effective_energy(params, shifts, t.lower, n, m);
    builder.add_hermitian_pair(space.index(t.upper, n, m), space.index(t.lower, n, m), amplitude, gap - omega);
  };
  if (tones.first) {
    add_block(levels.tone_1, target.n_1, target.m_1, drive.Omega * (1.0 - drive.epsilon), drive.omega_1 * scale);
  }
  if (tones.second) {
    add_block(levels.tone_2, target.n_2, target.m_2, drive.Omega * (1.0 + drive.epsilon), drive.omega_2 * scale);
  }
  return std::move(builder).build();
}

Operator rotating_drive_hamiltonian(double t, const SystemParams& params, const DriveSpec& drive) {
  return rotating_frame_hamiltonian(params, drive).dense(t);
}

std::array<double, kQutritDim> drive_frame_levels(const SystemParams& params, const DriveSpec& drive) {
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  const double scale = 1.0 + drive.epsilon_prime;
  std::array<double, kQutritDim> r{};
  std::array<bool, kQutritDim> known{true, false, false};
  const std::array<std::pair<Transition, double>, 2> tones{
      std::pair{levels.tone_1, drive.omega_1 * scale}, std::pair{levels.tone_2, drive.omega_2 * scale}};
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& [t, w] : tones) {
      const int u = idx(t.upper), l = idx(t.lower);
      if (known[l] && !known[u]) {
        r[u] = r[l] + w;
        known[u] = true;
      } else if (known[u] && !known[l]) {
        r[l] = r[u] - w;
        known[l] = true;
      }
    }
  }
  return r;
}

Operator drive_frame_hamiltonian(const SystemParams& params, const DriveSpec& drive, ToneSelection tones) {
  const auto shifts = dispersive_shifts(params);
  const CompositeSpace space = params.space();
  const Eigen::VectorXd energies = effective_energies(params, shifts);
  const auto frame = drive_frame_levels(params, drive);
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  const auto& tr = params.truncation;

  PhasedOperatorBuilder builder(space.dim());
  for (int k = 0; k < space.dim(); ++k) {
    builder.add_hermitian_pair(k, k, energies(k) - frame[idx(space.label(k).level)], 0.0);
  }
  auto add_tone = [&](const Transition& t, double amplitude) {
    for (int n = 0; n <= tr.n_max_a; ++n) {
      for (int m = 0; m <= tr.n_max_b; ++m) {
        builder.add_hermitian_pair(space.index(t.upper, n, m), space.index(t.lower, n, m), amplitude, 0.0);
      }
    }
  };
  if (tones.first) add_tone(levels.tone_1, drive.Omega * (1.0 - drive.epsilon));
  if (tones.second) add_tone(levels.tone_2, drive.Omega * (1.0 + drive.epsilon));
  add_crosstalk(builder, params, space, nullptr);
  return std::move(builder).build().dense(0.0);
}

StateVector drive_frame_to_rotating(const StateVector& psi, const SystemParams& params, const DriveSpec& drive,
                                    double t) {
  const auto shifts = dispersive_shifts(params);
  const CompositeSpace space = params.space();
  if (psi.size() != space.dim()) throw InvalidArgument("drive_frame_to_rotating: dimension mismatch");
  const Eigen::VectorXd energies = effective_energies(params, shifts);
  const auto frame = drive_frame_levels(params, drive);
  StateVector out(psi.size());
  for (int k = 0; k < space.dim(); ++k) {
    const double w = energies(k) - frame[idx(space.label(k).level)];
    out(k) = std::polar(1.0, w * t) * psi(k);
  }
  return out;
}

}  // namespace entangler
