// hamiltonian.hpp: model Hamiltonians, dispersive shifts and drive planning.
//
// All quantities are in units of the coupling g (times in 1/g). Level
// energies are measured from |g>. Three qutrit topologies are supported:
//
//   Lambda: mode a couples e<->f, mode b couples g<->f
//   Delta:  both modes couple every pair, isotropic per mode
//   Xi:     mode a couples g<->e, mode b couples e<->f (ladder)
#pragma once

#include "entangler/hilbert.hpp"
#include "entangler/phased_operator.hpp"

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entangler {

enum class QutritType { Lambda, Delta, Xi };

std::string_view to_string(QutritType type);
QutritType parse_qutrit_type(std::string_view text);

struct SystemParams {
  double omega_a = 70.0;
  double omega_b = 89.0;
  double omega_e = 20.0;
  double omega_f = 100.0;
  double g_a = 1.0;
  double g_b = 1.0;
  double g_ab = 0.0;
  QutritType qutrit = QutritType::Lambda;
  ModeTruncation truncation{10, 10};

  CompositeSpace space() const { return CompositeSpace(truncation); }
  double level_frequency(Level level) const;
};

// Throws InvalidArgument on non-positive frequencies or degenerate levels.
void validate(const SystemParams& params);

// Non-fatal dispersive-regime diagnostics (coupling/detuning ratio >= 0.2).
std::vector<std::string> dispersive_regime_warnings(const SystemParams& params);

struct DispersiveShifts {
  QutritType qutrit = QutritType::Lambda;
  // Lambda: rotating (chi) and counter-rotating (chi') shifts of each mode.
  // Xi: the ladder analogues. Delta: the Lambda-limit entries of the table,
  // chi_a = chi^a_fe, chi_a' = chi^a_ef, chi_b = chi^b_fg, chi_b' = chi^b_gf.
  double chi_a = 0.0;
  double chi_a_prime = 0.0;
  double chi_b = 0.0;
  double chi_b_prime = 0.0;
  // Delta only: chi[l][k][j] = g_l^2 / (Theta(kj) (w_k - w_j - w_l)), k != j.
  std::array<std::array<std::array<double, kQutritDim>, kQutritDim>, 2> table{};

  double chi(int mode, Level k, Level j) const {
    return table[mode][static_cast<int>(k)][static_cast<int>(j)];
  }
};

inline constexpr double kResonanceFloor = 1e-6;

// Throws NumericalError ("resonant, dispersive theory invalid") when any
// second-order denominator is below kResonanceFloor in magnitude.
DispersiveShifts dispersive_shifts(const SystemParams& params);

// Diagonal of the effective dispersive Hamiltonian for one basis state.
double effective_energy(const SystemParams& params, const DispersiveShifts& shifts,
                        Level level, int n, int m);
// Same for every composite index, in basis order.
Eigen::VectorXd effective_energies(const SystemParams& params, const DispersiveShifts& shifts);

Operator effective_hamiltonian(const SystemParams& params);
// H0 + V (+ crosstalk), counter-rotating terms included.
Operator lab_hamiltonian(const SystemParams& params);

enum class Schedule { Simultaneous, Sequential };

std::string_view to_string(Schedule schedule);
Schedule parse_schedule(std::string_view text);

struct DriveSpec {
  double Omega = 1e-3;
  double omega_1 = 0.0;
  double omega_2 = 0.0;
  double epsilon = 0.0;        // tone 1 scaled by (1 - eps), tone 2 by (1 + eps)
  double epsilon_prime = 0.0;  // both tones run at omega_j (1 + eps')
  Schedule schedule = Schedule::Simultaneous;

  // pi / (2 Omega); per pulse when Sequential.
  double pulse_duration() const;
  double total_duration() const;
};

struct TargetSpec {
  int n_1 = 0;
  int m_1 = 0;
  int n_2 = 1;
  int m_2 = 1;
  double alpha = 1.0;
  double beta = 1.0;

  // (|N0> + |0N>)/sqrt(2); tone 1 carries |N0>, tone 2 carries |0N>.
  static TargetSpec noon(int N, double amplitude = 1.0);
  // (|n1 m1> + |n2 m2>) with explicit labels.
  static TargetSpec pair(int n_1, int m_1, int n_2, int m_2, double alpha = 1.0, double beta = 1.0);

  int max_label() const;
};

// Throws InvalidArgument when labels coincide or exceed the truncation.
void validate(const TargetSpec& target, const ModeTruncation& truncation);

// Default cutoff: max(label) + 8, raised until both coherent tails are below tol.
ModeTruncation default_truncation(const TargetSpec& target,
                                  double tail_tolerance = kDefaultTailTolerance);

struct Transition {
  Level upper = Level::f;
  Level lower = Level::e;
};

// Which qutrit transitions the two tones address, the initial superposition
// and the measured level, per topology.
struct ProtocolLevels {
  Transition tone_1;
  Transition tone_2;
  Level initial_first = Level::g;
  Level initial_second = Level::e;
  Level measured = Level::f;
};

ProtocolLevels protocol_levels(QutritType type);

// Closed-form drive frequencies for Lambda and Delta qutrits.
std::pair<double, double> drive_frequencies(const SystemParams& params, const DispersiveShifts& shifts,
                                            const TargetSpec& target);
// Xi qutrit: dressed g<->e gap at (n1,m1) and e<->f gap at (n2,m2).
std::pair<double, double> xi_drive_frequencies(const SystemParams& params, const DispersiveShifts& shifts,
                                               const TargetSpec& target);
// Dispatches on the qutrit type.
std::pair<double, double> planned_drive_frequencies(const SystemParams& params, const DispersiveShifts& shifts,
                                                    const TargetSpec& target);

// Lambda detunings of the e<->f and g<->f transitions of |nm> from the tones.
std::pair<double, double> detunings(const SystemParams& params, const DispersiveShifts& shifts, int n, int m,
                                    double omega_1, double omega_2);

// Dressed gap of `transition` in sector (n, m) minus `omega`, any topology.
double transition_detuning(const SystemParams& params, const DispersiveShifts& shifts,
                           const Transition& transition, int n, int m, double omega);

struct ToneSelection {
  bool first = true;
  bool second = true;
};

// Rotating frame with respect to exp(i H_eff t): every drive element carries
// exp(i (gap - omega_j (1 + eps')) t); crosstalk elements carry their free
// energy differences.
PhasedOperator rotating_frame_hamiltonian(const SystemParams& params, const DriveSpec& drive,
                                          ToneSelection tones = {});

// Only the two resonant blocks: tone 1 at (n1, m1) and tone 2 at (n2, m2).
// The secular limit of rotating_frame_hamiltonian, without crosstalk.
PhasedOperator resonant_blocks_hamiltonian(const SystemParams& params, const DriveSpec& drive,
                                           const TargetSpec& target, ToneSelection tones = {});

Operator rotating_drive_hamiltonian(double t, const SystemParams& params, const DriveSpec& drive);

// Frame rotating only the qutrit at the drive frequencies. The Hamiltonian
// there is time independent (including crosstalk).
Operator drive_frame_hamiltonian(const SystemParams& params, const DriveSpec& drive, ToneSelection tones = {});

// Per-level frame frequencies R with R_g = 0 and R_upper - R_lower = omega_j (1 + eps').
std::array<double, kQutritDim> drive_frame_levels(const SystemParams& params, const DriveSpec& drive);

// psi_rotating(t) = exp(i (E_eff - R) t) psi_drive(t)
StateVector drive_frame_to_rotating(const StateVector& psi, const SystemParams& params, const DriveSpec& drive,
                                    double t);

}  // namespace entangler
