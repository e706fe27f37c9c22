// analytics.hpp: closed-form predictions and planning helpers.
#pragma once

#include "entangler/hamiltonian.hpp"

#include <string>
#include <vector>

namespace entangler {

// Two-level block {|upper nm>, |lower nm>} driven with strength Omega at
// detuning delta: population transferred from lower to upper after time t,
// sin^2(E t) sin^2(2 theta) with E = sqrt(Omega^2 + delta^2 / 4), tan 2 theta = 2 Omega / delta.
double two_level_population(double delta, double omega, double t);

enum class WeightConvention {
  Poisson,  // alpha^2n beta^2m / (n! m!), the coherent-state populations
  Printed   // alpha^2n beta^2m / sqrt(n! m!)
};

std::string_view to_string(WeightConvention weights);
WeightConvention parse_weight_convention(std::string_view text);

// Fidelity predicted from independent two-level blocks: target weight over the
// weight transferred into the measured level, summed over the truncation.
// Drive frequencies are the planned ones unless given.
double closed_form_fidelity(const SystemParams& params, const DispersiveShifts& shifts, const TargetSpec& target,
                            double omega, WeightConvention weights = WeightConvention::Poisson);
double closed_form_fidelity(const SystemParams& params, const DispersiveShifts& shifts, const TargetSpec& target,
                            double omega, double omega_1, double omega_2,
                            WeightConvention weights = WeightConvention::Poisson);

struct CollisionEntry {
  int tone = 1;           // 1 or 2
  std::string transition; // e.g. "fe", "fg"
  int n = 0;
  int m = 0;
  // Offsets from the tone's target sector: tone 1 (n1 - n, m - m1), tone 2 (n - n2, m2 - m).
  int lattice_n = 0;
  int lattice_m = 0;
  double detuning = 0.0;
  double predicted_population = 0.0;  // at T = pi / (2 Omega)
  double initial_weight = 0.0;        // Poisson weight of |nm> in |alpha>|beta>
};

using CollisionReport = std::vector<CollisionEntry>;

// Every non-target sector whose detuning from either tone is below
// threshold * Omega, sorted by |detuning|.
CollisionReport collision_scan(const SystemParams& params, const DispersiveShifts& shifts, const TargetSpec& target,
                               double omega, double threshold = 5.0);

// chi_a / chi_b from the bare frequencies; requires g_a == g_b.
// Lambda: (w_f - w_b) / (w_f - w_e - w_a). Xi: (w_f - w_e - w_b) / (w_e - w_a).
double shift_ratio(const SystemParams& params);

struct FrequencyErrorFidelity {
  double exact = 0.0;         // |<phi|phi'>|^2 with the unnormalized projected state
  double renormalized = 0.0;  // same after normalizing |phi'>
  double second_order = 0.0;  // 1 - (w1^2 cos^2 phi + w2^2 sin^2 phi) eps'^2 / (4 Omega^2)
};

FrequencyErrorFidelity frequency_error_fidelity(double eps_prime, double omega, double omega_1, double omega_2,
                                                double varphi);

// Leading-order estimate 1 - (1/P - 3/4) theta_1^2 for a balanced target.
double nonideal_measurement_fidelity(double theta_1, double success_probability);

// Leading order from direct projector algebra in the secular limit:
// 1 - theta_1^2 (1 + sin 2 theta_2)(1 - 2P) / (2P), balanced target.
double nonideal_measurement_fidelity_derived(double theta_1, double theta_2, double success_probability);

// Closed-form success probability N^2 (w(n1,m1) + w(n2,m2)) of the ideal protocol.
double ideal_success_probability(const TargetSpec& target);

}  // namespace entangler
