#include "entangler/analytics.hpp"

#include "entangler/error.hpp"

#include <algorithm>
#include <cmath>

namespace entangler {

namespace {

double log_weight(double alpha, double beta, int n, int m, WeightConvention weights) {
  const double fact = std::lgamma(n + 1.0) + std::lgamma(m + 1.0);
  const double base = 2.0 * n * std::log(alpha) + 2.0 * m * std::log(beta);
  return weights == WeightConvention::Poisson ? base - fact : base - 0.5 * fact;
}

std::string transition_name(const Transition& t) { return {level_name(t.upper), level_name(t.lower)}; }

}  // namespace

double two_level_population(double delta, double omega, double t) {
  const double e2 = omega * omega + 0.25 * delta * delta;
  if (e2 == 0.0) return 0.0;
  const double s = std::sin(std::sqrt(e2) * t);
  return s * s * omega * omega / e2;
}

std::string_view to_string(WeightConvention weights) {
  return weights == WeightConvention::Poisson ? "poisson" : "printed";
}

WeightConvention parse_weight_convention(std::string_view text) {
  if (text == "poisson") return WeightConvention::Poisson;
  if (text == "printed") return WeightConvention::Printed;
  throw InvalidArgument("unknown weight convention '" + std::string(text) + "' (expected poisson|printed)");
}

double closed_form_fidelity(const SystemParams& params, const DispersiveShifts& shifts, const TargetSpec& target,
                            double omega, WeightConvention weights) {
  const auto [w1, w2] = planned_drive_frequencies(params, shifts, target);
  return closed_form_fidelity(params, shifts, target, omega, w1, w2, weights);
}

double closed_form_fidelity(const SystemParams& params, const DispersiveShifts& shifts, const TargetSpec& target,
                            double omega, double omega_1, double omega_2, WeightConvention weights) {
  validate(target, params.truncation);
  if (!(omega > 0)) throw InvalidArgument("Omega must be positive");
  if (!(target.alpha > 0 && target.beta > 0)) throw InvalidArgument("target amplitudes must be positive");
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  const double t = kPi / (2.0 * omega);
  // Scale weights by the largest log weight to stay finite for large amplitudes.
  const auto& tr = params.truncation;
  double ref = -1e300;
  for (int n = 0; n <= tr.n_max_a; ++n) {
    for (int m = 0; m <= tr.n_max_b; ++m) ref = std::max(ref, log_weight(target.alpha, target.beta, n, m, weights));
  }
  auto w = [&](int n, int m) { return std::exp(log_weight(target.alpha, target.beta, n, m, weights) - ref); };
  double denominator = 0.0;
  for (int n = 0; n <= tr.n_max_a; ++n) {
    for (int m = 0; m <= tr.n_max_b; ++m) {
      const bool first = n == target.n_1 && m == target.m_1;
      const bool second = n == target.n_2 && m == target.m_2;
      const double p1 =
          first ? 1.0
                : two_level_population(transition_detuning(params, shifts, levels.tone_1, n, m, omega_1), omega, t);
      const double p2 =
          second ? 1.0
                 : two_level_population(transition_detuning(params, shifts, levels.tone_2, n, m, omega_2), omega, t);
      denominator += w(n, m) * (p1 + p2);
    }
  }
  const double numerator = w(target.n_1, target.m_1) + w(target.n_2, target.m_2);
  return numerator / denominator;
}

CollisionReport collision_scan(const SystemParams& params, const DispersiveShifts& shifts, const TargetSpec& target,
                               double omega, double threshold) {
  validate(target, params.truncation);
  if (!(omega > 0)) throw InvalidArgument("Omega must be positive");
  if (!(threshold > 0)) throw InvalidArgument("collision threshold must be positive");
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  const auto [w1, w2] = planned_drive_frequencies(params, shifts, target);
  const double t = kPi / (2.0 * omega);
  const auto& tr = params.truncation;
  const double mean_a = target.alpha * target.alpha, mean_b = target.beta * target.beta;
  auto poisson = [&](int n, int m) {
    double lw = -mean_a - mean_b - std::lgamma(n + 1.0) - std::lgamma(m + 1.0);
    if (n > 0) lw += n * std::log(mean_a);
    if (m > 0) lw += m * std::log(mean_b);
    return std::exp(lw);
  };

  CollisionReport report;
  for (int tone = 1; tone <= 2; ++tone) {
    const Transition& tr_levels = tone == 1 ? levels.tone_1 : levels.tone_2;
    const double w = tone == 1 ? w1 : w2;
    const int tn = tone == 1 ? target.n_1 : target.n_2;
    const int tm = tone == 1 ? target.m_1 : target.m_2;
    for (int n = 0; n <= tr.n_max_a; ++n) {
      for (int m = 0; m <= tr.n_max_b; ++m) {
        if (n == tn && m == tm) continue;
        const double delta = transition_detuning(params, shifts, tr_levels, n, m, w);
        if (std::abs(delta) >= threshold * omega) continue;
        CollisionEntry e;
        e.tone = tone;
        e.transition = transition_name(tr_levels);
        e.n = n;
        e.m = m;
        e.lattice_n = tone == 1 ? tn - n : n - tn;
        e.lattice_m = tone == 1 ? m - tm : tm - m;
        e.detuning = delta;
        e.predicted_population = two_level_population(delta, omega, t);
        e.initial_weight = poisson(n, m);
        report.push_back(e);
      }
    }
  }
  std::stable_sort(report.begin(), report.end(), [](const CollisionEntry& a, const CollisionEntry& b) {
    return std::abs(a.detuning) < std::abs(b.detuning);
  });
  return report;
}

double shift_ratio(const SystemParams& params) {
  if (params.g_a != params.g_b) throw InvalidArgument("shift_ratio requires isotropic couplings g_a == g_b");
  double num = 0.0, den = 0.0;
  switch (params.qutrit) {
    case QutritType::Lambda:
      num = params.omega_f - params.omega_b;
      den = params.omega_f - params.omega_e - params.omega_a;
      break;
    case QutritType::Xi:
      num = params.omega_f - params.omega_e - params.omega_b;
      den = params.omega_e - params.omega_a;
      break;
    case QutritType::Delta:
      throw InvalidArgument("shift_ratio is defined for Lambda and Xi qutrits");
  }
  if (std::abs(den) < kResonanceFloor || std::abs(num) < kResonanceFloor) {
    throw NumericalError("resonant, dispersive theory invalid: shift ratio denominator vanishes");
  }
  return num / den;
}

FrequencyErrorFidelity frequency_error_fidelity(double eps_prime, double omega, double omega_1, double omega_2,
                                                double varphi) {
  if (!(omega > 0)) throw InvalidArgument("Omega must be positive");
  // A_j = sin(vartheta_j) sin(theta_j), tan theta_j = 2 Omega / (omega_j eps'), vartheta_j = pi / (2 sin theta_j)
  auto amplitude = [&](double w) {
    const double theta = std::atan2(2.0 * omega, w * eps_prime);
    const double s = std::sin(theta);
    return std::sin(kPi / (2.0 * s)) * s;
  };
  const double a1 = amplitude(omega_1), a2 = amplitude(omega_2);
  const double c = std::cos(varphi) * std::cos(varphi), s = std::sin(varphi) * std::sin(varphi);
  FrequencyErrorFidelity out;
  const double overlap = c * a1 + s * a2;
  out.exact = overlap * overlap;
  const double norm = c * a1 * a1 + s * a2 * a2;
  out.renormalized = norm > 0 ? overlap * overlap / norm : 0.0;
  out.second_order =
      1.0 - (omega_1 * omega_1 * c + omega_2 * omega_2 * s) * eps_prime * eps_prime / (4.0 * omega * omega);
  return out;
}

double nonideal_measurement_fidelity(double theta_1, double success_probability) {
  if (!(success_probability > 0 && success_probability <= 1)) {
    throw InvalidArgument("success probability must lie in (0, 1]");
  }
  return 1.0 - (1.0 / success_probability - 0.75) * theta_1 * theta_1;
}

double nonideal_measurement_fidelity_derived(double theta_1, double theta_2, double success_probability) {
  if (!(success_probability > 0 && success_probability <= 0.5)) {
    throw InvalidArgument("success probability must lie in (0, 1/2]");
  }
  const double p = success_probability;
  return 1.0 - theta_1 * theta_1 * (1.0 + std::sin(2.0 * theta_2)) * (1.0 - 2.0 * p) / (2.0 * p);
}

double ideal_success_probability(const TargetSpec& target) {
  const double lw1 = log_weight(target.alpha, target.beta, target.n_1, target.m_1, WeightConvention::Poisson);
  const double lw2 = log_weight(target.alpha, target.beta, target.n_2, target.m_2, WeightConvention::Poisson);
  const double log_norm2 = -target.alpha * target.alpha - target.beta * target.beta - std::log(2.0);
  return std::exp(log_norm2 + lw1) + std::exp(log_norm2 + lw2);
}

}  // namespace entangler
