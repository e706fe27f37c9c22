#include "entangler/error.hpp"
#include "entangler/hamiltonian.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace entangler;

namespace {

SystemParams figure3(int cutoff = 4) {
  SystemParams p;
  p.truncation = {cutoff, cutoff};
  return p;
}

double element(const Operator& h, const CompositeSpace& s, Level k, int n, int m, Level j, int n2, int m2) {
  return std::abs(h(s.index(k, n, m), s.index(j, n2, m2)));
}

// Eigenvalue of h adiabatically connected to each basis state, assigned by
// largest overlap.
Eigen::VectorXd dressed_energies(const Operator& h) {
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  const int d = static_cast<int>(h.rows());
  Eigen::VectorXd out = Eigen::VectorXd::Constant(d, std::nan(""));
  for (int k = 0; k < d; ++k) {
    int best = 0;
    solver.eigenvectors().col(k).cwiseAbs().maxCoeff(&best);
    out(best) = solver.eigenvalues()(k);
  }
  return out;
}

}  // namespace

TEST(Shifts, LambdaFigureThree) {
  const DispersiveShifts s = dispersive_shifts(figure3());
  EXPECT_NEAR(s.chi_a, 0.1, 1e-15);
  EXPECT_NEAR(s.chi_b, 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(s.chi_a_prime, 1.0 / 150.0, 1e-15);
  EXPECT_NEAR(s.chi_b_prime, 1.0 / 189.0, 1e-15);
  EXPECT_NEAR(s.chi_a / s.chi_b, 1.1, 1e-14);
}

TEST(Shifts, VanishingCoupling) {
  SystemParams p = figure3();
  p.g_a = 0.0;
  const DispersiveShifts s = dispersive_shifts(p);
  EXPECT_EQ(s.chi_a, 0.0);
  EXPECT_EQ(s.chi_a_prime, 0.0);
  EXPECT_GT(s.chi_b, 0.0);
}

TEST(Shifts, ResonanceRejected) {
  SystemParams p = figure3();
  p.omega_e = 30.0;  // w_f - w_e - w_a = 0
  try {
    dispersive_shifts(p);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("resonant, dispersive theory invalid"), std::string::npos);
  }
}

TEST(Shifts, XiTable) {
  SystemParams p = figure3();
  p.qutrit = QutritType::Xi;
  p.omega_e = 80;
  p.omega_f = 180;
  const DispersiveShifts s = dispersive_shifts(p);
  EXPECT_NEAR(s.chi_a, 1.0 / (80 - 70), 1e-15);
  EXPECT_NEAR(s.chi_a_prime, 1.0 / (80 + 70), 1e-15);
  EXPECT_NEAR(s.chi_b, 1.0 / (180 - 80 - 89), 1e-15);
  EXPECT_NEAR(s.chi_b_prime, 1.0 / (180 - 80 + 89), 1e-15);
}

TEST(Shifts, DeltaStepFunctionSigns) {
  SystemParams p = figure3();
  p.qutrit = QutritType::Delta;
  const DispersiveShifts s = dispersive_shifts(p);
  // chi^a_fe: Theta(fe)=+1, w_f - w_e - w_a = 10
  EXPECT_NEAR(s.chi(0, Level::f, Level::e), 0.1, 1e-15);
  // chi^a_ef: Theta(ef)=-1, -(w_e - w_f - w_a) = 150
  EXPECT_NEAR(s.chi(0, Level::e, Level::f), 1.0 / 150.0, 1e-15);
  // chi^b_eg: Theta=+1, 20 - 0 - 89 = -69
  EXPECT_NEAR(s.chi(1, Level::e, Level::g), -1.0 / 69.0, 1e-15);
  EXPECT_EQ(s.chi_a, s.chi(0, Level::f, Level::e));
  EXPECT_EQ(s.chi_b_prime, s.chi(1, Level::g, Level::f));
}

TEST(Effective, GroundVacuum) {
  const SystemParams p = figure3();
  const DispersiveShifts s = dispersive_shifts(p);
  const Operator h = effective_hamiltonian(p);
  const CompositeSpace space = p.space();
  const int k = space.index(Level::g, 0, 0);
  EXPECT_NEAR(h(k, k).real(), -s.chi_b_prime, 1e-14);
}

TEST(Effective, ExcitedOnePhoton) {
  const SystemParams p = figure3();
  const Operator h = effective_hamiltonian(p);
  const CompositeSpace space = p.space();
  const int k = space.index(Level::e, 1, 0);
  EXPECT_NEAR(h(k, k).real(), 20.0 + 70.0 - 0.1 - 2.0 / 150.0, 1e-12);
  EXPECT_NEAR(h(k, k).real(), 89.88667, 1e-5);
  EXPECT_LT((h - Operator(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0 + 1e-300);
}

// Residual of second-order energies against exact diagonalization, fitted
// across couplings. Fourth order leaves a slope near 4.
double oracle_slope(QutritType type, double w_e, double w_f) {
  std::vector<double> gs = {0.05, 0.1, 0.2}, res;
  for (double g : gs) {
    SystemParams p = figure3(3);
    p.qutrit = type;
    p.omega_e = w_e;
    p.omega_f = w_f;
    p.g_a = p.g_b = g;
    const DispersiveShifts s = dispersive_shifts(p);
    const Eigen::VectorXd exact = dressed_energies(lab_hamiltonian(p));
    const Eigen::VectorXd approx = effective_energies(p, s);
    // Low-lying states only; the top of the truncation is distorted.
    const CompositeSpace space = p.space();
    double worst = 0.0;
    for (int k = 0; k < space.dim(); ++k) {
      const BasisLabel l = space.label(k);
      if (l.n > 1 || l.m > 1) continue;
      worst = std::max(worst, std::abs(exact(k) - approx(k)));
    }
    res.push_back(worst);
  }
  return std::log(res[2] / res[0]) / std::log(gs[2] / gs[0]);
}

TEST(PerturbationOracle, LambdaResidualFourthOrder) {
  const double slope = oracle_slope(QutritType::Lambda, 20, 100);
  EXPECT_GT(slope, 3.7);
  EXPECT_LT(slope, 4.3);
}

TEST(PerturbationOracle, XiResidualFourthOrder) {
  const double slope = oracle_slope(QutritType::Xi, 80, 180);
  EXPECT_GT(slope, 3.7);
  EXPECT_LT(slope, 4.3);
}

TEST(PerturbationOracle, DeltaResidualFourthOrder) {
  const double slope = oracle_slope(QutritType::Delta, 20, 100);
  EXPECT_GT(slope, 3.7);
  EXPECT_LT(slope, 4.3);
}

TEST(Lab, BareDiagonal) {
  SystemParams p = figure3();
  p.g_a = p.g_b = p.g_ab = 0.0;
  const Operator h = lab_hamiltonian(p);
  const CompositeSpace s = p.space();
  EXPECT_LT((h - Operator(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-300);
  const int k = s.index(Level::f, 1, 1);
  EXPECT_DOUBLE_EQ(h(k, k).real(), 100.0 + 70.0 + 89.0);
}

TEST(Lab, LambdaCouplingElement) {
  SystemParams p = figure3();
  p.g_a = 0.7;
  const Operator h = lab_hamiltonian(p);
  const CompositeSpace s = p.space();
  EXPECT_NEAR(element(h, s, Level::f, 0, 0, Level::e, 1, 0), 0.7, 1e-15);
  EXPECT_EQ(element(h, s, Level::e, 0, 0, Level::g, 1, 0), 0.0);
  EXPECT_LT(hermiticity_error(h), 1e-12);
}

TEST(Lab, CrosstalkElement) {
  SystemParams p = figure3();
  p.g_ab = 0.3;
  const Operator h = lab_hamiltonian(p);
  const CompositeSpace s = p.space();
  EXPECT_NEAR(element(h, s, Level::g, 1, 1, Level::g, 0, 0), 0.3, 1e-15);
  EXPECT_NEAR(element(h, s, Level::g, 1, 0, Level::g, 0, 1), 0.3, 1e-15);
}

TEST(Lab, HermitianAllTypes) {
  for (QutritType q : {QutritType::Lambda, QutritType::Delta, QutritType::Xi}) {
    SystemParams p = figure3();
    p.qutrit = q;
    if (q == QutritType::Xi) {
      p.omega_e = 80;
      p.omega_f = 180;
    }
    p.g_ab = 0.2;
    EXPECT_LT(hermiticity_error(lab_hamiltonian(p)), 1e-12);
  }
}

TEST(Drive, LambdaFrequencyExample) {
  const SystemParams p = figure3();
  const DispersiveShifts s = dispersive_shifts(p);
  const TargetSpec t = TargetSpec::pair(0, 1, 1, 0);
  const auto [w1, w2] = drive_frequencies(p, s, t);
  const double expect = 80.0 + (s.chi_a + s.chi_a_prime) + (s.chi_b + s.chi_b_prime) + s.chi_b;
  EXPECT_NEAR(w1, expect, 1e-12);
  EXPECT_NEAR(w1, 80.29378, 1e-5);
  const auto [d1, d2] = detunings(p, s, 0, 1, w1, w2);
  EXPECT_NEAR(d1, 0.0, 1e-12);
  EXPECT_NEAR(detunings(p, s, 1, 0, w1, w2).second, 0.0, 1e-12);
  (void)d2;
}

TEST(Drive, DetuningExampleAndLinearity) {
  const SystemParams p = figure3();
  const DispersiveShifts s = dispersive_shifts(p);
  const TargetSpec t = TargetSpec::pair(0, 1, 1, 0);
  const auto [w1, w2] = drive_frequencies(p, s, t);
  const double sa = s.chi_a + s.chi_a_prime, sb = s.chi_b + s.chi_b_prime;
  EXPECT_NEAR(detunings(p, s, 1, 0, w1, w2).first, 2 * sa - sb, 1e-12);
  EXPECT_NEAR(2 * sa - sb, 0.117134, 1e-6);
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      const double step = detunings(p, s, n + 1, m, w1, w2).first - detunings(p, s, n, m, w1, w2).first;
      EXPECT_NEAR(step, 2 * sa, 1e-12);
    }
  }
}

TEST(Drive, DetuningsAgreeWithDressedGaps) {
  const SystemParams p = figure3();
  const DispersiveShifts s = dispersive_shifts(p);
  const ProtocolLevels lv = protocol_levels(p.qutrit);
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 4; ++m) {
      const auto [d1, d2] = detunings(p, s, n, m, 80.0, 100.0);
      EXPECT_NEAR(d1, transition_detuning(p, s, lv.tone_1, n, m, 80.0), 1e-11);
      EXPECT_NEAR(d2, transition_detuning(p, s, lv.tone_2, n, m, 100.0), 1e-11);
    }
  }
}

TEST(Drive, SelfConsistencyAllTypes) {
  for (QutritType q : {QutritType::Lambda, QutritType::Delta, QutritType::Xi}) {
    SystemParams p = figure3(8);
    p.qutrit = q;
    if (q == QutritType::Xi) {
      p.omega_e = 80;
      p.omega_f = 180;
    }
    const DispersiveShifts s = dispersive_shifts(p);
    const ProtocolLevels lv = protocol_levels(q);
    for (int N = 1; N <= 5; ++N) {
      const TargetSpec t = TargetSpec::noon(N);
      const auto [w1, w2] = planned_drive_frequencies(p, s, t);
      EXPECT_NEAR(transition_detuning(p, s, lv.tone_1, t.n_1, t.m_1, w1), 0.0, 1e-11) << to_string(q) << N;
      EXPECT_NEAR(transition_detuning(p, s, lv.tone_2, t.n_2, t.m_2, w2), 0.0, 1e-11) << to_string(q) << N;
    }
  }
}

TEST(Drive, XiMatchesDressedDifferences) {
  SystemParams p = figure3(6);
  p.qutrit = QutritType::Xi;
  p.omega_e = 80;
  p.omega_f = 180;
  const DispersiveShifts s = dispersive_shifts(p);
  const TargetSpec t = TargetSpec::pair(2, 0, 0, 3);
  const auto [w1, w2] = xi_drive_frequencies(p, s, t);
  const Operator h = effective_hamiltonian(p);
  const CompositeSpace sp = p.space();
  auto e = [&](Level l, int n, int m) { return h(sp.index(l, n, m), sp.index(l, n, m)).real(); };
  EXPECT_NEAR(w1, e(Level::e, 2, 0) - e(Level::g, 2, 0), 1e-12);
  EXPECT_NEAR(w2, e(Level::f, 0, 3) - e(Level::e, 0, 3), 1e-12);
}

TEST(Drive, XiBareGaps) {
  SystemParams p = figure3();
  p.qutrit = QutritType::Xi;
  p.omega_e = 80;
  p.omega_f = 180;
  p.g_a = p.g_b = 0.0;
  const auto [w1, w2] = xi_drive_frequencies(p, dispersive_shifts(p), TargetSpec::noon(2));
  EXPECT_DOUBLE_EQ(w1, 80.0);
  EXPECT_DOUBLE_EQ(w2, 100.0);
}

TEST(Drive, DeltaReducesToLambda) {
  SystemParams p = figure3();
  p.qutrit = QutritType::Delta;
  DispersiveShifts d = dispersive_shifts(p);
  // Keep only the Lambda-like entries of the table.
  for (int l = 0; l < 2; ++l)
    for (auto& row : d.table[l]) row.fill(0.0);
  d.table[0][2][1] = d.chi_a;
  d.table[0][1][2] = d.chi_a_prime;
  d.table[1][2][0] = d.chi_b;
  d.table[1][0][2] = d.chi_b_prime;
  DispersiveShifts lam = d;
  lam.qutrit = QutritType::Lambda;
  SystemParams pl = p;
  pl.qutrit = QutritType::Lambda;
  for (int N = 1; N <= 4; ++N) {
    const TargetSpec t = TargetSpec::noon(N);
    const auto [a1, a2] = drive_frequencies(p, d, t);
    const auto [b1, b2] = drive_frequencies(pl, lam, t);
    EXPECT_NEAR(a1, b1, 1e-12);
    EXPECT_NEAR(a2, b2, 1e-12);
  }
}

TEST(Rotating, ResonantElementAndIntensityError) {
  const SystemParams p = figure3();
  const TargetSpec t = TargetSpec::noon(1);
  const DispersiveShifts s = dispersive_shifts(p);
  DriveSpec d;
  d.Omega = 1e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, s, t);
  const CompositeSpace sp = p.space();
  Operator h = rotating_drive_hamiltonian(0.0, p, d);
  EXPECT_NEAR(element(h, sp, Level::f, t.n_1, t.m_1, Level::e, t.n_1, t.m_1), 1e-3, 1e-15);
  d.epsilon = 0.1;
  h = rotating_drive_hamiltonian(0.0, p, d);
  EXPECT_NEAR(element(h, sp, Level::f, t.n_2, t.m_2, Level::g, t.n_2, t.m_2), 1.1e-3, 1e-15);
  EXPECT_NEAR(element(h, sp, Level::f, t.n_1, t.m_1, Level::e, t.n_1, t.m_1), 0.9e-3, 1e-15);
}

TEST(Rotating, HermitianAtSampledTimes) {
  for (QutritType q : {QutritType::Lambda, QutritType::Delta, QutritType::Xi}) {
    SystemParams p = figure3();
    p.qutrit = q;
    if (q == QutritType::Xi) {
      p.omega_e = 80;
      p.omega_f = 180;
    }
    p.g_ab = 0.1;
    DriveSpec d;
    d.Omega = 2e-3;
    std::tie(d.omega_1, d.omega_2) = planned_drive_frequencies(p, dispersive_shifts(p), TargetSpec::noon(2));
    d.epsilon_prime = 3e-5;
    const PhasedOperator h = rotating_frame_hamiltonian(p, d);
    for (double t : {0.0, 13.7, 512.3, 1e4}) EXPECT_LT(hermiticity_error(h.dense(t)), 1e-12);
  }
}

TEST(Rotating, OffResonantAverageSmall) {
  const SystemParams p = figure3();
  const TargetSpec t = TargetSpec::noon(1);
  const DispersiveShifts s = dispersive_shifts(p);
  DriveSpec d;
  d.Omega = 1e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, s, t);
  const PhasedOperator h = rotating_frame_hamiltonian(p, d);
  const CompositeSpace sp = p.space();
  const int r = sp.index(Level::f, 2, 2), c = sp.index(Level::e, 2, 2);
  const double delta = std::abs(detunings(p, s, 2, 2, d.omega_1, d.omega_2).first);
  const double T = 2000.0;
  const int samples = 200000;
  Complex avg{};
  for (int k = 0; k < samples; ++k) avg += h.dense((k + 0.5) * T / samples)(r, c);
  avg /= double(samples);
  EXPECT_LT(std::abs(avg), d.Omega * 2.0 / (delta * T));
}

TEST(Rotating, FrequencyErrorPhase) {
  const SystemParams p = figure3();
  const TargetSpec t = TargetSpec::noon(1);
  DriveSpec d;
  d.Omega = 1e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, dispersive_shifts(p), t);
  d.epsilon_prime = 1e-5;
  const PhasedOperator h = rotating_frame_hamiltonian(p, d);
  const CompositeSpace sp = p.space();
  const double tt = 321.0;
  const Complex v = h.dense(tt)(sp.index(Level::f, t.n_1, t.m_1), sp.index(Level::e, t.n_1, t.m_1));
  EXPECT_NEAR(std::abs(v - d.Omega * std::exp(-kI * d.omega_1 * d.epsilon_prime * tt)), 0.0, 1e-12);
}

TEST(Rotating, DriveFrameAgreesWithRotatingFrame) {
  SystemParams p = figure3(3);
  p.g_ab = 0.05;
  DriveSpec d;
  d.Omega = 1e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, dispersive_shifts(p), TargetSpec::noon(1));
  const PhasedOperator h = rotating_frame_hamiltonian(p, d);
  const Operator hd = drive_frame_hamiltonian(p, d);
  EXPECT_LT(hermiticity_error(hd), 1e-12);
  // H_rot(t) = U(t) H_drive U(t)^dag - diag(E - R) with U = exp(i (E - R) t).
  const DispersiveShifts s = dispersive_shifts(p);
  const Eigen::VectorXd e = effective_energies(p, s);
  const auto r = drive_frame_levels(p, d);
  const CompositeSpace sp = p.space();
  Eigen::VectorXd phase(sp.dim());
  for (int k = 0; k < sp.dim(); ++k) phase(k) = e(k) - r[static_cast<int>(sp.label(k).level)];
  const double t = 77.0;
  const Eigen::VectorXcd u = (kI * t * phase.cast<Complex>()).array().exp().matrix();
  Operator rebuilt = u.asDiagonal() * hd * u.conjugate().asDiagonal();
  rebuilt -= Operator(phase.cast<Complex>().asDiagonal());
  EXPECT_LT((rebuilt - h.dense(t)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Target, ValidationErrors) {
  EXPECT_THROW(validate(TargetSpec::pair(1, 0, 1, 1), {5, 5}), InvalidArgument);
  EXPECT_THROW(validate(TargetSpec::noon(6), {5, 5}), InvalidArgument);
  EXPECT_NO_THROW(validate(TargetSpec::noon(5), {5, 5}));
}

TEST(Target, DefaultTruncationMeetsTail) {
  for (int N = 1; N <= 5; ++N) {
    const ModeTruncation tr = default_truncation(TargetSpec::noon(N));
    EXPECT_GE(tr.n_max_a, N + 8);
    EXPECT_LT(coherent_tail(1.0, tr.n_max_a), kDefaultTailTolerance);
  }
}

TEST(Regime, WarningNotError) {
  SystemParams p = figure3();
  p.omega_e = 28.0;  // w_f - w_e - w_a = 2, g/2 = 0.5
  EXPECT_FALSE(dispersive_regime_warnings(p).empty());
  EXPECT_NO_THROW(dispersive_shifts(p));
  EXPECT_TRUE(dispersive_regime_warnings(figure3()).empty());
}
