#include "entangler/dynamics.hpp"
#include "entangler/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace entangler;

namespace {

// Two-level block {|lower>, |upper>} = {0, 1}: <1|H|0> = Omega exp(-i delta t).
PhasedOperator two_level(double omega, double delta) {
  PhasedOperatorBuilder b(2);
  b.add_hermitian_pair(1, 0, omega, -delta);
  return std::move(b).build();
}

StateVector basis(int d, int k) {
  StateVector v = StateVector::Zero(d);
  v(k) = 1.0;
  return v;
}

double appendix_population(double delta, double omega, double t) {
  const double e = std::sqrt(omega * omega + delta * delta / 4.0);
  const double two_theta = std::atan2(2.0 * omega, delta);
  return std::pow(std::sin(e * t), 2) * std::pow(std::sin(two_theta), 2);
}

SystemParams small_lambda(int cutoff) {
  SystemParams p;
  p.truncation = {cutoff, cutoff};
  return p;
}

}  // namespace

TEST(PlanSteps, RespectsBothBounds) {
  IntegratorConfig cfg;
  StepPlan s = plan_steps(0.0, 1000.0, cfg);
  EXPECT_EQ(s.steps, 1000);
  s = plan_steps(10.0, 1000.0, cfg);
  EXPECT_LE(s.dt, 2 * kPi / 200.0 + 1e-15);
  EXPECT_NEAR(s.dt * s.steps, 1000.0, 1e-9);
  cfg.dt = 1.0;
  EXPECT_THROW(plan_steps(10.0, 1000.0, cfg), InvalidArgument);
  cfg.enforce_step_bound = false;
  EXPECT_EQ(plan_steps(10.0, 1000.0, cfg).steps, 1000);
}

TEST(PropagateState, ResonantHalfRabi) {
  const double omega = 1e-3;
  const StateVector psi = propagate_state(two_level(omega, 0.0), basis(2, 0), kPi / (2 * omega));
  EXPECT_LT(std::abs(psi(1) - Complex(0, -1)), 1e-8);
  EXPECT_LT(std::abs(psi(0)), 1e-8);
}

TEST(PropagateState, DetunedBlockMatchesClosedForm) {
  const double omega = 1e-3;
  for (double delta : {5e-4, 2e-3, 1e-2, 0.1}) {
    const double t = kPi / (2 * omega);
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    const StateVector psi = propagate_state(two_level(omega, delta), basis(2, 0), t, cfg);
    EXPECT_NEAR(std::norm(psi(1)), appendix_population(delta, omega, t), 1e-8) << delta;
  }
}

TEST(PropagateState, ZeroHamiltonian) {
  const PhasedOperator zero(3, {});
  StateVector psi(3);
  psi << Complex(0.6, 0), Complex(0, 0.8), 0;
  EXPECT_EQ(propagate_state(zero, psi, 50.0), psi);
}

TEST(PropagateState, RejectsUnnormalized) {
  EXPECT_THROW(propagate_state(two_level(1e-3, 0), 2.0 * basis(2, 0), 1.0), InvalidArgument);
}

TEST(PropagateState, DriftGuardFires) {
  IntegratorConfig cfg;
  cfg.dt = 2.5;
  cfg.enforce_step_bound = false;
  cfg.monitor_every = 1;
  try {
    propagate_state(two_level(1.0, 0.0), basis(2, 0), 100.0, cfg);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step size too large"), std::string::npos);
  }
}

TEST(PropagateState, DecoupledSectorsStayPut) {
  // Only tone 1's transition, so g-level sectors are untouched.
  SystemParams p = small_lambda(5);
  const TargetSpec t = TargetSpec::noon(1);
  DriveSpec d;
  d.Omega = 3e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, dispersive_shifts(p), t);
  const PhasedOperator h = rotating_frame_hamiltonian(p, d, {true, false});
  const CompositeSpace s = p.space();
  std::mt19937 rng(1);
  std::normal_distribution<double> n;
  StateVector psi(s.dim());
  for (auto& v : psi) v = {n(rng), n(rng)};
  psi.normalize();
  const StateVector out = propagate_state(h, psi, kPi / (2 * d.Omega));
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; b <= 5; ++b) {
      const int k = s.index(Level::g, a, b);
      EXPECT_NEAR(std::norm(out(k)), std::norm(psi(k)), 1e-9);
    }
  }
}

TEST(PropagateState, FourthOrderConvergence) {
  SystemParams p;
  const TargetSpec t = TargetSpec::noon(1);
  p.truncation = default_truncation(t);
  DriveSpec d;
  d.Omega = 5e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, dispersive_shifts(p), t);
  const PhasedOperator h = rotating_frame_hamiltonian(p, d);
  const CompositeSpace s = p.space();
  StateVector psi0 = StateVector::Zero(s.dim());
  psi0(s.index(Level::e, 1, 0)) = std::sqrt(0.5);
  psi0(s.index(Level::g, 0, 1)) = std::sqrt(0.5);
  const double T = kPi / (2 * d.Omega);
  auto run = [&](double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.enforce_step_bound = false;
    cfg.norm_tolerance = 1e-3;
    return propagate_state(h, psi0, T, cfg);
  };
  const double dt = 0.8;
  const StateVector ref = run(dt / 4);
  const double e1 = (run(dt) - ref).norm();
  const double e2 = (run(dt / 2) - ref).norm();
  EXPECT_GE(e1 / e2, 14.0) << e1 << " " << e2;
}

TEST(Dissipator, UnitaryOnMaximallyMixed) {
  Operator u = Operator::Zero(3, 3);
  u(0, 1) = u(1, 2) = u(2, 0) = 1.0;
  EXPECT_LT(dissipator(u, Operator::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Dissipator, DecayFromF) {
  const DensityMatrix out = dissipator(qutrit_projector(Level::e, Level::f), qutrit_projector(Level::f, Level::f));
  const Operator expect = qutrit_projector(Level::e, Level::e) - qutrit_projector(Level::f, Level::f);
  EXPECT_LT((out - expect).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Dissipator, TracelessAndLinear) {
  std::mt19937 rng(9);
  std::normal_distribution<double> n;
  auto rnd = [&] {
    Operator x(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x(i, j) = {n(rng), n(rng)};
    return x;
  };
  for (int k = 0; k < 5; ++k) {
    const Operator o = rnd(), r1 = rnd(), r2 = rnd();
    EXPECT_LT(std::abs(dissipator(o, r1).trace()), 1e-12);
    EXPECT_LT((dissipator(o, r1 + 2.0 * r2) - dissipator(o, r1) - 2.0 * dissipator(o, r2)).cwiseAbs().maxCoeff(),
              1e-12);
  }
  EXPECT_THROW(dissipator(Operator::Identity(3, 3), Operator::Identity(4, 4)), InvalidArgument);
}

TEST(PropagateDensity, ClosedSystemMatchesState) {
  SystemParams p = small_lambda(4);
  DriveSpec d;
  d.Omega = 5e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, dispersive_shifts(p), TargetSpec::noon(1));
  const PhasedOperator h = rotating_frame_hamiltonian(p, d);
  const CompositeSpace s = p.space();
  StateVector psi0 = StateVector::Zero(s.dim());
  psi0(s.index(Level::e, 1, 0)) = std::sqrt(0.5);
  psi0(s.index(Level::g, 0, 1)) = std::sqrt(0.5);
  const double T = kPi / (2 * d.Omega);
  const StateVector psi = propagate_state(h, psi0, T);
  const DensityMatrix rho = propagate_density(h, collapse_channels(p, {}), outer(psi0), T);
  EXPECT_LT((rho - outer(psi)).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_GT((psi.adjoint() * rho * psi)(0).real(), 1.0 - 1e-7);
}

TEST(PropagateDensity, ModeDecay) {
  const int c = 3;
  const PhasedOperator zero(c + 1, {});
  const double kappa = 0.01;
  const std::vector<RateOperator> ch = {{kappa, ladder_operator(c), "a"}};
  DensityMatrix rho0 = DensityMatrix::Zero(c + 1, c + 1);
  rho0(1, 1) = 1.0;
  const double t = 70.0;
  const DensityMatrix rho = propagate_density(zero, ch, rho0, t);
  EXPECT_NEAR(rho(1, 1).real(), std::exp(-kappa * t), 1e-6);
  EXPECT_NEAR(rho(0, 0).real(), 1.0 - std::exp(-kappa * t), 1e-6);
}

TEST(PropagateDensity, Dephasing) {
  const PhasedOperator zero(3, {});
  const double gamma = 0.02;
  const std::vector<RateOperator> ch = {{gamma, qutrit_projector(Level::e, Level::e), "dephase e"}};
  DensityMatrix rho0 = DensityMatrix::Constant(3, 3, 0.0);
  rho0(0, 0) = rho0(1, 1) = rho0(0, 1) = rho0(1, 0) = 0.5;
  const double t = 40.0;
  const DensityMatrix rho = propagate_density(zero, ch, rho0, t);
  EXPECT_NEAR(std::abs(rho(1, 0)), 0.5 * std::exp(-gamma * t / 2), 1e-6);
  EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-12);
}

TEST(PropagateDensity, InvariantsUnderDecoherence) {
  SystemParams p = small_lambda(4);
  DriveSpec d;
  d.Omega = 5e-3;
  std::tie(d.omega_1, d.omega_2) = drive_frequencies(p, dispersive_shifts(p), TargetSpec::noon(2));
  const PhasedOperator h = rotating_frame_hamiltonian(p, d);
  DecoherenceRates r;
  r.gamma = 1e-3;
  std::mt19937 rng(2);
  std::normal_distribution<double> n;
  const int dim = p.space().dim();
  Operator x(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) x(i, j) = {n(rng), n(rng)};
  DensityMatrix rho0 = x * x.adjoint();
  rho0 /= rho0.trace();
  double worst_trace = 0, worst_herm = 0;
  IntegratorConfig cfg;
  cfg.monitor_every = 50;
  propagate_density(h, collapse_channels(p, r), rho0, 300.0, cfg, 0.0, [&](double, const DensityMatrix& rho) {
    worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
    worst_herm = std::max(worst_herm, hermiticity_error(rho));
  });
  EXPECT_LT(worst_trace, 1e-7);
  EXPECT_LT(worst_herm, 1e-9);
}

TEST(PropagateDensity, RejectsBadInput) {
  const PhasedOperator zero(2, {});
  EXPECT_THROW(propagate_density(zero, {}, 2.0 * Operator::Identity(2, 2), 1.0), InvalidArgument);
  Operator nh = Operator::Zero(2, 2);
  nh(0, 0) = 1.0;
  nh(0, 1) = 0.3;
  EXPECT_THROW(propagate_density(zero, {}, nh, 1.0), InvalidArgument);
}

TEST(Channels, PerQutritType) {
  SystemParams p = small_lambda(2);
  DecoherenceRates r;
  r.gamma = 1e-3;
  auto names = [&] {
    std::vector<std::string> out;
    for (const auto& c : collapse_channels(p, r)) out.push_back(c.name);
    return out;
  };
  EXPECT_EQ(names(), (std::vector<std::string>{"e<-f", "g<-f", "dephase e", "dephase f", "a", "b"}));
  p.qutrit = QutritType::Delta;
  EXPECT_EQ(names(), (std::vector<std::string>{"e<-f", "g<-f", "g<-e", "dephase e", "dephase f", "a", "b"}));
  p.qutrit = QutritType::Xi;
  EXPECT_EQ(names(), (std::vector<std::string>{"e<-f", "g<-e", "dephase e", "dephase f", "a", "b"}));
  const auto ch = collapse_channels(p, r);
  EXPECT_DOUBLE_EQ(ch.back().rate, 1e-4);
  r.gamma = -1;
  EXPECT_THROW(collapse_channels(p, r), InvalidArgument);
}

TEST(PropagateStatic, MatchesRk4) {
  Operator h(2, 2);
  h << 0.1, Complex(0.02, 0.01), Complex(0.02, -0.01), -0.05;
  const StateVector psi0 = basis(2, 0);
  const StateVector a = propagate_static(h, psi0, 300.0);
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  const StateVector b = propagate_state(PhasedOperator::from_dense(h), psi0, 300.0, cfg);
  EXPECT_LT((a - b).norm(), 1e-9);
}
