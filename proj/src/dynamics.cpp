#include "entangler/dynamics.hpp"

#include "entangler/error.hpp"

#include <cmath>
#include <sstream>

namespace entangler {

namespace {

[[noreturn]] void drift_failure(const char* what, double value, double t) {
  std::ostringstream msg;
  msg << "step size too large: " << what << " drift " << value << " at t=" << t;
  throw NumericalError(msg.str());
}

// Classical RK4 with H(t) values evaluated once per distinct time.
template <class Y, class Rhs, class Check>
void integrate(const PhasedOperator& h, Y& y, double t0, const StepPlan& plan, int monitor_every, Rhs&& rhs,
               Check&& check) {
  std::vector<Complex> v0(h.size()), vh(h.size()), v1(h.size());
  Y k1, k2, k3, k4, tmp;
  const double dt = plan.dt;
  h.evaluate(t0, v0);
  for (long s = 0; s < plan.steps; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    h.evaluate(t + 0.5 * dt, vh);
    h.evaluate(t + dt, v1);
    rhs(v0, y, k1);
    tmp = y + (0.5 * dt) * k1;
    rhs(vh, tmp, k2);
    tmp = y + (0.5 * dt) * k2;
    rhs(vh, tmp, k3);
    tmp = y + dt * k3;
    rhs(v1, tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    std::swap(v0, v1);
    if ((s + 1) % monitor_every == 0 || s + 1 == plan.steps) check(t + dt, y);
  }
}

void check_monitor(const IntegratorConfig& cfg) {
  if (cfg.monitor_every < 1) throw InvalidArgument("monitor_every must be >= 1");
  if (cfg.dt < 0) throw InvalidArgument("dt must be non-negative");
}

}  // namespace

StepPlan plan_steps(double f_max, double duration, const IntegratorConfig& cfg) {
  check_monitor(cfg);
  if (!(duration >= 0)) throw InvalidArgument("duration must be non-negative");
  if (duration == 0.0) return {0.0, 0};
  double bound = duration / 1000.0;
  if (f_max > 0) bound = std::min(bound, 2.0 * kPi / (20.0 * f_max));
  double dt = bound;
  if (cfg.dt > 0) {
    if (cfg.enforce_step_bound && cfg.dt > bound * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "dt=" << cfg.dt << " exceeds the step bound " << bound;
      throw InvalidArgument(msg.str());
    }
    dt = cfg.dt;
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(duration / dt - 1e-9)));
  return {duration / static_cast<double>(steps), steps};
}

void validate(const DecoherenceRates& rates) {
  if (rates.gamma < 0 || rates.kappa_a_value() < 0 || rates.kappa_b_value() < 0) {
    throw InvalidArgument("decoherence rates must be non-negative");
  }
}

std::vector<RateOperator> collapse_channels(const SystemParams& params, const DecoherenceRates& rates) {
  validate(rates);
  const auto& tr = params.truncation;
  const Operator ia = identity(tr.n_max_a + 1);
  const Operator ib = identity(tr.n_max_b + 1);
  const Operator iq = identity(kQutritDim);
  auto qutrit = [&](Level k, Level j) { return embed(qutrit_projector(k, j), ia, ib); };

  std::vector<RateOperator> out;
  out.push_back({rates.gamma, qutrit(Level::e, Level::f), "e<-f"});
  if (params.qutrit != QutritType::Xi) out.push_back({rates.gamma, qutrit(Level::g, Level::f), "g<-f"});
  if (params.qutrit != QutritType::Lambda) out.push_back({rates.gamma, qutrit(Level::g, Level::e), "g<-e"});
  out.push_back({rates.gamma, qutrit(Level::e, Level::e), "dephase e"});
  out.push_back({rates.gamma, qutrit(Level::f, Level::f), "dephase f"});
  out.push_back({rates.kappa_a_value(), embed(iq, ladder_operator(tr.n_max_a), ib), "a"});
  out.push_back({rates.kappa_b_value(), embed(iq, ia, ladder_operator(tr.n_max_b)), "b"});
  return out;
}

DensityMatrix dissipator(const Operator& o, const DensityMatrix& rho) {
  if (o.rows() != o.cols() || o.rows() != rho.rows() || rho.rows() != rho.cols()) {
    throw InvalidArgument("dissipator: dimension mismatch");
  }
  const Operator odo = o.adjoint() * o;
  return o * rho * o.adjoint() - 0.5 * (odo * rho + rho * odo);
}

StateVector propagate_state(const PhasedOperator& h, const StateVector& psi0, double duration,
                            const IntegratorConfig& cfg, double t0, const StateObserver& observer) {
  if (psi0.size() != h.dim()) throw InvalidArgument("propagate_state: dimension mismatch");
  const double norm0 = psi0.norm();
  if (std::abs(norm0 - 1.0) > 1e-9) throw InvalidArgument("propagate_state: initial state not normalized");
  const StepPlan plan = plan_steps(h.max_frequency(), duration, cfg);
  StateVector psi = psi0;
  if (observer) observer(t0, psi);
  auto rhs = [&h](const std::vector<Complex>& values, const StateVector& y, StateVector& out) {
    out.resize(y.size());
    kernels::matvec(h, values, y.data(), out.data());
    out *= -kI;
  };
  auto check = [&](double t, const StateVector& y) {
    const double drift = std::abs(y.norm() - norm0);
    if (drift > cfg.norm_tolerance) drift_failure("norm", drift, t);
    if (observer) observer(t, y);
  };
  integrate(h, psi, t0, plan, cfg.monitor_every, rhs, check);
  return psi;
}

namespace {

template <class Rhs>
DensityMatrix run_density(const PhasedOperator& h, const DensityMatrix& rho0, double duration,
                          const IntegratorConfig& cfg, double t0, Rhs&& rhs, const DensityObserver& observer) {
  if (rho0.rows() != h.dim() || rho0.cols() != h.dim()) throw InvalidArgument("propagate_density: dimension mismatch");
  const Complex trace0 = rho0.trace();
  if (std::abs(trace0 - 1.0) > 1e-9) throw InvalidArgument("propagate_density: initial trace must be 1");
  if (hermiticity_error(rho0) > 1e-10) throw InvalidArgument("propagate_density: initial state not Hermitian");
  const StepPlan plan = plan_steps(h.max_frequency(), duration, cfg);
  DensityMatrix rho = rho0;
  if (observer) observer(t0, rho);
  auto check = [&](double t, const DensityMatrix& y) {
    const double tdrift = std::abs(y.trace() - trace0);
    if (tdrift > cfg.trace_tolerance) drift_failure("trace", tdrift, t);
    const double herr = hermiticity_error(y);
    if (herr > cfg.hermiticity_tolerance) drift_failure("hermiticity", herr, t);
    if (observer) observer(t, y);
  };
  integrate(h, rho, t0, plan, cfg.monitor_every, rhs, check);
  const double min_eig = Eigen::SelfAdjointEigenSolver<DensityMatrix>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (min_eig < -cfg.positivity_tolerance) drift_failure("positivity", min_eig, t0 + duration);
  return rho;
}

}  // namespace

DensityMatrix propagate_density(const PhasedOperator& h, const std::vector<RateOperator>& channels,
                                const DensityMatrix& rho0, double duration, const IntegratorConfig& cfg, double t0,
                                const DensityObserver& observer) {
  const SparseLindblad model = make_sparse_lindblad(h, channels);
  DensityMatrix scratch;
  auto rhs = [&](const std::vector<Complex>& values, const DensityMatrix& y, DensityMatrix& out) {
    kernels::lindblad_rhs(model, values, y, out, scratch);
  };
  return run_density(h, rho0, duration, cfg, t0, rhs, observer);
}

DensityMatrix propagate_density_reference(const PhasedOperator& h, const std::vector<RateOperator>& channels,
                                          const DensityMatrix& rho0, double duration, const IntegratorConfig& cfg,
                                          double t0) {
  std::vector<RateOperator> active;
  for (const auto& ch : channels) {
    if (ch.rate > 0) active.push_back(ch);
  }
  // Dense H(t) rebuilt from the term values at each stage.
  const auto terms = h.terms();
  auto rhs = [&](const std::vector<Complex>& values, const DensityMatrix& y, DensityMatrix& out) {
    Operator hd = Operator::Zero(h.dim(), h.dim());
    for (std::size_t k = 0; k < terms.size(); ++k) hd(terms[k].row, terms[k].col) += values[k];
    out = reference::lindblad_rhs(hd, active, y);
  };
  return run_density(h, rho0, duration, cfg, t0, rhs, {});
}

Eigen::VectorXcd propagate_reduced(const ReducedLindblad& model, const PhasedOperator& h, const Eigen::VectorXcd& x0,
                                   double duration, const IntegratorConfig& cfg, double t0,
                                   const ReducedObserver& observer) {
  if (static_cast<std::size_t>(x0.size()) != model.size() || model.dim() != h.dim()) {
    throw InvalidArgument("propagate_reduced: dimension mismatch");
  }
  const StepPlan plan = plan_steps(h.max_frequency(), duration, cfg);
  const Complex trace0 = model.tracks_trace() ? model.trace(x0) : Complex{};
  Eigen::VectorXcd x = x0;
  if (observer) observer(t0, x);
  auto rhs = [&](const std::vector<Complex>& values, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
    model.apply(values, y, out);
  };
  auto check = [&](double t, const Eigen::VectorXcd& y) {
    if (model.tracks_trace()) {
      const double tdrift = std::abs(model.trace(y) - trace0);
      if (tdrift > cfg.trace_tolerance) drift_failure("trace", tdrift, t);
    }
    const double herr = model.hermiticity_error(y);
    if (herr > cfg.hermiticity_tolerance) drift_failure("hermiticity", herr, t);
    if (observer) observer(t, y);
  };
  integrate(h, x, t0, plan, cfg.monitor_every, rhs, check);
  return x;
}

StateVector propagate_static(const Operator& h, const StateVector& psi0, double duration) {
  if (h.rows() != h.cols() || h.rows() != psi0.size()) throw InvalidArgument("propagate_static: dimension mismatch");
  if (hermiticity_error(h) > 1e-10) throw InvalidArgument("propagate_static: Hamiltonian not Hermitian");
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXcd phases = (-kI * duration * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
  const StateVector coeffs = solver.eigenvectors().adjoint() * psi0;
  return solver.eigenvectors() * phases.asDiagonal() * coeffs;
}

}  // namespace entangler
