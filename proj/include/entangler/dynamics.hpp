// dynamics.hpp: fixed-step RK4 propagation of states and density matrices
// under a PhasedOperator Hamiltonian, with conservation monitoring.
#pragma once

#include "entangler/hamiltonian.hpp"
#include "entangler/kernels.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace entangler {

struct IntegratorConfig {
  double dt = 0.0;  // 0 selects the automatic bound
  int monitor_every = 100;
  // When false an explicit dt may exceed min(2 pi / (20 f_max), T / 1000);
  // only convergence studies turn this off.
  bool enforce_step_bound = true;
  double norm_tolerance = 1e-9;
  double trace_tolerance = 1e-7;
  double hermiticity_tolerance = 1e-9;
  double positivity_tolerance = 1e-6;
};

struct StepPlan {
  double dt = 0.0;
  long steps = 0;
};

// Uniform steps covering T with dt <= the requested (or automatic) step.
StepPlan plan_steps(double f_max, double duration, const IntegratorConfig& cfg);

struct DecoherenceRates {
  double gamma = 0.0;
  std::optional<double> kappa_a;  // default 0.1 gamma
  std::optional<double> kappa_b;

  double kappa_a_value() const { return kappa_a.value_or(0.1 * gamma); }
  double kappa_b_value() const { return kappa_b.value_or(0.1 * gamma); }
  bool any() const { return gamma > 0 || kappa_a_value() > 0 || kappa_b_value() > 0; }
};

void validate(const DecoherenceRates& rates);

// Lambda: e<-f, g<-f, dephasing e, dephasing f, a, b.
// Delta adds g<-e; Xi swaps g<-f for g<-e.
std::vector<RateOperator> collapse_channels(const SystemParams& params, const DecoherenceRates& rates);

// L[o] rho = o rho o^dag - 1/2 {o^dag o, rho}
DensityMatrix dissipator(const Operator& o, const DensityMatrix& rho);

using StateObserver = std::function<void(double t, const StateVector& psi)>;
using DensityObserver = std::function<void(double t, const DensityMatrix& rho)>;
using ReducedObserver = std::function<void(double t, const Eigen::VectorXcd& x)>;

// i d psi/dt = H(t) psi from t0 to t0 + T. Throws NumericalError
// ("step size too large") when the norm drifts beyond tolerance.
StateVector propagate_state(const PhasedOperator& h, const StateVector& psi0, double duration,
                            const IntegratorConfig& cfg = {}, double t0 = 0.0, const StateObserver& observer = {});

// Full density-matrix Lindblad propagation using the sparse kernels.
DensityMatrix propagate_density(const PhasedOperator& h, const std::vector<RateOperator>& channels,
                                const DensityMatrix& rho0, double duration, const IntegratorConfig& cfg = {},
                                double t0 = 0.0, const DensityObserver& observer = {});

// Same integrator on the dense serial reference right-hand side.
DensityMatrix propagate_density_reference(const PhasedOperator& h, const std::vector<RateOperator>& channels,
                                          const DensityMatrix& rho0, double duration,
                                          const IntegratorConfig& cfg = {}, double t0 = 0.0);

// Propagation of the tracked entries only. Trace is monitored when the
// reduced set holds the whole diagonal.
Eigen::VectorXcd propagate_reduced(const ReducedLindblad& model, const PhasedOperator& h, const Eigen::VectorXcd& x0,
                                   double duration, const IntegratorConfig& cfg = {}, double t0 = 0.0,
                                   const ReducedObserver& observer = {});

// exp(-i H T) psi0 for a static Hermitian H, by eigendecomposition.
StateVector propagate_static(const Operator& h, const StateVector& psi0, double duration);

}  // namespace entangler
