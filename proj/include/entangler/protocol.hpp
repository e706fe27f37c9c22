// protocol.hpp: the two-step preparation. Step 1 drives the qutrit with two
// Fock-selective tones for pi/(2 Omega); step 2 projects the qutrit onto the
// measured level and keeps the resonator state.
#pragma once

#include "entangler/dynamics.hpp"
#include "entangler/hamiltonian.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace entangler {

struct MeasurementSpec {
  // Unset: f for Lambda/Delta, e for Xi.
  std::optional<Level> level;
  // |L'> = cos t1 |L> + sin t1 sin t2 |u> + sin t1 cos t2 |g-or-e>, where for
  // L = f, u = e and the last level is g; for L = e, u = f and the last is g;
  // for L = g, u = f and the last is e.
  double theta_1 = 0.0;
  double theta_2 = 0.0;
};

void validate(const MeasurementSpec& measurement);

Level measured_level(const MeasurementSpec& measurement, QutritType type);

// Qutrit amplitudes (g, e, f) of the projector ket |L'>.
std::array<double, kQutritDim> measurement_ket(const MeasurementSpec& measurement, Level level);

struct MeasuredState {
  DensityMatrix rho;                 // resonator state, normalized
  std::optional<StateVector> pure;   // set when the input was a pure state
  double probability = 0.0;
};

inline constexpr double kProbabilityFloor = 1e-12;

// Throws NumericalError ("measurement never succeeds") below the floor.
MeasuredState projective_measurement(const StateVector& psi, const CompositeSpace& space, const MeasurementSpec& m,
                                     double floor = kProbabilityFloor);
MeasuredState projective_measurement(const DensityMatrix& rho, const CompositeSpace& space, const MeasurementSpec& m,
                                     double floor = kProbabilityFloor);

// (|first> + |second>)/sqrt(2) (x) |alpha>|beta>, first/second from the qutrit type.
StateVector initial_state(const SystemParams& params, const TargetSpec& target,
                          double tail_tolerance = kDefaultTailTolerance);

struct TargetState {
  StateVector state;  // on the resonator space
  double varphi = 0.0;
  int index_1 = 0;    // resonator index of |n1 m1>
  int index_2 = 0;    // resonator index of |n2 m2>
};

// cos(varphi)|n1 m1> + sin(varphi)|n2 m2>,
// tan(varphi) = alpha^n2 beta^m2 sqrt(n1! m1!) / (alpha^n1 beta^m1 sqrt(n2! m2!)).
TargetState target_state(const TargetSpec& target, const ModeTruncation& truncation);

// <phi|rho|phi>, maximized over the relative phase of the two components.
double fidelity(const DensityMatrix& rho, const TargetState& target);
double fidelity(const StateVector& psi, const TargetState& target);
// Same from the 2x2 block of rho on {|n1 m1>, |n2 m2>}.
double fidelity(const Eigen::Matrix2cd& block, double varphi);

enum class LindbladEngine { Reduced, Full };
// Pure-state propagation: RK4 in the rotating frame, or exact
// eigendecomposition in the drive frame. Auto picks the latter when crosstalk
// is on (its fast phases would force tiny RK4 steps).
enum class PureEngine { Auto, Rotating, DriveFrame };

std::string_view to_string(LindbladEngine engine);
std::string_view to_string(PureEngine engine);
LindbladEngine parse_lindblad_engine(std::string_view text);
PureEngine parse_pure_engine(std::string_view text);

struct TrajectoryPoint {
  double t = 0.0;
  std::array<double, kQutritDim> level_population{};
  double norm = 0.0;  // state norm, or trace for density runs
};

struct ProtocolOptions {
  IntegratorConfig integrator;
  LindbladEngine lindblad = LindbladEngine::Reduced;
  PureEngine engine = PureEngine::Auto;
  double tail_tolerance = kDefaultTailTolerance;
  // Keep only the two resonant blocks (secular limit, no crosstalk).
  bool secular = false;
  std::function<void(const TrajectoryPoint&)> trajectory;
};

struct SectorPopulation {
  int n = 0;
  int m = 0;
  std::array<double, kQutritDim> level{};
};

struct ProtocolOutcome {
  // Normalized resonator state. With the reduced Lindblad engine only the
  // entries the propagation tracks are filled; the rest are zero.
  DensityMatrix post_state;
  std::optional<StateVector> post_pure;
  Eigen::Matrix2cd target_block = Eigen::Matrix2cd::Zero();
  double success_probability = 0.0;
  double fidelity = 0.0;
  double varphi = 0.0;
  // Pre-measurement populations per Fock sector.
  std::vector<SectorPopulation> sectors;
  std::string engine;
};

ProtocolOutcome run_protocol(const SystemParams& params, const TargetSpec& target, const DriveSpec& drive,
                             const MeasurementSpec& measurement = {}, const DecoherenceRates& rates = {},
                             const ProtocolOptions& options = {});

// DriveSpec with the planned (resonant) tone frequencies filled in.
DriveSpec planned_drive(const SystemParams& params, const TargetSpec& target, double omega,
                        Schedule schedule = Schedule::Simultaneous);

}  // namespace entangler
