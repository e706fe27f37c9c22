#include "entangler/protocol.hpp"

#include "entangler/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace entangler {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void never_succeeds(double p) {
  std::ostringstream msg;
  msg << "measurement never succeeds: probability " << p;
  throw NumericalError(msg.str());
}

std::array<double, kQutritDim> level_populations(const StateVector& psi, int block) {
  std::array<double, kQutritDim> out{};
  for (int k = 0; k < kQutritDim; ++k) out[k] = psi.segment(k * block, block).squaredNorm();
  return out;
}

std::array<double, kQutritDim> level_populations(const DensityMatrix& rho, int block) {
  std::array<double, kQutritDim> out{};
  for (int k = 0; k < kQutritDim; ++k) out[k] = rho.diagonal().segment(k * block, block).real().sum();
  return out;
}

}  // namespace

void validate(const MeasurementSpec& m) {
  if (!(m.theta_1 >= 0 && m.theta_1 < kPi / 2)) throw InvalidArgument("theta_1 must lie in [0, pi/2)");
  if (!(m.theta_2 >= 0 && m.theta_2 <= kPi)) throw InvalidArgument("theta_2 must lie in [0, pi]");
}

Level measured_level(const MeasurementSpec& m, QutritType type) {
  return m.level.value_or(protocol_levels(type).measured);
}

std::array<double, kQutritDim> measurement_ket(const MeasurementSpec& m, Level level) {
  Level u = Level::e, last = Level::g;
  if (level == Level::e) u = Level::f;
  if (level == Level::g) {
    u = Level::f;
    last = Level::e;
  }
  std::array<double, kQutritDim> ket{};
  ket[static_cast<int>(level)] = std::cos(m.theta_1);
  ket[static_cast<int>(u)] = std::sin(m.theta_1) * std::sin(m.theta_2);
  ket[static_cast<int>(last)] = std::sin(m.theta_1) * std::cos(m.theta_2);
  return ket;
}

MeasuredState projective_measurement(const StateVector& psi, const CompositeSpace& space, const MeasurementSpec& m,
                                     double floor) {
  if (psi.size() != space.dim()) throw InvalidArgument("projective_measurement: dimension mismatch");
  validate(m);
  const auto ket = measurement_ket(m, m.level.value_or(Level::f));
  const int block = space.resonator_dim();
  StateVector post = StateVector::Zero(block);
  for (int k = 0; k < kQutritDim; ++k) {
    if (ket[k] != 0.0) post += ket[k] * psi.segment(k * block, block);
  }
  const double p = post.squaredNorm();
  if (!(p >= floor)) never_succeeds(p);
  post /= std::sqrt(p);
  MeasuredState out;
  out.rho = outer(post);
  out.pure = post;
  out.probability = p;
  return out;
}

MeasuredState projective_measurement(const DensityMatrix& rho, const CompositeSpace& space, const MeasurementSpec& m,
                                     double floor) {
  if (rho.rows() != space.dim() || rho.cols() != space.dim()) {
    throw InvalidArgument("projective_measurement: dimension mismatch");
  }
  validate(m);
  const auto ket = measurement_ket(m, m.level.value_or(Level::f));
  const int block = space.resonator_dim();
  DensityMatrix post = DensityMatrix::Zero(block, block);
  for (int k = 0; k < kQutritDim; ++k) {
    for (int l = 0; l < kQutritDim; ++l) {
      if (ket[k] == 0.0 || ket[l] == 0.0) continue;
      post += ket[k] * ket[l] * rho.block(k * block, l * block, block, block);
    }
  }
  const double p = post.trace().real();
  if (!(p >= floor)) never_succeeds(p);
  MeasuredState out;
  out.rho = post / p;
  out.probability = p;
  return out;
}

StateVector initial_state(const SystemParams& params, const TargetSpec& target, double tail_tolerance) {
  const auto& tr = params.truncation;
  const StateVector a = coherent_state(target.alpha, tr.n_max_a, tail_tolerance);
  const StateVector b = coherent_state(target.beta, tr.n_max_b, tail_tolerance);
  const ProtocolLevels levels = protocol_levels(params.qutrit);
  StateVector q = StateVector::Zero(kQutritDim);
  q(static_cast<int>(levels.initial_first)) = 1.0 / std::sqrt(2.0);
  q(static_cast<int>(levels.initial_second)) = 1.0 / std::sqrt(2.0);
  return embed_state(q, a, b);
}

TargetState target_state(const TargetSpec& target, const ModeTruncation& truncation) {
  validate(target, truncation);
  if (!(target.alpha > 0 && target.beta > 0)) throw InvalidArgument("target amplitudes must be positive");
  const CompositeSpace space(truncation);
  // log of alpha^n beta^m / sqrt(n! m!)
  auto log_weight = [&](int n, int m) {
    return n * std::log(target.alpha) + m * std::log(target.beta) - 0.5 * (std::lgamma(n + 1.0) + std::lgamma(m + 1.0));
  };
  TargetState out;
  out.varphi = std::atan(std::exp(log_weight(target.n_2, target.m_2) - log_weight(target.n_1, target.m_1)));
  out.index_1 = space.resonator_index(target.n_1, target.m_1);
  out.index_2 = space.resonator_index(target.n_2, target.m_2);
  out.state = StateVector::Zero(space.resonator_dim());
  out.state(out.index_1) = std::cos(out.varphi);
  out.state(out.index_2) = std::sin(out.varphi);
  return out;
}

double fidelity(const Eigen::Matrix2cd& block, double varphi) {
  const double c = std::cos(varphi), s = std::sin(varphi);
  const double f = c * c * block(0, 0).real() + s * s * block(1, 1).real() + 2.0 * std::abs(c * s) * std::abs(block(0, 1));
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const TargetState& target) {
  if (rho.rows() != target.state.size() || rho.cols() != target.state.size()) {
    throw InvalidArgument("fidelity: dimension mismatch");
  }
  Eigen::Matrix2cd block;
  block << rho(target.index_1, target.index_1), rho(target.index_1, target.index_2),
      rho(target.index_2, target.index_1), rho(target.index_2, target.index_2);
  return fidelity(block, target.varphi);
}

double fidelity(const StateVector& psi, const TargetState& target) {
  if (psi.size() != target.state.size()) throw InvalidArgument("fidelity: dimension mismatch");
  const Complex u = psi(target.index_1), v = psi(target.index_2);
  Eigen::Matrix2cd block;
  block << std::norm(u), u * std::conj(v), v * std::conj(u), std::norm(v);
  return fidelity(block, target.varphi);
}

std::string_view to_string(LindbladEngine engine) { return engine == LindbladEngine::Reduced ? "reduced" : "full"; }

std::string_view to_string(PureEngine engine) {
  switch (engine) {
    case PureEngine::Auto: return "auto";
    case PureEngine::Rotating: return "rotating";
    case PureEngine::DriveFrame: return "drive-frame";
  }
  return "?";
}

LindbladEngine parse_lindblad_engine(std::string_view text) {
  const auto t = lower(text);
  if (t == "reduced") return LindbladEngine::Reduced;
  if (t == "full") return LindbladEngine::Full;
  throw InvalidArgument("unknown lindblad engine '" + std::string(text) + "' (expected reduced|full)");
}

PureEngine parse_pure_engine(std::string_view text) {
  const auto t = lower(text);
  if (t == "auto") return PureEngine::Auto;
  if (t == "rotating") return PureEngine::Rotating;
  if (t == "drive-frame") return PureEngine::DriveFrame;
  throw InvalidArgument("unknown engine '" + std::string(text) + "' (expected auto|rotating|drive-frame)");
}

DriveSpec planned_drive(const SystemParams& params, const TargetSpec& target, double omega, Schedule schedule) {
  const auto shifts = dispersive_shifts(params);
  const auto [w1, w2] = planned_drive_frequencies(params, shifts, target);
  DriveSpec drive;
  drive.Omega = omega;
  drive.omega_1 = w1;
  drive.omega_2 = w2;
  drive.schedule = schedule;
  return drive;
}

namespace {

struct Segment {
  ToneSelection tones;
  double duration;
};

std::vector<Segment> segments_for(const DriveSpec& drive) {
  const double t = drive.pulse_duration();
  if (drive.schedule == Schedule::Sequential) return {{{true, false}, t}, {{false, true}, t}};
  return {{{true, true}, t}};
}

// Seeds for the reduced Lindblad run: every qutrit entry of each diagonal
// Fock-sector block, and both cross blocks between the two target sectors.
std::vector<ReducedLindblad::Entry> reduced_seeds(const CompositeSpace& space, const TargetSpec& target) {
  std::vector<ReducedLindblad::Entry> seeds;
  const auto& tr = space.truncation();
  auto add_block = [&](int n1, int m1, int n2, int m2) {
    for (int k = 0; k < kQutritDim; ++k) {
      for (int l = 0; l < kQutritDim; ++l) {
        seeds.push_back({space.index(static_cast<Level>(k), n1, m1), space.index(static_cast<Level>(l), n2, m2)});
      }
    }
  };
  for (int n = 0; n <= tr.n_max_a; ++n) {
    for (int m = 0; m <= tr.n_max_b; ++m) add_block(n, m, n, m);
  }
  add_block(target.n_1, target.m_1, target.n_2, target.m_2);
  add_block(target.n_2, target.m_2, target.n_1, target.m_1);
  return seeds;
}

// Unnormalized measured resonator entry <r| <L'| rho |L'> |c>, or nullopt
// when an ingredient is not tracked.
std::optional<Complex> measured_entry(const ReducedLindblad& model, const Eigen::VectorXcd& x,
                                      const CompositeSpace& space, const std::array<double, kQutritDim>& ket, int r,
                                      int c) {
  const int block = space.resonator_dim();
  Complex acc{};
  for (int k = 0; k < kQutritDim; ++k) {
    for (int l = 0; l < kQutritDim; ++l) {
      if (ket[k] == 0.0 || ket[l] == 0.0) continue;
      const int pos = model.position(k * block + r, l * block + c);
      if (pos < 0) return std::nullopt;
      acc += ket[k] * ket[l] * x(pos);
    }
  }
  return acc;
}

void fill_sectors(ProtocolOutcome& out, const CompositeSpace& space, const std::function<double(int)>& population) {
  const auto& tr = space.truncation();
  for (int n = 0; n <= tr.n_max_a; ++n) {
    for (int m = 0; m <= tr.n_max_b; ++m) {
      SectorPopulation s{n, m, {}};
      for (int k = 0; k < kQutritDim; ++k) s.level[k] = population(space.index(static_cast<Level>(k), n, m));
      out.sectors.push_back(s);
    }
  }
}

void finish_from_measurement(ProtocolOutcome& out, const MeasuredState& measured, const TargetState& phi) {
  out.post_state = measured.rho;
  out.post_pure = measured.pure;
  out.success_probability = measured.probability;
  out.target_block << measured.rho(phi.index_1, phi.index_1), measured.rho(phi.index_1, phi.index_2),
      measured.rho(phi.index_2, phi.index_1), measured.rho(phi.index_2, phi.index_2);
  out.fidelity = fidelity(out.target_block, phi.varphi);
}

}  // namespace

ProtocolOutcome run_protocol(const SystemParams& params, const TargetSpec& target, const DriveSpec& drive,
                             const MeasurementSpec& measurement, const DecoherenceRates& rates,
                             const ProtocolOptions& options) {
  validate(params);
  validate(measurement);
  validate(rates);
  const CompositeSpace space = params.space();
  const TargetState phi = target_state(target, params.truncation);
  MeasurementSpec m = measurement;
  m.level = measured_level(measurement, params.qutrit);
  const auto segments = segments_for(drive);
  const StateVector psi0 = initial_state(params, target, options.tail_tolerance);
  const int block = space.resonator_dim();

  ProtocolOutcome out;
  out.varphi = phi.varphi;
  auto tone_hamiltonian = [&](ToneSelection tones) {
    return options.secular ? resonant_blocks_hamiltonian(params, drive, target, tones)
                           : rotating_frame_hamiltonian(params, drive, tones);
  };

  if (!rates.any()) {
    PureEngine engine = options.engine;
    if (engine == PureEngine::Auto) engine = params.g_ab != 0.0 ? PureEngine::DriveFrame : PureEngine::Rotating;
    if (options.secular && engine == PureEngine::DriveFrame) {
      throw InvalidArgument("secular projection requires the rotating engine");
    }
    out.engine = std::string(to_string(engine));
    StateVector psi = psi0;
    double t = 0.0;
    auto emit = [&](double time, const StateVector& y) {
      if (options.trajectory) options.trajectory({time, level_populations(y, block), y.norm()});
    };
    if (engine == PureEngine::Rotating) {
      for (const auto& seg : segments) {
        const PhasedOperator h = tone_hamiltonian(seg.tones);
        psi = propagate_state(h, psi, seg.duration, options.integrator, t, emit);
        t += seg.duration;
      }
    } else {
      emit(0.0, psi);
      for (const auto& seg : segments) {
        psi = propagate_static(drive_frame_hamiltonian(params, drive, seg.tones), psi, seg.duration);
        t += seg.duration;
      }
      psi = drive_frame_to_rotating(psi, params, drive, t);
      const double drift = std::abs(psi.norm() - 1.0);
      if (drift > options.integrator.norm_tolerance) throw NumericalError("norm drift in exact propagation");
      emit(t, psi);
    }
    fill_sectors(out, space, [&](int k) { return std::norm(psi(k)); });
    finish_from_measurement(out, projective_measurement(psi, space, m), phi);
    return out;
  }

  const auto channels = collapse_channels(params, rates);
  out.engine = std::string(to_string(options.lindblad));
  if (options.lindblad == LindbladEngine::Full) {
    DensityMatrix rho = outer(psi0);
    double t = 0.0;
    auto emit = [&](double time, const DensityMatrix& y) {
      if (options.trajectory) options.trajectory({time, level_populations(y, block), y.trace().real()});
    };
    for (const auto& seg : segments) {
      const PhasedOperator h = tone_hamiltonian(seg.tones);
      rho = propagate_density(h, channels, rho, seg.duration, options.integrator, t, emit);
      t += seg.duration;
    }
    fill_sectors(out, space, [&](int k) { return rho(k, k).real(); });
    finish_from_measurement(out, projective_measurement(rho, space, m), phi);
    return out;
  }

  // Reduced engine. One entry set shared by every segment: the closure under
  // the two-tone generator contains the closure under each single tone.
  const auto seeds = reduced_seeds(space, target);
  const ReducedLindblad both(make_sparse_lindblad(tone_hamiltonian({true, true}), channels), seeds);
  const DensityMatrix rho0 = outer(psi0);
  Eigen::VectorXcd x = both.gather(rho0);
  double t = 0.0;
  for (const auto& seg : segments) {
    const PhasedOperator h = tone_hamiltonian(seg.tones);
    const ReducedLindblad model(make_sparse_lindblad(h, channels), both.entries());
    if (model.size() != both.size()) throw NumericalError("reduced entry set not closed under a single tone");
    auto emit = [&](double time, const Eigen::VectorXcd& y) {
      if (!options.trajectory) return;
      TrajectoryPoint p{time, {}, model.trace(y).real()};
      for (int k = 0; k < kQutritDim; ++k) {
        for (int r = 0; r < block; ++r) p.level_population[k] += y(model.position(k * block + r, k * block + r)).real();
      }
      options.trajectory(p);
    };
    x = propagate_reduced(model, h, x, seg.duration, options.integrator, t, emit);
    t += seg.duration;
  }

  fill_sectors(out, space, [&](int k) { return x(both.position(k, k)).real(); });
  const auto ket = measurement_ket(m, *m.level);
  DensityMatrix post = DensityMatrix::Zero(block, block);
  for (int r = 0; r < block; ++r) {
    for (int c = 0; c < block; ++c) {
      if (auto v = measured_entry(both, x, space, ket, r, c)) post(r, c) = *v;
    }
  }
  const double p = post.trace().real();
  if (!(p >= kProbabilityFloor)) never_succeeds(p);
  MeasuredState measured;
  measured.rho = post / p;
  measured.probability = p;
  finish_from_measurement(out, measured, phi);
  return out;
}

}  // namespace entangler
