// Parallel kernels against their serial references.
#include "entangler/dynamics.hpp"
#include "entangler/kernels.hpp"
#include "entangler/protocol.hpp"

#include <benchmark/benchmark.h>

using namespace entangler;

namespace {

struct Model {
  SystemParams params;
  PhasedOperator h;
  std::vector<RateOperator> channels;
  SparseLindblad sparse;
  std::vector<Complex> values;
};

Model make_model(int cutoff) {
  Model m;
  const TargetSpec t = TargetSpec::noon(2);
  m.params.truncation = {cutoff, cutoff};
  const DriveSpec d = planned_drive(m.params, t, 5e-3);
  m.h = rotating_frame_hamiltonian(m.params, d);
  DecoherenceRates r;
  r.gamma = 1e-4;
  m.channels = collapse_channels(m.params, r);
  m.sparse = make_sparse_lindblad(m.h, m.channels);
  m.values.resize(m.h.size());
  m.h.evaluate(12.3, m.values);
  return m;
}

DensityMatrix test_state(int dim) {
  StateVector psi(dim);
  for (int k = 0; k < dim; ++k) psi(k) = Complex(std::cos(0.7 * k), std::sin(0.3 * k));
  psi.normalize();
  return outer(psi);
}

void BM_MatvecParallel(benchmark::State& state) {
  const Model m = make_model(static_cast<int>(state.range(0)));
  const int d = m.h.dim();
  StateVector x = test_state(d).col(0), y(d);
  for (auto _ : state) {
    kernels::matvec(m.h, m.values, x.data(), y.data());
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dim"] = d;
}

void BM_MatvecReference(benchmark::State& state) {
  const Model m = make_model(static_cast<int>(state.range(0)));
  const int d = m.h.dim();
  const Operator h = m.h.dense(12.3);
  StateVector x = test_state(d).col(0), y(d);
  for (auto _ : state) {
    reference::matvec(h, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dim"] = d;
}

void BM_LindbladParallel(benchmark::State& state) {
  const Model m = make_model(static_cast<int>(state.range(0)));
  const DensityMatrix rho = test_state(m.h.dim());
  DensityMatrix out, scratch;
  for (auto _ : state) {
    kernels::lindblad_rhs(m.sparse, m.values, rho, out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["dim"] = m.h.dim();
}

void BM_LindbladReference(benchmark::State& state) {
  const Model m = make_model(static_cast<int>(state.range(0)));
  const DensityMatrix rho = test_state(m.h.dim());
  const Operator h = m.h.dense(12.3);
  for (auto _ : state) {
    DensityMatrix out = reference::lindblad_rhs(h, m.channels, rho);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["dim"] = m.h.dim();
}

std::vector<ReducedLindblad::Entry> diagonal_seeds(int dim) {
  std::vector<ReducedLindblad::Entry> seeds;
  for (int k = 0; k < dim; ++k) seeds.push_back({k, k});
  return seeds;
}

void BM_ReducedParallel(benchmark::State& state) {
  const Model m = make_model(static_cast<int>(state.range(0)));
  const ReducedLindblad r(m.sparse, diagonal_seeds(m.h.dim()));
  const Eigen::VectorXcd x = r.gather(test_state(m.h.dim()));
  Eigen::VectorXcd y;
  for (auto _ : state) {
    r.apply(m.values, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["entries"] = static_cast<double>(r.size());
}

void BM_ReducedSerial(benchmark::State& state) {
  const Model m = make_model(static_cast<int>(state.range(0)));
  const ReducedLindblad r(m.sparse, diagonal_seeds(m.h.dim()));
  const Eigen::VectorXcd x = r.gather(test_state(m.h.dim()));
  Eigen::VectorXcd y;
  for (auto _ : state) {
    r.apply_serial(m.values, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["entries"] = static_cast<double>(r.size());
}

}  // namespace

BENCHMARK(BM_MatvecParallel)->Arg(6)->Arg(12);
BENCHMARK(BM_MatvecReference)->Arg(6)->Arg(12);
BENCHMARK(BM_LindbladParallel)->Arg(6)->Arg(10);
BENCHMARK(BM_LindbladReference)->Arg(6);
BENCHMARK(BM_ReducedParallel)->Arg(6)->Arg(12);
BENCHMARK(BM_ReducedSerial)->Arg(6)->Arg(12);

BENCHMARK_MAIN();
