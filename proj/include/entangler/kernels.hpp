// kernels.hpp: the hot loops. Parallel (OpenMP) sparse kernels used by the
// propagators, and dense serial reference versions kept for testing and the
// benchmark.
#pragma once

#include "entangler/hilbert.hpp"
#include "entangler/phased_operator.hpp"

#include <span>
#include <string>
#include <vector>

namespace entangler {

// Static sparse pieces of a Lindblad generator
//   d rho/dt = -i[H(t), rho] + sum_c rate_c (o_c rho o_c^dag - 1/2 {o_c^dag o_c, rho})
// H(t) stays a PhasedOperator; the rest is time independent.
struct SparseLindblad {
  PhasedOperator hamiltonian;
  std::vector<double> rates;
  std::vector<PhasedOperator> jumps;
  // -1/2 sum_c rate_c o_c^dag o_c
  PhasedOperator decay;

  int dim() const { return hamiltonian.dim(); }
};

struct RateOperator {
  double rate = 0.0;
  Operator op;
  std::string name;
};

// Channels with zero rate are dropped.
SparseLindblad make_sparse_lindblad(PhasedOperator hamiltonian, const std::vector<RateOperator>& channels);

namespace kernels {

// Work below this many rows runs serially; thread start-up dominates otherwise.
inline constexpr int kParallelRows = 256;

// y = A x, where A's entries are `values` (see PhasedOperator::evaluate).
void matvec(const PhasedOperator& op, std::span<const Complex> values, const Complex* x, Complex* y);

// Y = scale * A X (+ Y when accumulate). X, Y column-major d x k.
void spmm(const PhasedOperator& op, std::span<const Complex> values, const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y,
          Complex scale, bool accumulate);

// out = L(rho) with H(t) given by h_values. Assumes rho Hermitian. scratch is
// resized as needed.
void lindblad_rhs(const SparseLindblad& model, std::span<const Complex> h_values, const DensityMatrix& rho,
                  DensityMatrix& out, DensityMatrix& scratch);

}  // namespace kernels

namespace reference {

// Dense serial counterparts. These are slow and exist to pin the parallel
// kernels down in tests and benchmarks.
void matvec(const Operator& h, const StateVector& x, StateVector& y);

DensityMatrix lindblad_rhs(const Operator& h, const std::vector<RateOperator>& channels, const DensityMatrix& rho);

}  // namespace reference

// Lindblad generator restricted to the smallest set of density-matrix entries
// that is closed under the generator and contains the given seeds. Entries
// outside the set never influence entries inside it, so propagating the
// reduced vector is exact for every tracked entry.
class ReducedLindblad {
 public:
  struct Entry {
    int row = 0;
    int col = 0;
  };

  ReducedLindblad(const SparseLindblad& model, const std::vector<Entry>& seeds);

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  // -1 when (row, col) is not tracked.
  int position(int row, int col) const;

  Eigen::VectorXcd gather(const DensityMatrix& rho) const;
  // Untracked entries are left at zero.
  DensityMatrix scatter(const Eigen::VectorXcd& x) const;

  // y = L_reduced(t) x; h_values are the Hamiltonian term values at t.
  void apply(std::span<const Complex> h_values, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  void apply_serial(std::span<const Complex> h_values, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

  // True when every diagonal entry is tracked, so the trace is available.
  bool tracks_trace() const { return tracks_trace_; }
  Complex trace(const Eigen::VectorXcd& x) const;
  // max |x_ij - conj(x_ji)| over tracked pairs.
  double hermiticity_error(const Eigen::VectorXcd& x) const;

 private:
  int dim_ = 0;
  std::vector<Entry> entries_;
  std::vector<int> position_;  // dim*dim, -1 if absent

  // Per tracked entry: static contributions and H-term contributions.
  std::vector<int> static_ptr_;
  std::vector<int> static_src_;
  std::vector<Complex> static_coeff_;
  std::vector<int> dyn_ptr_;
  std::vector<int> dyn_src_;
  std::vector<int> dyn_term_;
  std::vector<Complex> dyn_coeff_;  // -i (left product) or +i (right product)
  std::vector<int> diagonal_;
  std::vector<std::pair<int, int>> mirror_pairs_;
  bool tracks_trace_ = false;
};

}  // namespace entangler
