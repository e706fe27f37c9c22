// phased_operator.hpp: sparse time-dependent operator whose every entry is
// amplitude * exp(i * frequency * t).
//
// Rotating-frame Hamiltonians have exactly this form: the structure (row,
// column, amplitude, frequency) is fixed once, and evaluating H(t) costs one
// complex phase per stored term. Terms are kept in row-major (CSR) order and
// may repeat a (row, col) pair with different frequencies.
#pragma once

#include "entangler/hilbert.hpp"

#include <span>
#include <vector>

namespace entangler {

struct PhasedTerm {
  int row = 0;
  int col = 0;
  Complex amplitude{};
  double frequency = 0.0;
};

class PhasedOperator {
 public:
  PhasedOperator() = default;
  PhasedOperator(int dim, std::vector<PhasedTerm> terms);

  // Time-independent operator; entries with |value| <= drop are skipped.
  static PhasedOperator from_dense(const Operator& op, double drop = 0.0);

  int dim() const { return dim_; }
  std::size_t size() const { return col_.size(); }
  bool empty() const { return col_.empty(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return col_; }
  const std::vector<Complex>& amplitudes() const { return amplitude_; }
  const std::vector<double>& frequencies() const { return frequency_; }

  // values[k] = amplitude[k] * exp(i frequency[k] t)
  void evaluate(double t, std::span<Complex> values) const;
  Operator dense(double t) const;

  double max_frequency() const;
  double max_amplitude() const;

  std::vector<PhasedTerm> terms() const;

  friend PhasedOperator operator+(const PhasedOperator& lhs, const PhasedOperator& rhs);

 private:
  int dim_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<Complex> amplitude_;
  std::vector<double> frequency_;
};

class PhasedOperatorBuilder {
 public:
  explicit PhasedOperatorBuilder(int dim) : dim_(dim) {}

  void add(int row, int col, Complex amplitude, double frequency);
  // Adds the term and its Hermitian conjugate (col, row, conj(amp), -freq).
  // Diagonal entries must be real and static; they are added once.
  void add_hermitian_pair(int row, int col, Complex amplitude, double frequency);

  PhasedOperator build() &&;

 private:
  int dim_;
  std::vector<PhasedTerm> terms_;
};

}  // namespace entangler
