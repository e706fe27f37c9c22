#include "entangler/phased_operator.hpp"

#include "entangler/error.hpp"

#include <algorithm>
#include <cmath>

namespace entangler {

PhasedOperator::PhasedOperator(int dim, std::vector<PhasedTerm> terms) : dim_(dim) {
  if (dim < 0) throw InvalidArgument("PhasedOperator: negative dimension");
  std::stable_sort(terms.begin(), terms.end(), [](const PhasedTerm& a, const PhasedTerm& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
  col_.reserve(terms.size());
  amplitude_.reserve(terms.size());
  frequency_.reserve(terms.size());
  for (const auto& term : terms) {
    if (term.row < 0 || term.row >= dim || term.col < 0 || term.col >= dim) {
      throw InvalidArgument("PhasedOperator: term index out of range");
    }
    ++row_ptr_[static_cast<std::size_t>(term.row) + 1];
    col_.push_back(term.col);
    amplitude_.push_back(term.amplitude);
    frequency_.push_back(term.frequency);
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(dim); ++r) row_ptr_[r + 1] += row_ptr_[r];
}

PhasedOperator PhasedOperator::from_dense(const Operator& op, double drop) {
  if (op.rows() != op.cols()) throw InvalidArgument("PhasedOperator: operator must be square");
  std::vector<PhasedTerm> terms;
  for (int r = 0; r < op.rows(); ++r) {
    for (int c = 0; c < op.cols(); ++c) {
      if (std::abs(op(r, c)) > drop) terms.push_back({r, c, op(r, c), 0.0});
    }
  }
  return PhasedOperator(static_cast<int>(op.rows()), std::move(terms));
}

void PhasedOperator::evaluate(double t, std::span<Complex> values) const {
  for (std::size_t k = 0; k < col_.size(); ++k) {
    const double w = frequency_[k];
    values[k] = w == 0.0 ? amplitude_[k] : amplitude_[k] * std::polar(1.0, w * t);
  }
}

Operator PhasedOperator::dense(double t) const {
  Operator out = Operator::Zero(dim_, dim_);
  std::vector<Complex> values(size());
  evaluate(t, values);
  for (int r = 0; r < dim_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out(r, col_[k]) += values[k];
  }
  return out;
}

double PhasedOperator::max_frequency() const {
  double w = 0.0;
  for (double f : frequency_) w = std::max(w, std::abs(f));
  return w;
}

double PhasedOperator::max_amplitude() const {
  double a = 0.0;
  for (const auto& v : amplitude_) a = std::max(a, std::abs(v));
  return a;
}

std::vector<PhasedTerm> PhasedOperator::terms() const {
  std::vector<PhasedTerm> out;
  out.reserve(size());
  for (int r = 0; r < dim_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({r, col_[k], amplitude_[k], frequency_[k]});
    }
  }
  return out;
}

PhasedOperator operator+(const PhasedOperator& lhs, const PhasedOperator& rhs) {
  if (lhs.dim() != rhs.dim()) throw InvalidArgument("PhasedOperator: dimension mismatch in sum");
  auto terms = lhs.terms();
  auto more = rhs.terms();
  terms.insert(terms.end(), more.begin(), more.end());
  return PhasedOperator(lhs.dim(), std::move(terms));
}

void PhasedOperatorBuilder::add(int row, int col, Complex amplitude, double frequency) {
  terms_.push_back({row, col, amplitude, frequency});
}

void PhasedOperatorBuilder::add_hermitian_pair(int row, int col, Complex amplitude, double frequency) {
  if (row == col) {
    if (amplitude.imag() != 0.0 || frequency != 0.0) {
      throw InvalidArgument("PhasedOperatorBuilder: diagonal term must be real and static");
    }
    terms_.push_back({row, col, amplitude, 0.0});
    return;
  }
  terms_.push_back({row, col, amplitude, frequency});
  terms_.push_back({col, row, std::conj(amplitude), -frequency});
}

PhasedOperator PhasedOperatorBuilder::build() && { return PhasedOperator(dim_, std::move(terms_)); }

}  // namespace entangler
