#include "entangler/hilbert.hpp"

#include "entangler/error.hpp"

#include <cmath>
#include <string>

namespace entangler {

char level_name(Level level) {
  switch (level) {
    case Level::g: return 'g';
    case Level::e: return 'e';
    case Level::f: return 'f';
  }
  return '?';
}

CompositeSpace::CompositeSpace(ModeTruncation truncation) : trunc_(truncation) {
  if (truncation.n_max_a < 0 || truncation.n_max_b < 0) {
    throw InvalidArgument("negative mode cutoff");
  }
}

BasisLabel CompositeSpace::label(int flat) const {
  BasisLabel out;
  out.m = flat % dim_b();
  flat /= dim_b();
  out.n = flat % dim_a();
  out.level = static_cast<Level>(flat / dim_a());
  return out;
}

Operator ladder_operator(int cutoff) {
  if (cutoff < 1) {
    throw InvalidArgument("degenerate mode: cutoff must be >= 1, got " + std::to_string(cutoff));
  }
  Operator a = Operator::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Operator number_operator(int cutoff) {
  if (cutoff < 1) {
    throw InvalidArgument("degenerate mode: cutoff must be >= 1, got " + std::to_string(cutoff));
  }
  // Exact integers; a^dag a picks up rounding from the square roots.
  Operator n = Operator::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) n(k, k) = k;
  return n;
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator qutrit_projector(Level k, Level j) {
  Operator p = Operator::Zero(kQutritDim, kQutritDim);
  p(static_cast<int>(k), static_cast<int>(j)) = 1.0;
  return p;
}

double coherent_tail(Complex amplitude, int cutoff) {
  const double mean = std::norm(amplitude);
  if (mean == 0.0) return 0.0;
  // log-space Poisson weights; sum the tail directly to avoid cancellation.
  double tail = 0.0;
  for (int n = cutoff + 1;; ++n) {
    const double log_p = -mean + n * std::log(mean) - std::lgamma(n + 1.0);
    const double p = std::exp(log_p);
    tail += p;
    if (n > mean + 10 && p < 1e-18 * (tail + 1e-300)) break;
    if (n > cutoff + 10000) break;
  }
  return tail;
}

int minimal_cutoff(Complex amplitude, double tail_tolerance) {
  int cutoff = 1;
  while (coherent_tail(amplitude, cutoff) >= tail_tolerance) ++cutoff;
  return cutoff;
}

StateVector coherent_state(Complex amplitude, int cutoff, double tail_tolerance) {
  if (cutoff < 0) throw InvalidArgument("negative cutoff");
  const double tail = coherent_tail(amplitude, cutoff);
  if (tail >= tail_tolerance) {
    throw NumericalError("cutoff too small for amplitude: tail " + std::to_string(tail) +
                         " at cutoff " + std::to_string(cutoff));
  }
  StateVector psi = StateVector::Zero(cutoff + 1);
  Complex term = std::exp(-0.5 * std::norm(amplitude));
  psi(0) = term;
  for (int n = 1; n <= cutoff; ++n) {
    term *= amplitude / std::sqrt(static_cast<double>(n));
    psi(n) = term;
  }
  return psi / psi.norm();
}

Operator displacement_operator(Complex amplitude, int cutoff, double tail_tolerance) {
  const double tail = coherent_tail(amplitude, cutoff);
  if (tail >= tail_tolerance) {
    throw NumericalError("cutoff too small for amplitude: tail " + std::to_string(tail) +
                         " at cutoff " + std::to_string(cutoff));
  }
  const Operator a = ladder_operator(cutoff);
  // D = exp(-i K) with K = i (alpha a^dag - alpha^* a) Hermitian.
  const Operator generator = amplitude * a.adjoint() - std::conj(amplitude) * a;
  const Operator hermitian = kI * generator;
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian);
  const Eigen::VectorXcd phases =
      (-kI * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Operator kron(const Operator& lhs, const Operator& rhs) {
  Operator out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    }
  }
  return out;
}

StateVector kron(const StateVector& lhs, const StateVector& rhs) {
  StateVector out(lhs.size() * rhs.size());
  for (Eigen::Index i = 0; i < lhs.size(); ++i) {
    out.segment(i * rhs.size(), rhs.size()) = lhs(i) * rhs;
  }
  return out;
}

Operator embed(const Operator& qutrit_op, const Operator& a_op, const Operator& b_op) {
  if (qutrit_op.rows() != kQutritDim || qutrit_op.cols() != kQutritDim) {
    throw InvalidArgument("embed: qutrit operator must be 3x3");
  }
  if (a_op.rows() != a_op.cols() || b_op.rows() != b_op.cols()) {
    throw InvalidArgument("embed: mode operators must be square");
  }
  return kron(qutrit_op, kron(a_op, b_op));
}

StateVector embed_state(const StateVector& qutrit, const StateVector& a, const StateVector& b) {
  if (qutrit.size() != kQutritDim) throw InvalidArgument("embed_state: qutrit state must have 3 entries");
  return kron(qutrit, kron(a, b));
}

DensityMatrix partial_trace_qutrit(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() % kQutritDim != 0 || rho.rows() == 0) {
    throw InvalidArgument("partial_trace_qutrit: dimension mismatch");
  }
  const Eigen::Index d = rho.rows() / kQutritDim;
  DensityMatrix out = DensityMatrix::Zero(d, d);
  for (int q = 0; q < kQutritDim; ++q) out += rho.block(q * d, q * d, d, d);
  return out;
}

double hermiticity_error(const Operator& op) {
  if (op.size() == 0) return 0.0;
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix outer(const StateVector& psi) { return psi * psi.adjoint(); }

}  // namespace entangler
