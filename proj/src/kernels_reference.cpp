#include "entangler/error.hpp"
#include "entangler/kernels.hpp"

namespace entangler::reference {

void matvec(const Operator& h, const StateVector& x, StateVector& y) {
  if (h.cols() != x.size()) throw InvalidArgument("matvec: dimension mismatch");
  y.setZero(h.rows());
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) y(r) += h(r, c) * x(c);
  }
}

DensityMatrix lindblad_rhs(const Operator& h, const std::vector<RateOperator>& channels, const DensityMatrix& rho) {
  if (h.rows() != rho.rows() || rho.rows() != rho.cols()) throw InvalidArgument("lindblad_rhs: dimension mismatch");
  DensityMatrix out = -kI * (h * rho - rho * h);
  for (const auto& ch : channels) {
    const Operator& o = ch.op;
    const Operator odo = o.adjoint() * o;
    out += ch.rate * (o * rho * o.adjoint() - 0.5 * (odo * rho + rho * odo));
  }
  return out;
}

}  // namespace entangler::reference
