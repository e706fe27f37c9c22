#include "entangler/kernels.hpp"

#include "entangler/error.hpp"

namespace entangler {

SparseLindblad make_sparse_lindblad(PhasedOperator hamiltonian, const std::vector<RateOperator>& channels) {
  SparseLindblad model;
  const int d = hamiltonian.dim();
  model.hamiltonian = std::move(hamiltonian);
  Operator decay = Operator::Zero(d, d);
  for (const auto& ch : channels) {
    if (ch.rate < 0) throw InvalidArgument("negative decoherence rate");
    if (ch.rate == 0.0) continue;
    if (ch.op.rows() != d || ch.op.cols() != d) throw InvalidArgument("collapse operator dimension mismatch");
    model.rates.push_back(ch.rate);
    model.jumps.push_back(PhasedOperator::from_dense(ch.op));
    decay.noalias() -= 0.5 * ch.rate * (ch.op.adjoint() * ch.op);
  }
  model.decay = PhasedOperator::from_dense(decay);
  return model;
}

namespace kernels {

void matvec(const PhasedOperator& op, std::span<const Complex> values, const Complex* x, Complex* y) {
  const auto& ptr = op.row_ptr();
  const auto& col = op.cols();
  const int d = op.dim();
#pragma omp parallel for schedule(static) if (d >= kParallelRows)
  for (int r = 0; r < d; ++r) {
    Complex acc{};
    for (int k = ptr[r]; k < ptr[r + 1]; ++k) acc += values[k] * x[col[k]];
    y[r] = acc;
  }
}

void spmm(const PhasedOperator& op, std::span<const Complex> values, const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y,
          Complex scale, bool accumulate) {
  const int d = op.dim();
  const Eigen::Index ncol = x.cols();
  if (x.rows() != d) throw InvalidArgument("spmm: dimension mismatch");
  if (!accumulate) y.setZero(d, ncol);
  const auto& ptr = op.row_ptr();
  const auto& col = op.cols();
  // Column-major storage: one column per task keeps reads contiguous.
#pragma omp parallel for schedule(static) if (ncol >= kParallelRows)
  for (Eigen::Index j = 0; j < ncol; ++j) {
    const Complex* xj = x.col(j).data();
    Complex* yj = y.col(j).data();
    for (int r = 0; r < d; ++r) {
      Complex acc{};
      for (int k = ptr[r]; k < ptr[r + 1]; ++k) acc += values[k] * xj[col[k]];
      yj[r] += scale * acc;
    }
  }
}

void lindblad_rhs(const SparseLindblad& model, std::span<const Complex> h_values, const DensityMatrix& rho,
                  DensityMatrix& out, DensityMatrix& scratch) {
  const int d = model.dim();
  if (rho.rows() != d || rho.cols() != d) throw InvalidArgument("lindblad_rhs: dimension mismatch");
  // G rho with G = -iH + decay; L(rho) = G rho + (G rho)^dag + jumps for Hermitian rho.
  spmm(model.hamiltonian, h_values, rho, scratch, -kI, false);
  spmm(model.decay, model.decay.amplitudes(), rho, scratch, 1.0, true);
  out = scratch + scratch.adjoint();
  for (std::size_t c = 0; c < model.jumps.size(); ++c) {
    const auto& o = model.jumps[c];
    spmm(o, o.amplitudes(), rho, scratch, 1.0, false);
    const DensityMatrix rho_odag = scratch.adjoint();
    spmm(o, o.amplitudes(), rho_odag, out, model.rates[c], true);
  }
}

}  // namespace kernels

}  // namespace entangler
