#include "entangler/error.hpp"
#include "entangler/kernels.hpp"

#include <algorithm>

namespace entangler {

ReducedLindblad::ReducedLindblad(const SparseLindblad& model, const std::vector<Entry>& seeds) : dim_(model.dim()) {
  const int d = dim_;
  position_.assign(static_cast<std::size_t>(d) * d, -1);
  auto key = [d](int r, int c) { return static_cast<std::size_t>(r) * d + c; };

  // Column access to H and the decay operator for the right-multiplied terms.
  struct ColTerm {
    int row;
    int term;
  };
  const auto& h = model.hamiltonian;
  std::vector<std::vector<ColTerm>> h_by_col(d);
  for (int r = 0; r < d; ++r) {
    for (int k = h.row_ptr()[r]; k < h.row_ptr()[r + 1]; ++k) h_by_col[h.cols()[k]].push_back({r, k});
  }
  const auto& a = model.decay;
  std::vector<std::vector<ColTerm>> a_by_col(d);
  for (int r = 0; r < d; ++r) {
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) a_by_col[a.cols()[k]].push_back({r, k});
  }

  auto visit = [&](int r, int c) -> int {
    if (r < 0 || c < 0 || r >= d || c >= d) throw InvalidArgument("ReducedLindblad: entry out of range");
    int& pos = position_[key(r, c)];
    if (pos < 0) {
      pos = static_cast<int>(entries_.size());
      entries_.push_back({r, c});
    }
    return pos;
  };
  for (const auto& s : seeds) visit(s.row, s.col);

  static_ptr_.push_back(0);
  dyn_ptr_.push_back(0);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const int i = entries_[e].row;
    const int j = entries_[e].col;
    // -i H_ik rho_kj
    for (int k = h.row_ptr()[i]; k < h.row_ptr()[i + 1]; ++k) {
      dyn_src_.push_back(visit(h.cols()[k], j));
      dyn_term_.push_back(k);
      dyn_coeff_.push_back(-kI);
    }
    // +i rho_ik H_kj
    for (const auto& t : h_by_col[j]) {
      dyn_src_.push_back(visit(i, t.row));
      dyn_term_.push_back(t.term);
      dyn_coeff_.push_back(kI);
    }
    // A_ik rho_kj + rho_ik A_kj
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      static_src_.push_back(visit(a.cols()[k], j));
      static_coeff_.push_back(a.amplitudes()[k]);
    }
    for (const auto& t : a_by_col[j]) {
      static_src_.push_back(visit(i, t.row));
      static_coeff_.push_back(a.amplitudes()[t.term]);
    }
    // rate o_ik rho_kl conj(o_jl)
    for (std::size_t c = 0; c < model.jumps.size(); ++c) {
      const auto& o = model.jumps[c];
      for (int p = o.row_ptr()[i]; p < o.row_ptr()[i + 1]; ++p) {
        for (int q = o.row_ptr()[j]; q < o.row_ptr()[j + 1]; ++q) {
          static_src_.push_back(visit(o.cols()[p], o.cols()[q]));
          static_coeff_.push_back(model.rates[c] * o.amplitudes()[p] * std::conj(o.amplitudes()[q]));
        }
      }
    }
    static_ptr_.push_back(static_cast<int>(static_src_.size()));
    dyn_ptr_.push_back(static_cast<int>(dyn_src_.size()));
  }

  tracks_trace_ = true;
  for (int k = 0; k < d; ++k) {
    const int pos = position_[key(k, k)];
    if (pos < 0) {
      tracks_trace_ = false;
    } else {
      diagonal_.push_back(pos);
    }
  }
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto [r, c] = entries_[e];
    if (r >= c) continue;
    const int mirror = position_[key(c, r)];
    if (mirror >= 0) mirror_pairs_.emplace_back(static_cast<int>(e), mirror);
  }
}

int ReducedLindblad::position(int row, int col) const {
  if (row < 0 || col < 0 || row >= dim_ || col >= dim_) return -1;
  return position_[static_cast<std::size_t>(row) * dim_ + col];
}

Eigen::VectorXcd ReducedLindblad::gather(const DensityMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw InvalidArgument("gather: dimension mismatch");
  Eigen::VectorXcd x(entries_.size());
  for (std::size_t e = 0; e < entries_.size(); ++e) x(e) = rho(entries_[e].row, entries_[e].col);
  return x;
}

DensityMatrix ReducedLindblad::scatter(const Eigen::VectorXcd& x) const {
  if (static_cast<std::size_t>(x.size()) != entries_.size()) throw InvalidArgument("scatter: size mismatch");
  DensityMatrix rho = DensityMatrix::Zero(dim_, dim_);
  for (std::size_t e = 0; e < entries_.size(); ++e) rho(entries_[e].row, entries_[e].col) = x(e);
  return rho;
}

void ReducedLindblad::apply(std::span<const Complex> h_values, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const int n = static_cast<int>(entries_.size());
  y.resize(n);
#pragma omp parallel for schedule(static) if (n >= 4 * kernels::kParallelRows)
  for (int e = 0; e < n; ++e) {
    Complex acc{};
    for (int k = static_ptr_[e]; k < static_ptr_[e + 1]; ++k) acc += static_coeff_[k] * x(static_src_[k]);
    for (int k = dyn_ptr_[e]; k < dyn_ptr_[e + 1]; ++k) acc += dyn_coeff_[k] * h_values[dyn_term_[k]] * x(dyn_src_[k]);
    y(e) = acc;
  }
}

void ReducedLindblad::apply_serial(std::span<const Complex> h_values, const Eigen::VectorXcd& x,
                                   Eigen::VectorXcd& y) const {
  const int n = static_cast<int>(entries_.size());
  y.resize(n);
  for (int e = 0; e < n; ++e) {
    Complex acc{};
    for (int k = static_ptr_[e]; k < static_ptr_[e + 1]; ++k) acc += static_coeff_[k] * x(static_src_[k]);
    for (int k = dyn_ptr_[e]; k < dyn_ptr_[e + 1]; ++k) acc += dyn_coeff_[k] * h_values[dyn_term_[k]] * x(dyn_src_[k]);
    y(e) = acc;
  }
}

Complex ReducedLindblad::trace(const Eigen::VectorXcd& x) const {
  Complex t{};
  for (int pos : diagonal_) t += x(pos);
  return t;
}

double ReducedLindblad::hermiticity_error(const Eigen::VectorXcd& x) const {
  double err = 0.0;
  for (int pos : diagonal_) err = std::max(err, std::abs(x(pos).imag()));
  for (const auto& [p, q] : mirror_pairs_) err = std::max(err, std::abs(x(p) - std::conj(x(q))));
  return err;
}

}  // namespace entangler
