// hilbert.hpp: truncated Fock-space and qutrit operator algebra.
//
// The composite space is qutrit (x) mode a (x) mode b. Basis order is
// qutrit-major, then mode a, then mode b:
//
//   flat(level, n, m) = ((level * (n_max_a + 1)) + n) * (n_max_b + 1) + m
//
// with level g=0, e=1, f=2. Every operator and state in the library uses this
// order; embed() builds Kronecker products in the same order.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace entangler {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

enum class Level : int { g = 0, e = 1, f = 2 };

inline constexpr int kQutritDim = 3;

char level_name(Level level);

struct ModeTruncation {
  int n_max_a = 0;
  int n_max_b = 0;
};

struct BasisLabel {
  Level level = Level::g;
  int n = 0;
  int m = 0;
};

// Index arithmetic for the fixed composite ordering.
class CompositeSpace {
 public:
  CompositeSpace() = default;
  explicit CompositeSpace(ModeTruncation truncation);

  int dim_a() const { return trunc_.n_max_a + 1; }
  int dim_b() const { return trunc_.n_max_b + 1; }
  int resonator_dim() const { return dim_a() * dim_b(); }
  int dim() const { return kQutritDim * resonator_dim(); }
  const ModeTruncation& truncation() const { return trunc_; }

  int index(Level level, int n, int m) const {
    return ((static_cast<int>(level) * dim_a()) + n) * dim_b() + m;
  }
  int resonator_index(int n, int m) const { return n * dim_b() + m; }
  BasisLabel label(int flat) const;
  bool contains(int n, int m) const {
    return n >= 0 && m >= 0 && n <= trunc_.n_max_a && m <= trunc_.n_max_b;
  }

 private:
  ModeTruncation trunc_{};
};

// Annihilation operator on {|0>, ..., |cutoff>}: <n-1|a|n> = sqrt(n).
Operator ladder_operator(int cutoff);
Operator number_operator(int cutoff);
Operator identity(int dim);

// |k><j| on the qutrit.
Operator qutrit_projector(Level k, Level j);

// Probability mass of the Poisson distribution |alpha|^2 above `cutoff`.
double coherent_tail(Complex amplitude, int cutoff);

inline constexpr double kDefaultTailTolerance = 1e-8;

// Truncated coherent state, renormalized. Throws NumericalError
// ("cutoff too small for amplitude") when the discarded tail exceeds tol.
StateVector coherent_state(Complex amplitude, int cutoff,
                           double tail_tolerance = kDefaultTailTolerance);

// exp(alpha a^dag - alpha^* a) on the truncated mode, same tail guard.
Operator displacement_operator(Complex amplitude, int cutoff,
                               double tail_tolerance = kDefaultTailTolerance);

// Smallest cutoff whose coherent-state tail is below tol.
int minimal_cutoff(Complex amplitude, double tail_tolerance = kDefaultTailTolerance);

Operator kron(const Operator& lhs, const Operator& rhs);
StateVector kron(const StateVector& lhs, const StateVector& rhs);

// qutrit (x) a (x) b. qutrit_op must be 3x3.
Operator embed(const Operator& qutrit_op, const Operator& a_op, const Operator& b_op);
StateVector embed_state(const StateVector& qutrit, const StateVector& a, const StateVector& b);

// Tr_q over the leading qutrit factor; rho.rows() must be divisible by 3.
DensityMatrix partial_trace_qutrit(const DensityMatrix& rho);

// max |A - A^dag|
double hermiticity_error(const Operator& op);

DensityMatrix outer(const StateVector& psi);

}  // namespace entangler
