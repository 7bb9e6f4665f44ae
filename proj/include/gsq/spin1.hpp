#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gsq::spin1 {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;

// Single-particle spin-1 operators in the (m = +1, 0, -1) basis.
enum class Op { Fx, Fy, Fz, Qxx, Qyy, Qzz, Qxy, Qyz, Qxz, Q0 };

Eigen::Matrix3cd single_particle(Op k);

// Permutation-symmetric (bosonic) subspace of N spin-1 atoms, dimension
// (N+1)(N+2)/2, indexed lexicographically by (n_plus, n_zero).
class SymmetricBasis {
 public:
  explicit SymmetricBasis(int n_atoms);
  int atoms() const { return n_; }
  int dim() const { return static_cast<int>(states_.size()); }
  int index(int n_plus, int n_zero) const;
  std::pair<int, int> occupation(int idx) const { return states_[idx]; }

 private:
  int n_;
  std::vector<std::pair<int, int>> states_;
};

// Collective one-body operator sum_i op(i) restricted to the symmetric
// subspace, via the three-mode bosonic representation.
SparseOp collective(const SymmetricBasis& basis, const Eigen::Matrix3cd& op);
SparseOp collective(const SymmetricBasis& basis, Op k);

// All atoms in m = 0.
Eigen::VectorXcd coherent_m0(const SymmetricBasis& basis);

// H = (chi/2N)(Fx Fx + Fy Fy) + (q/2) Q0. Angular frequencies, rad/s.
SparseOp hamiltonian(const SymmetricBasis& basis, double chi, double q);

// Exact propagation of psi0 for time t. H conserves the collective
// magnetization, so the state is evolved sector by sector; each occupied
// sector is exponentiated densely (Hermitian eigendecomposition) up to the
// dimension cap, with a fixed-step RK4 integrator beyond it.
Eigen::VectorXcd evolve_exact(const SymmetricBasis& basis,
                              const Eigen::VectorXcd& psi0, double chi,
                              double q, double t, int dense_cap = 2000);

Complex expectation(const SparseOp& op, const Eigen::VectorXcd& psi);
double variance(const SparseOp& op, const Eigen::VectorXcd& psi);

// Var(Fx cos(phi) - Qyz sin(phi)), unnormalized (divide by N for zeta^2
// in projection-noise units).
double quadrature_variance(const SymmetricBasis& basis,
                           const Eigen::VectorXcd& psi, double phi);

// |<[Fx, Qyz]>| / 2N.
double contrast(const SymmetricBasis& basis, const Eigen::VectorXcd& psi);

}  // namespace gsq::spin1
