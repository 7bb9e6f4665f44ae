#include "gsq/spin1.hpp"

#include <cmath>
#include <map>

#include "gsq/errors.hpp"

namespace gsq::spin1 {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix3cd fmat(int axis) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  switch (axis) {
    case 0:  // fx
      m(0, 1) = s; m(1, 0) = s; m(1, 2) = s; m(2, 1) = s;
      break;
    case 1:  // fy
      m(0, 1) = -kI * s; m(1, 0) = kI * s;
      m(1, 2) = -kI * s; m(2, 1) = kI * s;
      break;
    default:  // fz
      m(0, 0) = 1.0; m(2, 2) = -1.0;
      break;
  }
  return m;
}

// q^{ab} = fa fb + fb fa - (4/3) delta_{ab}.
Eigen::Matrix3cd qmat(int a, int b) {
  Eigen::Matrix3cd fa = fmat(a), fb = fmat(b);
  Eigen::Matrix3cd q = fa * fb + fb * fa;
  if (a == b) q -= (4.0 / 3.0) * Eigen::Matrix3cd::Identity();
  return q;
}

}  // namespace

Eigen::Matrix3cd single_particle(Op k) {
  switch (k) {
    case Op::Fx: return fmat(0);
    case Op::Fy: return fmat(1);
    case Op::Fz: return fmat(2);
    case Op::Qxx: return qmat(0, 0);
    case Op::Qyy: return qmat(1, 1);
    case Op::Qzz: return qmat(2, 2);
    case Op::Qxy: return qmat(0, 1);
    case Op::Qyz: return qmat(1, 2);
    case Op::Qxz: return qmat(0, 2);
    case Op::Q0: return qmat(2, 2) + Eigen::Matrix3cd::Identity() / 3.0;
  }
  throw InputError("unknown spin-1 operator kind");
}

SymmetricBasis::SymmetricBasis(int n_atoms) : n_(n_atoms) {
  if (n_atoms < 1) throw InputError("atom number must be positive");
  states_.reserve((n_atoms + 1) * (n_atoms + 2) / 2);
  for (int np = 0; np <= n_atoms; ++np)
    for (int n0 = 0; n0 + np <= n_atoms; ++n0) states_.emplace_back(np, n0);
}

int SymmetricBasis::index(int n_plus, int n_zero) const {
  if (n_plus < 0 || n_zero < 0 || n_plus + n_zero > n_)
    throw InputError("occupation outside symmetric basis");
  // Lexicographic layout: block n_plus starts after sum of earlier blocks.
  return n_plus * (2 * n_ + 3 - n_plus) / 2 + n_zero;
}

SparseOp collective(const SymmetricBasis& basis, const Eigen::Matrix3cd& op) {
  const int n = basis.atoms();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(basis.dim()) * 9);
  for (int idx = 0; idx < basis.dim(); ++idx) {
    auto [np, n0] = basis.occupation(idx);
    int occ[3] = {np, n0, n - np - n0};  // mode order m = +1, 0, -1
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        Complex amp = op(a, b);
        if (amp == Complex(0.0, 0.0)) continue;
        if (a == b) {
          trip.emplace_back(idx, idx, amp * double(occ[a]));
          continue;
        }
        // c_a^dag c_b moves one atom from mode b to mode a.
        if (occ[b] == 0) continue;
        int dst[3] = {occ[0], occ[1], occ[2]};
        dst[b] -= 1;
        dst[a] += 1;
        double w = std::sqrt(double(occ[b]) * double(dst[a]));
        trip.emplace_back(basis.index(dst[0], dst[1]), idx, amp * w);
      }
    }
  }
  SparseOp out(basis.dim(), basis.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SparseOp collective(const SymmetricBasis& basis, Op k) {
  return collective(basis, single_particle(k));
}

Eigen::VectorXcd coherent_m0(const SymmetricBasis& basis) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
  psi(basis.index(0, basis.atoms())) = 1.0;
  return psi;
}

SparseOp hamiltonian(const SymmetricBasis& basis, double chi, double q) {
  SparseOp fx = collective(basis, Op::Fx);
  SparseOp fy = collective(basis, Op::Fy);
  SparseOp q0 = collective(basis, Op::Q0);
  SparseOp h = (chi / (2.0 * basis.atoms())) *
                   (SparseOp(fx * fx) + SparseOp(fy * fy)) +
               (q / 2.0) * q0;
  return h;
}

namespace {

// One fixed-step RK4 pass of d psi/dt = -i Hs psi on a sector.
Eigen::VectorXcd rk4_sector(const Eigen::MatrixXcd& hs,
                            Eigen::VectorXcd psi, double t) {
  double hnorm = hs.cwiseAbs().rowwise().sum().maxCoeff();  // Gershgorin bound
  int steps = std::max(1, int(std::ceil(std::abs(t) * hnorm / 0.01)));
  double dt = t / steps;
  auto deriv = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return -kI * (hs * v);
  };
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd k1 = deriv(psi);
    Eigen::VectorXcd k2 = deriv(psi + 0.5 * dt * k1);
    Eigen::VectorXcd k3 = deriv(psi + 0.5 * dt * k2);
    Eigen::VectorXcd k4 = deriv(psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw NumericalError("integrator norm drift exceeded 1e-10");
  return psi;
}

}  // namespace

Eigen::VectorXcd evolve_exact(const SymmetricBasis& basis,
                              const Eigen::VectorXcd& psi0, double chi,
                              double q, double t, int dense_cap) {
  if (psi0.size() != basis.dim())
    throw InputError("state dimension does not match basis");
  const int n = basis.atoms();

  // Group basis states by magnetization 2*np + n0 - N (conserved by H).
  std::map<int, std::vector<int>> sectors;
  for (int idx = 0; idx < basis.dim(); ++idx) {
    auto [np, n0] = basis.occupation(idx);
    sectors[2 * np + n0 - n].push_back(idx);
  }

  SparseOp h = hamiltonian(basis, chi, q);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis.dim());
  for (auto& [mag, idxs] : sectors) {
    double weight = 0.0;
    for (int i : idxs) weight += std::norm(psi0(i));
    if (weight < 1e-30) continue;

    const int d = static_cast<int>(idxs.size());
    Eigen::MatrixXcd hs(d, d);
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXcd col = h.col(idxs[c]);
      for (int r = 0; r < d; ++r) hs(r, c) = col(idxs[r]);
    }
    Eigen::VectorXcd sec(d);
    for (int i = 0; i < d; ++i) sec(i) = psi0(idxs[i]);

    Eigen::VectorXcd evolved;
    if (d <= dense_cap) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
      if (es.info() != Eigen::Success)
        throw NumericalError("sector eigendecomposition failed");
      Eigen::VectorXcd phases(d);
      for (int i = 0; i < d; ++i)
        phases(i) = std::exp(-kI * (t * es.eigenvalues()(i)));
      evolved = es.eigenvectors() *
                (phases.asDiagonal() * (es.eigenvectors().adjoint() * sec));
    } else {
      double norm = sec.norm();
      evolved = norm * rk4_sector(hs, sec / norm, t);
    }
    for (int i = 0; i < d; ++i) out(idxs[i]) = evolved(i);
  }
  return out;
}

Complex expectation(const SparseOp& op, const Eigen::VectorXcd& psi) {
  return psi.dot(op * psi);
}

double variance(const SparseOp& op, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd w = op * psi;
  double second = w.squaredNorm();  // op assumed Hermitian
  double first = psi.dot(w).real();
  return second - first * first;
}

double quadrature_variance(const SymmetricBasis& basis,
                           const Eigen::VectorXcd& psi, double phi) {
  SparseOp quad = std::cos(phi) * collective(basis, Op::Fx) -
                  std::sin(phi) * collective(basis, Op::Qyz);
  return variance(quad, psi);
}

double contrast(const SymmetricBasis& basis, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd wx = collective(basis, Op::Fx) * psi;
  Eigen::VectorXcd wq = collective(basis, Op::Qyz) * psi;
  Complex comm = wx.dot(wq) - wq.dot(wx);  // <[Fx, Qyz]>
  return std::abs(comm) / (2.0 * basis.atoms());
}

}  // namespace gsq::spin1
