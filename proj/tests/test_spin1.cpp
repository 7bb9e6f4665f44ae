#include "gsq/spin1.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "gsq/errors.hpp"

using namespace gsq;
using namespace gsq::spin1;
using Eigen::Matrix3cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

const Complex kJ{0.0, 1.0};
const double kSqrt2Inv = 1.0 / std::sqrt(2.0);

// Reference single-particle matrices, written out independently of the
// builder in src/spin1.cpp (which derives the quadrupoles from products of
// the f matrices).
Matrix3cd ref_fx() {
  Matrix3cd m;
  m << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  return kSqrt2Inv * m;
}

Matrix3cd ref_fy() {
  Matrix3cd m;
  m << 0, -kJ, 0, kJ, 0, -kJ, 0, kJ, 0;
  return kSqrt2Inv * m;
}

Matrix3cd ref_fz() {
  Matrix3cd m = Matrix3cd::Zero();
  m(0, 0) = 1;
  m(2, 2) = -1;
  return m;
}

Matrix3cd ref_q0() {
  Matrix3cd m = Matrix3cd::Zero();
  m(0, 0) = 1;
  m(1, 1) = -1;
  m(2, 2) = 1;
  return m;
}

Matrix3cd ref_qyz() {
  Matrix3cd m;
  m << 0, -1, 0, 1, 0, 1, 0, -1, 0;
  return kJ * kSqrt2Inv * m;
}

Matrix3cd ref_qzz() {
  Matrix3cd m = Matrix3cd::Zero();
  m(0, 0) = 2.0 / 3.0;
  m(1, 1) = -4.0 / 3.0;
  m(2, 2) = 2.0 / 3.0;
  return m;
}

double mdiff(const MatrixXcd& a, const MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Exact zeta^2 for N=16, chi=-q, lambda t=0.3, frozen from the first
// verified run of this module.
constexpr double kFrozenZeta2N16 = 0.564374097821776;

// D = (Qzz + Qyy - Qxx)/4 + N/3 as a collective matrix.
MatrixXcd collective_d(const SymmetricBasis& basis) {
  MatrixXcd qzz = collective(basis, Op::Qzz);
  MatrixXcd qyy = collective(basis, Op::Qyy);
  MatrixXcd qxx = collective(basis, Op::Qxx);
  return (qzz + qyy - qxx) / 4.0 +
         (basis.atoms() / 3.0) *
             MatrixXcd::Identity(basis.dim(), basis.dim());
}

}  // namespace

TEST_CASE("single-particle spin-1 matrices match references") {
  CHECK(mdiff(single_particle(Op::Fx), ref_fx()) < 1e-15);
  CHECK(mdiff(single_particle(Op::Fy), ref_fy()) < 1e-15);
  CHECK(mdiff(single_particle(Op::Fz), ref_fz()) < 1e-15);
  CHECK(mdiff(single_particle(Op::Q0), ref_q0()) < 1e-15);
  CHECK(mdiff(single_particle(Op::Qyz), ref_qyz()) < 1e-15);
  CHECK(mdiff(single_particle(Op::Qzz), ref_qzz()) < 1e-15);
}

TEST_CASE("quadrupole trace identity and hermiticity") {
  Matrix3cd sum = single_particle(Op::Qxx) + single_particle(Op::Qyy) +
                  single_particle(Op::Qzz);
  CHECK(sum.cwiseAbs().maxCoeff() < 1e-15);
  for (Op k : {Op::Fx, Op::Fy, Op::Fz, Op::Qxy, Op::Qyz, Op::Qxz, Op::Q0}) {
    Matrix3cd m = single_particle(k);
    CHECK(mdiff(m, m.adjoint()) < 1e-15);
  }
}

TEST_CASE("symmetric basis dimension and index round trip") {
  for (int n : {1, 2, 5, 11}) {
    SymmetricBasis basis(n);
    CHECK(basis.dim() == (n + 1) * (n + 2) / 2);
    for (int idx = 0; idx < basis.dim(); ++idx) {
      auto [np, n0] = basis.occupation(idx);
      CHECK(basis.index(np, n0) == idx);
    }
  }
  CHECK_THROWS_AS(SymmetricBasis(0), InputError);
}

TEST_CASE("coherent m0 moments") {
  for (int n : {2, 7}) {
    SymmetricBasis basis(n);
    VectorXcd psi = coherent_m0(basis);
    SparseOp fx = collective(basis, Op::Fx);
    SparseOp q0 = collective(basis, Op::Q0);
    SparseOp qyz = collective(basis, Op::Qyz);
    CHECK(expectation(q0, psi).real() == doctest::Approx(-n).epsilon(1e-12));
    CHECK(std::abs(expectation(fx, psi)) < 1e-12);
    CHECK(variance(fx, psi) == doctest::Approx(n).epsilon(1e-12));
    CHECK(variance(qyz, psi) == doctest::Approx(n).epsilon(1e-12));
    // Quadrature variance is isotropic on the coherent state.
    for (double phi : {0.0, 0.4, 1.1})
      CHECK(quadrature_variance(basis, psi, phi) ==
            doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("collective commutator identities") {
  for (int n = 1; n <= 5; ++n) {
    SymmetricBasis basis(n);
    MatrixXcd fx = collective(basis, Op::Fx);
    MatrixXcd q0 = collective(basis, Op::Q0);
    MatrixXcd qyz = collective(basis, Op::Qyz);
    MatrixXcd id = MatrixXcd::Identity(basis.dim(), basis.dim());

    CHECK(mdiff(qyz * q0 - q0 * qyz, 2.0 * kJ * fx) < 1e-12);
    CHECK(mdiff(q0 * fx - fx * q0, 2.0 * kJ * qyz) < 1e-12);
    CHECK(mdiff(fx * qyz - qyz * fx, 2.0 * kJ * (q0 - collective_d(basis))) <
          1e-12);
    (void)id;
  }
}

TEST_CASE("readout contrast of the coherent state") {
  SymmetricBasis basis(3);
  VectorXcd psi = coherent_m0(basis);
  // <[Fx, Qyz]> = -2iN on all-m0, so the normalized magnitude is 1.
  MatrixXcd fx = collective(basis, Op::Fx);
  MatrixXcd qyz = collective(basis, Op::Qyz);
  Complex comm = (psi.adjoint() * (fx * qyz - qyz * fx) * psi)(0);
  CHECK(std::abs(comm) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(contrast(basis, psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolution with chi=0 leaves all-m0 invariant up to phase") {
  SymmetricBasis basis(6);
  VectorXcd psi = coherent_m0(basis);
  VectorXcd out = evolve_exact(basis, psi, 0.0, 2.0 * M_PI * 1.2e3, 3e-4);
  CHECK(std::abs(std::abs(psi.dot(out)) - 1.0) < 1e-12);
}

TEST_CASE("evolution is unitary and conserves energy") {
  SymmetricBasis basis(12);
  double q = 2.0 * M_PI * 1.2e3, chi = -q;
  VectorXcd psi = coherent_m0(basis);
  SparseOp h = hamiltonian(basis, chi, q);
  double e0 = expectation(h, psi).real();
  VectorXcd out = evolve_exact(basis, psi, chi, q, 2.5e-4);
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(h, out).real() == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("dense and RK4 propagation agree") {
  SymmetricBasis basis(8);
  double q = 2.0 * M_PI * 1.0e3, chi = -0.7 * q;
  VectorXcd psi = coherent_m0(basis);
  double t = 1.2e-4;
  VectorXcd dense = evolve_exact(basis, psi, chi, q, t);
  VectorXcd rk4 = evolve_exact(basis, psi, chi, q, t, /*dense_cap=*/0);
  CHECK((dense - rk4).norm() < 1e-9);
}

TEST_CASE("squeezing at chi=-q develops along the -45 degree quadrature") {
  SymmetricBasis basis(20);
  double q = 2.0 * M_PI * 1.0e3, chi = -q;
  double lambda = q;  // sqrt(-q(q+2chi)) at chi=-q
  double t = 0.25 / lambda;
  VectorXcd out = evolve_exact(basis, coherent_m0(basis), chi, q, t);
  double n = basis.atoms();
  double vmin = quadrature_variance(basis, out, -M_PI / 4) / n;
  double vmax = quadrature_variance(basis, out, M_PI / 4) / n;
  CHECK(vmin < 1.0);
  CHECK(vmax > 1.0);
  // Finite-size deviation from the Gaussian prediction stays moderate.
  CHECK(vmin == doctest::Approx(std::exp(-2 * lambda * t)).epsilon(0.10));
  CHECK(vmax == doctest::Approx(std::exp(2 * lambda * t)).epsilon(0.10));
}

TEST_CASE("frozen oracle regression point") {
  // Exact minimum-quadrature variance for N=16, chi=-q, lambda*t=0.3,
  // frozen from the first verified run of this module.
  SymmetricBasis basis(16);
  double q = 2.0 * M_PI * 1.5e3;
  double t = 0.3 / q;
  VectorXcd out = evolve_exact(basis, coherent_m0(basis), -q, q, t);
  double zeta2 = quadrature_variance(basis, out, -M_PI / 4) / basis.atoms();
  CHECK(zeta2 == doctest::Approx(kFrozenZeta2N16).epsilon(1e-10));
}
