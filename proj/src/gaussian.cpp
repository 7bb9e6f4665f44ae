#include "gsq/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "gsq/errors.hpp"

namespace gsq::gaussian {

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw InputError("mode count must be positive");
  return {Eigen::VectorXd::Zero(2 * n_modes),
          Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  j.topRightCorner(n_modes, n_modes).setIdentity();
  j.bottomLeftCorner(n_modes, n_modes) =
      -Eigen::MatrixXd::Identity(n_modes, n_modes);
  return j;
}

bool is_symplectic(const Eigen::MatrixXd& s, double tol) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return false;
  Eigen::MatrixXd j = symplectic_form(static_cast<int>(s.rows()) / 2);
  return (s * j * s.transpose() - j).cwiseAbs().maxCoeff() <= tol;
}

void apply_symplectic(GaussianState& state, const Eigen::MatrixXd& s) {
  if (s.rows() != state.mean.size())
    throw InputError("symplectic map dimension mismatch");
  if (!is_symplectic(s))
    throw InputError("map is not symplectic (S J S^T != J beyond 1e-9)");
  state.mean = s * state.mean;
  state.cov = s * state.cov * s.transpose();
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(cov.rows()) / 2;
  Eigen::EigenSolver<Eigen::MatrixXd> es(symplectic_form(n) * cov);
  std::vector<double> mags(2 * n);
  for (int i = 0; i < 2 * n; ++i) mags[i] = std::abs(es.eigenvalues()(i));
  // Eigenvalues of J Sigma come in +-i nu pairs; keep one per pair.
  std::sort(mags.begin(), mags.end());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = 0.5 * (mags[2 * i] + mags[2 * i + 1]);
  return out;
}

bool is_physical(const GaussianState& state, double tol) {
  Eigen::VectorXd nu = symplectic_eigenvalues(state.cov);
  return nu.minCoeff() >= 1.0 - tol;
}

namespace {

Eigen::Matrix2d mode_block(const GaussianState& state,
                           const Eigen::VectorXd& v) {
  const int m = state.modes();
  if (v.size() != m) throw InputError("mode pattern length mismatch");
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw InputError("mode pattern must be normalized");
  Eigen::Matrix2d blk;
  blk(0, 0) = v.dot(state.cov.topLeftCorner(m, m) * v);
  blk(0, 1) = v.dot(state.cov.topRightCorner(m, m) * v);
  blk(1, 0) = blk(0, 1);
  blk(1, 1) = v.dot(state.cov.bottomRightCorner(m, m) * v);
  return blk;
}

}  // namespace

double mode_quadrature_variance(const GaussianState& state,
                                const Eigen::VectorXd& v, double phi) {
  Eigen::Matrix2d blk = mode_block(state, v);
  double c = std::cos(phi), s = std::sin(phi);
  return c * c * blk(0, 0) + s * s * blk(1, 1) - 2.0 * s * c * blk(0, 1);
}

ModeEllipse mode_ellipse(const GaussianState& state,
                         const Eigen::VectorXd& v) {
  return mode_ellipse(mode_block(state, v));
}

ModeEllipse mode_ellipse(const Eigen::Matrix2d& blk) {
  // Var(phi) = m + A cos(2 phi) + B sin(2 phi).
  double mid = 0.5 * (blk(0, 0) + blk(1, 1));
  double a = 0.5 * (blk(0, 0) - blk(1, 1));
  double b = -blk(0, 1);
  double r = std::hypot(a, b);
  ModeEllipse out;
  out.zeta2_min = mid - r;
  out.zeta2_max = mid + r;
  double phi = 0.5 * (std::atan2(b, a) + M_PI);
  phi = std::fmod(phi, M_PI);
  if (phi < 0) phi += M_PI;
  out.phi_min = phi;
  return out;
}

void loss_channel(GaussianState& state, const Eigen::VectorXd& v,
                  double transmission) {
  if (transmission < 0.0 || transmission > 1.0)
    throw InputError("transmission must lie in [0, 1]");
  const int m = state.modes();
  if (v.size() != m) throw InputError("mode pattern length mismatch");
  Eigen::MatrixXd proj = v * v.transpose();
  Eigen::MatrixXd attn =
      Eigen::MatrixXd::Identity(m, m) + (std::sqrt(transmission) - 1.0) * proj;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  s.topLeftCorner(m, m) = attn;
  s.bottomRightCorner(m, m) = attn;
  Eigen::MatrixXd vac = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  vac.topLeftCorner(m, m) = proj;
  vac.bottomRightCorner(m, m) = proj;
  state.mean = s * state.mean;
  state.cov = s * state.cov * s.transpose() + (1.0 - transmission) * vac;
}

GaussianState basis_change(const GaussianState& state,
                           const Eigen::MatrixXd& v) {
  const int m = state.modes();
  if (v.rows() != m || v.cols() != m)
    throw InputError("mode basis must be M x M");
  if ((v.transpose() * v - Eigen::MatrixXd::Identity(m, m))
          .cwiseAbs()
          .maxCoeff() > 1e-9)
    throw InputError("mode basis must be orthogonal");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  s.topLeftCorner(m, m) = v.transpose();
  s.bottomRightCorner(m, m) = v.transpose();
  GaussianState out = state;
  out.mean = s * out.mean;
  out.cov = s * out.cov * s.transpose();
  return out;
}

Eigen::MatrixXd conditional_covariance(const Eigen::MatrixXd& cov,
                                       const std::vector<int>& keep,
                                       const std::vector<int>& measured) {
  auto slice = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < cols.size(); ++c)
        out(r, c) = cov(rows[r], cols[c]);
    return out;
  };
  Eigen::MatrixXd saa = slice(keep, keep);
  if (measured.empty()) return saa;
  Eigen::MatrixXd sab = slice(keep, measured);
  Eigen::MatrixXd sbb = slice(measured, measured);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sbb);
  if (es.info() != Eigen::Success)
    throw NumericalError("measured-block eigendecomposition failed");
  double cut = 1e-12 * std::max(es.eigenvalues().maxCoeff(), 0.0);
  Eigen::VectorXd inv = es.eigenvalues();
  for (int i = 0; i < inv.size(); ++i)
    inv(i) = es.eigenvalues()(i) > cut ? 1.0 / es.eigenvalues()(i) : 0.0;
  Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() *
                         es.eigenvectors().transpose();
  return saa - sab * pinv * sab.transpose();
}

}  // namespace gsq::gaussian
