#pragma once

#include <vector>

#include <Eigen/Dense>

namespace gsq::gaussian {

// Multimode Gaussian state over quadratures (x_1..x_M, p_1..p_M), normalized
// so the vacuum covariance is the identity (Var x * Var p >= 1).
struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int modes() const { return static_cast<int>(mean.size()) / 2; }
};

GaussianState vacuum(int n_modes);

// J = [[0, I], [-I, 0]] in the xxpp ordering.
Eigen::MatrixXd symplectic_form(int n_modes);

bool is_symplectic(const Eigen::MatrixXd& s, double tol = 1e-9);

// In-place mean -> S mean, cov -> S cov S^T. Throws if S is not symplectic.
void apply_symplectic(GaussianState& state, const Eigen::MatrixXd& s);

// Magnitudes of the Williamson spectrum, ascending. Physical states have all
// values >= 1 in this normalization.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);
bool is_physical(const GaussianState& state, double tol = 1e-9);

// Variance of cos(phi) x_v - sin(phi) p_v for the collective mode with
// orthonormal site pattern v.
double mode_quadrature_variance(const GaussianState& state,
                                const Eigen::VectorXd& v, double phi);

struct ModeEllipse {
  double zeta2_min = 0;
  double zeta2_max = 0;
  double phi_min = 0;  // radians in [0, pi)
};
ModeEllipse mode_ellipse(const GaussianState& state, const Eigen::VectorXd& v);
ModeEllipse mode_ellipse(const Eigen::Matrix2d& block);

// Beam splitter of the given transmission mixing mode v with vacuum.
void loss_channel(GaussianState& state, const Eigen::VectorXd& v,
                  double transmission);

// Re-express the state in the mode basis given by the orthogonal columns of
// V: x~_m = sum_i V_im x_i, same for p.
GaussianState basis_change(const GaussianState& state,
                           const Eigen::MatrixXd& v);

// Covariance of the quadratures `keep` conditioned on homodyne outcomes of
// the quadratures `measured` (indices into the length-2M quadrature vector).
// The measured block is inverted by eigenvalue-thresholded pseudo-inverse.
Eigen::MatrixXd conditional_covariance(const Eigen::MatrixXd& cov,
                                       const std::vector<int>& keep,
                                       const std::vector<int>& measured);

}  // namespace gsq::gaussian
