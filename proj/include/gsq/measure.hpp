#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "gsq/gaussian.hpp"
#include "gsq/graph.hpp"

namespace gsq::measure {

// Deterministic per-trial random stream. Each (seed, stream) pair is an
// independent generator, so trial t of a run can be reproduced without
// replaying trials 0..t-1.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed, std::uint64_t stream = 0);
  std::uint64_t next_u64();
  double uniform();   // (0, 1]
  double gaussian();  // standard normal, Box-Muller
 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0;
};

// n_trials homodyne records of every quadrature, one row per trial with
// columns (x_1..x_M, p_1..p_M). Trial t uses stream (salt, t), so records
// are independent across salts and reproducible row by row.
Eigen::MatrixXd sample_records(const gaussian::GaussianState& state,
                               long n_trials, std::uint64_t seed,
                               std::uint64_t salt = 0);

double sample_variance(const Eigen::VectorXd& values);  // unbiased

// Variance of the collective quadrature of mode pattern v measured at each
// requested angle; every angle is an independent run of n_trials shots.
Eigen::VectorXd variance_scan(const gaussian::GaussianState& state,
                              const Eigen::VectorXd& v,
                              const Eigen::VectorXd& angles, long n_trials,
                              std::uint64_t seed);

// Fit V(phi) = c0 + c1 cos(2 phi) + c2 sin(2 phi) and convert to an
// ellipse. Needs at least 5 angles spanning at least pi/2.
struct EllipseFit {
  gaussian::ModeEllipse ellipse;
  double c0 = 0, c1 = 0, c2 = 0;
};
EllipseFit sinusoid_variance_fit(const Eigen::VectorXd& angles,
                                 const Eigen::VectorXd& variances);

// Single-shot nullifier values, one row per trial, one column per site.
// Uses two readout settings: each half of the bipartition is rotated by
// pi/2 while its neighbors are read in x.
Eigen::MatrixXd nullifier_samples(const gaussian::GaussianState& state,
                                  const graphc::GraphSpec& g, long n_trials,
                                  std::uint64_t seed);

// Fluorescence imaging of two spin populations. Differential counts carry
// atomic projection noise with slope r per detected count, detection noise
// with slope g, and fractional intensity noise a2 at second order.
struct ImagingModel {
  double r = 395;    // photoelectrons per atom
  double g = 20;     // detection noise slope
  double a0 = 0;     // count-independent floor
  double a2 = 5e-5;  // quadratic coefficient
};

// Differential counts c_plus - c_minus for n_trials preparations with the
// given expected total counts; with_atoms enables the projection-noise
// term.
Eigen::VectorXd simulate_differential(const ImagingModel& model,
                                      double total_counts, bool with_atoms,
                                      long n_trials, std::uint64_t seed,
                                      std::uint64_t salt = 0);

// Weighted quadratic fit of variance against total counts. Weights follow
// the chi-square variance of each sample variance, 2 V^2 / n.
struct QuadraticFit {
  double a0 = 0, a1 = 0, a2 = 0;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
};
QuadraticFit projection_noise_fit(const Eigen::VectorXd& totals,
                                  const Eigen::VectorXd& variances,
                                  const Eigen::VectorXd& trials);

// Damped Rabi oscillation y = A exp(-(gamma t)^2) cos(2 Omega t) + d.
struct RabiParams {
  double amplitude = 1;
  double gamma = 0;
  double omega = 1;
  double offset = 0;
};
Eigen::VectorXd rabi_signal(const RabiParams& p, const Eigen::VectorXd& t);
Eigen::VectorXd simulate_rabi(const RabiParams& p, const Eigen::VectorXd& t,
                              double sigma, std::uint64_t seed,
                              std::uint64_t salt = 0);

// Multi-start Gauss-Newton least squares. omega_hint sets the search grid.
struct RabiFit {
  RabiParams params;
  double contrast = 0;  // A (1 + exp(-(gamma pi / 2 Omega)^2)) / 2
  double sse = 0;
  int iterations = 0;
};
RabiFit rabi_fit(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                 double omega_hint);
double rabi_contrast(const RabiParams& p);

}  // namespace gsq::measure
