#pragma once

#include <Eigen/Dense>

#include "gsq/gaussian.hpp"
#include "gsq/graph.hpp"

namespace gsq::witness {

// Metrologically relevant squeezing: quadrature variance referenced to the
// interferometer contrast. Below 1 beats the standard quantum limit.
double wineland(double zeta2, double contrast);

// Contrast inferred from spin populations (n0 is the initial level).
double contrast_from_populations(double n_plus, double n_zero,
                                 double n_minus);

// Product criteria on a pair of sites, evaluated in the frame the state is
// handed over in (readout rotations must already be applied). Both are
// entanglement witnesses when below 1.

// min over the commuting pairs u = (x_a + s x_b)/sqrt(2),
// v = (p_a - s p_b)/sqrt(2), s = +-1, of Var(u) Var(v).
double mancini_product(const gaussian::GaussianState& state, int a, int b);

// Var(x_b | x_a) Var(p_b | p_a): site b steered by measurements on a.
double steering_product(const gaussian::GaussianState& state, int a, int b);

struct Estimate {
  double value = 0;
  double se = 0;  // jackknife standard error
};

// (bound - value)/se: positive z means the witness beats the bound.
double zscore(const Estimate& e, double bound);

// Sample-based versions on measurement records with columns
// (x_1..x_M, p_1..p_M), one trial per row. `subtract` is a detection-noise
// floor removed from each variance before forming the product.
Estimate mancini_from_samples(const Eigen::MatrixXd& records, int a, int b,
                              double subtract = 0);
Estimate steering_from_samples(const Eigen::MatrixXd& records, int a, int b,
                               double subtract = 0);

// Normalized nullifier variances v_i = Var(p_i - sum_j A_ij x_j)/(1 + c_i),
// c_i the squared column norm of the adjacency.
Eigen::VectorXd nullifier_variances(const gaussian::GaussianState& state,
                                    const graphc::GraphSpec& g,
                                    bool normalized = true);
double mean_nullifier(const gaussian::GaussianState& state,
                      const graphc::GraphSpec& g);
Estimate mean_nullifier_from_samples(const Eigen::MatrixXd& records,
                                     const graphc::GraphSpec& g,
                                     double subtract = 0);

// sqrt(zeta2_min zeta2_max) per mode; 1 for pure states, above 1 with
// decoherence.
Eigen::VectorXd phase_space_areas(const gaussian::GaussianState& state,
                                  const Eigen::MatrixXd& basis);

}  // namespace gsq::witness
