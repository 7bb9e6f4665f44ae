#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gsq/gaussian.hpp"

namespace gsq::graphc {

// Weighted undirected graph: symmetric adjacency with zero diagonal.
struct GraphSpec {
  Eigen::MatrixXd adjacency;
  int size() const { return static_cast<int>(adjacency.rows()); }
};

GraphSpec epr_graph();
GraphSpec square_graph();
GraphSpec edgeless_graph(int n_sites);
GraphSpec from_adjacency(const Eigen::MatrixXd& a);

// Adjacency eigendecomposition, eigenvalues descending. Within degenerate
// eigenspaces the basis is rotated onto +-1/sqrt(M) sign patterns when the
// space contains them, so routable graphs always present sign-pattern
// columns.
struct Eigenmodes {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
Eigenmodes eigenmodes(const GraphSpec& g);

// Quadrature angle arccot(lambda) in (0, pi).
double target_angle(double lambda);
Eigen::VectorXd target_angles(const Eigen::VectorXd& values);

// Pulse-sequence alphabet.
struct Squeeze {
  double chi, q, tau;
};
struct GlobalSpinor {
  double phi;
};
struct LocalSpinor {
  std::vector<int> sites;
  double phi;
};
struct LocalPiFlip {
  std::vector<int> sites;
};
struct ReadoutRotation {
  std::vector<int> sites;
};
using Step =
    std::variant<Squeeze, GlobalSpinor, LocalSpinor, LocalPiFlip,
                 ReadoutRotation>;

struct PulseParams {
  double chi, q;
};

struct CompiledSequence {
  int modes = 0;
  std::vector<Step> steps;
  Eigen::VectorXd eigenvalues;  // descending, for reporting
  Eigen::MatrixXd mode_basis;   // columns matching `eigenvalues`
  Eigen::VectorXd angles;       // target angles, radians
};

// Compile the graph into squeeze pulses on the cavity-coupled symmetric
// mode, sign flips routing it across eigenmodes, and global spinor
// rotations setting each mode's final quadrature angle to arccot(lambda_m).
// Pulse length is tau = r/lambda(chi, q). Throws UnroutableGraphError when
// an eigenmode is not a sign pattern.
CompiledSequence compile(const GraphSpec& g, double squeeze_r,
                         const PulseParams& pulse);

struct NoiseChannels {
  bool enabled = false;
  double gamma_coll = 0;  // collective decay via the cavity
  double gamma_sc = 0;    // free-space scattering
};

gaussian::GaussianState simulate(const CompiledSequence& seq,
                                 const NoiseChannels& noise = {});
gaussian::GaussianState simulate_steps(const std::vector<Step>& steps,
                                       int n_modes,
                                       const NoiseChannels& noise = {});
void apply_steps(gaussian::GaussianState& state,
                 const std::vector<Step>& steps,
                 const NoiseChannels& noise = {});

// Two-coloring of the graph; throws UnroutableGraphError on odd cycles.
// first/second hold the site indices of each color class.
std::pair<std::vector<int>, std::vector<int>> bipartition(
    const GraphSpec& g);

// Principal axes of each column of V on the given state.
std::vector<gaussian::ModeEllipse> mode_report(
    const gaussian::GaussianState& state, const Eigen::MatrixXd& v);

// Per-mode squeezing ellipse prescribed directly in the mode basis.
struct ModeSpec {
  double zeta2_min, zeta2_max, phi_min;
};
gaussian::GaussianState state_from_modes(const std::vector<ModeSpec>& modes,
                                         const Eigen::MatrixXd& v);

// A_ij = Cov(p_i, x_j) / Var(x_j), from a state or from sampled records
// (rows = trials, columns = (x_1..x_M, p_1..p_M)).
Eigen::MatrixXd reconstruct_adjacency(const gaussian::GaussianState& state);
Eigen::MatrixXd reconstruct_adjacency(const Eigen::MatrixXd& records);

// Corr(x_i, p_j).
Eigen::MatrixXd correlation_xp(const gaussian::GaussianState& state);

// Product-state lower bound on the mean normalized nullifier variance.
// `closed_form` is the regular-graph expression sum_j 2 sqrt(c_j) /
// sum_i (1 + c_i); `minimized` is a numerical coordinate-descent minimum
// valid for any graph.
struct SeparabilityBound {
  double closed_form = 0;
  double minimized = 0;
  bool regular = false;
};
SeparabilityBound separability_bound(const GraphSpec& g);

}  // namespace gsq::graphc
