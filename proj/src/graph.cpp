#include "gsq/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsq/dynamics.hpp"
#include "gsq/errors.hpp"

namespace gsq::graphc {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double phi) {
  phi = std::fmod(phi, kPi);
  if (phi < 0) phi += kPi;
  return phi;
}

// Wrap to (-pi/2, pi/2]; spinor rotations by pi act as -I per mode and
// leave every covariance unchanged, so this picks the shortest equivalent.
double wrap_half(double phi) {
  phi = wrap_pi(phi);
  if (phi > kPi / 2) phi -= kPi;
  return phi;
}

bool is_sign_pattern(const Eigen::VectorXd& v, Eigen::VectorXd* pattern) {
  const int m = static_cast<int>(v.size());
  const double mag = 1.0 / std::sqrt(static_cast<double>(m));
  Eigen::VectorXd sig(m);
  for (int i = 0; i < m; ++i) {
    if (std::abs(std::abs(v(i)) - mag) > 1e-8 * mag) return false;
    sig(i) = v(i) >= 0 ? mag : -mag;
  }
  if (sig(0) < 0) sig = -sig;
  if (pattern) *pattern = sig;
  return true;
}

}  // namespace

GraphSpec from_adjacency(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw InputError("adjacency matrix must be square and non-empty");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("adjacency matrix must be symmetric");
  if (a.diagonal().cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("adjacency matrix must have zero diagonal");
  return GraphSpec{a};
}

GraphSpec epr_graph() {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  return GraphSpec{a};
}

GraphSpec square_graph() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    a(i, (i + 1) % 4) = 1;
    a((i + 1) % 4, i) = 1;
  }
  return GraphSpec{a};
}

GraphSpec edgeless_graph(int n_sites) {
  if (n_sites < 1) throw InputError("graph needs at least one site");
  return GraphSpec{Eigen::MatrixXd::Zero(n_sites, n_sites)};
}

Eigenmodes eigenmodes(const GraphSpec& g) {
  const int m = g.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.adjacency);
  if (es.info() != Eigen::Success)
    throw NumericalError("adjacency eigendecomposition failed");

  Eigenmodes em;
  em.values.resize(m);
  em.vectors.resize(m, m);
  for (int i = 0; i < m; ++i) {
    em.values(i) = es.eigenvalues()(m - 1 - i);
    em.vectors.col(i) = es.eigenvectors().col(m - 1 - i);
  }

  const double scale = std::max(1.0, em.values.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;

  // Rotate each degenerate block onto sign patterns where possible,
  // enumerating patterns with sigma_1 = +1 in lexicographic order
  // (+1 sorting before -1) so degenerate bases come out deterministic.
  int lo = 0;
  while (lo < m) {
    int hi = lo + 1;
    while (hi < m && std::abs(em.values(hi) - em.values(lo)) <= tol) ++hi;
    const int dim = hi - lo;
    Eigen::MatrixXd block = em.vectors.middleCols(lo, dim);

    std::vector<Eigen::VectorXd> found;
    if (m <= 20) {
      const double mag = 1.0 / std::sqrt(static_cast<double>(m));
      const long total = 1L << (m - 1);
      for (long k = 0; k < total && static_cast<int>(found.size()) < dim;
           ++k) {
        Eigen::VectorXd sig(m);
        sig(0) = mag;
        for (int i = 1; i < m; ++i)
          sig(i) = ((k >> (m - 1 - i)) & 1) ? -mag : mag;
        Eigen::VectorXd resid = sig - block * (block.transpose() * sig);
        if (resid.norm() > 1e-8) continue;
        bool independent = true;
        for (const auto& prev : found)
          if (std::abs(prev.dot(sig)) > 1e-8) independent = false;
        if (independent) found.push_back(sig);
      }
    }
    if (static_cast<int>(found.size()) == dim) {
      for (int j = 0; j < dim; ++j) em.vectors.col(lo + j) = found[j];
    } else {
      for (int j = 0; j < dim; ++j) {
        // Canonical overall sign: first non-negligible entry positive.
        Eigen::VectorXd v = em.vectors.col(lo + j);
        for (int i = 0; i < m; ++i) {
          if (std::abs(v(i)) > 1e-9) {
            if (v(i) < 0) em.vectors.col(lo + j) = -v;
            break;
          }
        }
      }
    }
    lo = hi;
  }
  return em;
}

double target_angle(double lambda) { return std::atan2(1.0, lambda); }

Eigen::VectorXd target_angles(const Eigen::VectorXd& values) {
  Eigen::VectorXd out(values.size());
  for (int i = 0; i < values.size(); ++i) out(i) = target_angle(values(i));
  return out;
}

CompiledSequence compile(const GraphSpec& g, double squeeze_r,
                         const PulseParams& pulse) {
  if (squeeze_r <= 0) throw InputError("squeeze strength must be positive");
  const int m = g.size();
  Eigenmodes em = eigenmodes(g);

  std::vector<Eigen::VectorXd> patterns(m);
  for (int k = 0; k < m; ++k) {
    if (!is_sign_pattern(em.vectors.col(k), &patterns[k]))
      throw UnroutableGraphError(
          "eigenmode " + std::to_string(k) +
          " is not a sign pattern; graph cannot be routed through the "
          "symmetric mode");
  }

  const dynamics::SqueezingRate rate =
      dynamics::squeezing_rate(pulse.chi, pulse.q);
  if (!rate.hyperbolic)
    throw InputError("pulse parameters are stable and cannot squeeze");
  const double tau = squeeze_r / rate.rate;

  // Intrinsic single-pulse ellipse on vacuum.
  const Eigen::Matrix2d s2 = dynamics::squeeze_map(pulse.chi, pulse.q, tau);
  gaussian::GaussianState probe = gaussian::vacuum(1);
  probe.cov = s2 * s2.transpose();
  const gaussian::ModeEllipse intrinsic =
      gaussian::mode_ellipse(probe, Eigen::VectorXd::Ones(1));

  // Schedule modes in ascending eigenvalue order; the symmetric
  // (largest-eigenvalue, all-plus for connected graphs) mode goes last so
  // the sequence ends with no residual flip for regular connected graphs.
  std::vector<int> order(m);
  for (int k = 0; k < m; ++k) order[k] = m - 1 - k;

  // Mode squeezed at step k (1-based) later rotates by q*tau during each
  // of the remaining M-k pulses and by every remaining spinor phase. Solve
  // for cumulative phases T_k = sum_{j>=k} Phi_j so each mode lands on its
  // target angle, then difference to get the per-step spinors.
  std::vector<double> cum(m + 1, 0.0);
  for (int k = m; k >= 1; --k) {
    const int mode = order[k - 1];
    const double target = target_angle(em.values(mode));
    cum[k - 1 + 1] = wrap_pi(intrinsic.phi_min - (m - k) * pulse.q * tau -
                             target);  // T_k stored at index k
  }

  CompiledSequence seq;
  seq.modes = m;
  seq.eigenvalues = em.values;
  seq.mode_basis = em.vectors;
  seq.angles = target_angles(em.values);

  for (int k = 1; k <= m; ++k) {
    seq.steps.push_back(Squeeze{pulse.chi, pulse.q, tau});

    // Flip set: sites where consecutive scheduled patterns differ; after
    // the last pulse, sites where the final pattern is negative.
    const Eigen::VectorXd& cur = patterns[order[k - 1]];
    std::vector<int> flips;
    if (k < m) {
      const Eigen::VectorXd& nxt = patterns[order[k]];
      for (int i = 0; i < m; ++i)
        if (cur(i) * nxt(i) < 0) flips.push_back(i);
    } else {
      for (int i = 0; i < m; ++i)
        if (cur(i) < 0) flips.push_back(i);
    }
    if (!flips.empty()) seq.steps.push_back(LocalPiFlip{flips});

    const double tk = cum[k];
    const double tk_next = k < m ? cum[k + 1] : 0.0;
    const double phi = wrap_half(tk - tk_next);
    if (std::abs(phi) > 1e-12) seq.steps.push_back(GlobalSpinor{phi});
  }

  // Internal consistency: noiseless simulation must land every mode on its
  // target angle (degenerate to a circle never happens since r > 0).
  gaussian::GaussianState check = simulate(seq);
  const auto report = mode_report(check, seq.mode_basis);
  for (int k = 0; k < m; ++k) {
    double diff = wrap_half(report[k].phi_min - seq.angles(k));
    if (std::abs(diff) > 1e-6)
      throw NumericalError("compiled sequence missed a target angle");
  }
  return seq;
}

namespace {

// Symplectic with 2x2 block `coupled` on mode u (unit vector) and the
// same rotation angle `theta` on the orthogonal complement.
Eigen::MatrixXd mode_selective(const Eigen::VectorXd& u,
                               const Eigen::Matrix2d& coupled,
                               double theta) {
  const int m = static_cast<int>(u.size());
  const Eigen::MatrixXd proj = u * u.transpose();
  const Eigen::MatrixXd rest = Eigen::MatrixXd::Identity(m, m) - proj;
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::MatrixXd sp(2 * m, 2 * m);
  sp.topLeftCorner(m, m) = c * rest + coupled(0, 0) * proj;
  sp.topRightCorner(m, m) = -s * rest + coupled(0, 1) * proj;
  sp.bottomLeftCorner(m, m) = s * rest + coupled(1, 0) * proj;
  sp.bottomRightCorner(m, m) = c * rest + coupled(1, 1) * proj;
  return sp;
}

Eigen::MatrixXd sitewise_rotation(int m, const std::vector<int>& sites,
                                  double phi) {
  Eigen::VectorXd dc = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd ds = Eigen::VectorXd::Zero(m);
  for (int i : sites) {
    if (i < 0 || i >= m) throw InputError("site index out of range");
    dc(i) = std::cos(phi);
    ds(i) = std::sin(phi);
  }
  Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  sp.topLeftCorner(m, m) = dc.asDiagonal();
  sp.topRightCorner(m, m) = (-ds).asDiagonal();
  sp.bottomLeftCorner(m, m) = ds.asDiagonal();
  sp.bottomRightCorner(m, m) = dc.asDiagonal();
  return sp;
}

double clamp_unit(double t) { return std::clamp(t, 0.0, 1.0); }

}  // namespace

gaussian::GaussianState simulate_steps(const std::vector<Step>& steps,
                                       int n_modes,
                                       const NoiseChannels& noise) {
  if (n_modes < 1) throw InputError("need at least one mode");
  gaussian::GaussianState state = gaussian::vacuum(n_modes);
  apply_steps(state, steps, noise);
  return state;
}

void apply_steps(gaussian::GaussianState& state,
                 const std::vector<Step>& steps,
                 const NoiseChannels& noise) {
  const int m = state.modes();
  const Eigen::VectorXd u0 =
      Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));

  for (const Step& step : steps) {
    if (const auto* sq = std::get_if<Squeeze>(&step)) {
      const Eigen::Matrix2d b =
          dynamics::squeeze_map(sq->chi, sq->q, sq->tau);
      gaussian::apply_symplectic(state,
                                 mode_selective(u0, b, sq->q * sq->tau));
      if (noise.enabled) {
        const auto rate = dynamics::squeezing_rate(sq->chi, sq->q);
        if (noise.gamma_coll > 0) {
          if (!rate.hyperbolic)
            throw InputError(
                "collective decay model needs a hyperbolic pulse");
          const double t_cav =
              clamp_unit(1.0 - noise.gamma_coll / (2.0 * rate.rate));
          gaussian::loss_channel(state, u0, t_cav);
        }
        if (noise.gamma_sc > 0) {
          const double t_sc =
              clamp_unit(1.0 - 2.0 * sq->tau * noise.gamma_sc);
          for (int i = 0; i < m; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
            e(i) = 1;
            gaussian::loss_channel(state, e, t_sc);
          }
        }
      }
    } else if (const auto* gs = std::get_if<GlobalSpinor>(&step)) {
      std::vector<int> all(m);
      for (int i = 0; i < m; ++i) all[i] = i;
      gaussian::apply_symplectic(state, sitewise_rotation(m, all, gs->phi));
    } else if (const auto* ls = std::get_if<LocalSpinor>(&step)) {
      gaussian::apply_symplectic(state,
                                 sitewise_rotation(m, ls->sites, ls->phi));
    } else if (const auto* fl = std::get_if<LocalPiFlip>(&step)) {
      Eigen::VectorXd sgn = Eigen::VectorXd::Ones(m);
      for (int i : fl->sites) {
        if (i < 0 || i >= m) throw InputError("site index out of range");
        sgn(i) = -1;
      }
      Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(2 * m, 2 * m);
      sp.topLeftCorner(m, m) = sgn.asDiagonal();
      sp.bottomRightCorner(m, m) = sgn.asDiagonal();
      gaussian::apply_symplectic(state, sp);
    } else if (const auto* rr = std::get_if<ReadoutRotation>(&step)) {
      gaussian::apply_symplectic(
          state, sitewise_rotation(m, rr->sites, kPi / 2));
    }
  }
}

gaussian::GaussianState simulate(const CompiledSequence& seq,
                                 const NoiseChannels& noise) {
  return simulate_steps(seq.steps, seq.modes, noise);
}

std::pair<std::vector<int>, std::vector<int>> bipartition(
    const GraphSpec& g) {
  const int m = g.size();
  std::vector<int> color(m, -1);
  std::vector<int> stack;
  for (int start = 0; start < m; ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    stack.push_back(start);
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < m; ++j) {
        if (std::abs(g.adjacency(i, j)) < 1e-12) continue;
        if (color[j] < 0) {
          color[j] = 1 - color[i];
          stack.push_back(j);
        } else if (color[j] == color[i]) {
          throw UnroutableGraphError(
              "graph is not bipartite; nullifier readout needs a "
              "two-coloring");
        }
      }
    }
  }
  std::pair<std::vector<int>, std::vector<int>> out;
  for (int i = 0; i < m; ++i)
    (color[i] == 0 ? out.first : out.second).push_back(i);
  return out;
}

std::vector<gaussian::ModeEllipse> mode_report(
    const gaussian::GaussianState& state, const Eigen::MatrixXd& v) {
  gaussian::GaussianState rotated = gaussian::basis_change(state, v);
  std::vector<gaussian::ModeEllipse> out;
  out.reserve(v.cols());
  for (int k = 0; k < v.cols(); ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(v.cols());
    e(k) = 1;
    out.push_back(gaussian::mode_ellipse(rotated, e));
  }
  return out;
}

gaussian::GaussianState state_from_modes(const std::vector<ModeSpec>& modes,
                                         const Eigen::MatrixXd& v) {
  const int m = static_cast<int>(v.cols());
  if (static_cast<int>(modes.size()) != m || v.rows() != m)
    throw InputError("mode list and basis dimensions disagree");
  if ((v.transpose() * v - Eigen::MatrixXd::Identity(m, m))
          .cwiseAbs()
          .maxCoeff() > 1e-9)
    throw InputError("mode basis must be orthonormal");

  Eigen::MatrixXd cxx = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd cxp = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd cpp = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    const ModeSpec& ms = modes[k];
    if (ms.zeta2_min <= 0 || ms.zeta2_max < ms.zeta2_min)
      throw InputError("mode variances must satisfy 0 < min <= max");
    const double c = std::cos(ms.phi_min), s = std::sin(ms.phi_min);
    // Minor axis direction (c, -s), major axis (s, c).
    cxx(k, k) = ms.zeta2_min * c * c + ms.zeta2_max * s * s;
    cxp(k, k) = -ms.zeta2_min * c * s + ms.zeta2_max * s * c;
    cpp(k, k) = ms.zeta2_min * s * s + ms.zeta2_max * c * c;
  }

  gaussian::GaussianState state = gaussian::vacuum(m);
  state.cov.topLeftCorner(m, m) = v * cxx * v.transpose();
  state.cov.topRightCorner(m, m) = v * cxp * v.transpose();
  state.cov.bottomLeftCorner(m, m) = v * cxp.transpose() * v.transpose();
  state.cov.bottomRightCorner(m, m) = v * cpp * v.transpose();
  return state;
}

Eigen::MatrixXd reconstruct_adjacency(const gaussian::GaussianState& state) {
  const int m = state.modes();
  Eigen::MatrixXd a(m, m);
  for (int j = 0; j < m; ++j) {
    const double var_x = state.cov(j, j);
    if (var_x <= 0) throw NumericalError("non-positive x variance");
    for (int i = 0; i < m; ++i) a(i, j) = state.cov(m + i, j) / var_x;
  }
  return a;
}

Eigen::MatrixXd reconstruct_adjacency(const Eigen::MatrixXd& records) {
  if (records.cols() % 2 != 0 || records.rows() < 2)
    throw InputError("records need an even column count and >= 2 rows");
  const int m = static_cast<int>(records.cols()) / 2;
  const Eigen::MatrixXd centered =
      records.rowwise() - records.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered /
                              static_cast<double>(records.rows() - 1);
  gaussian::GaussianState state = gaussian::vacuum(m);
  state.cov = cov;
  return reconstruct_adjacency(state);
}

Eigen::MatrixXd correlation_xp(const gaussian::GaussianState& state) {
  const int m = state.modes();
  Eigen::MatrixXd corr(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      corr(i, j) = state.cov(i, m + j) /
                   std::sqrt(state.cov(i, i) * state.cov(m + j, m + j));
  return corr;
}

SeparabilityBound separability_bound(const GraphSpec& g) {
  const int m = g.size();
  const Eigen::MatrixXd& a = g.adjacency;
  Eigen::VectorXd c(m);
  for (int j = 0; j < m; ++j) c(j) = a.col(j).squaredNorm();

  SeparabilityBound out;
  out.regular = (c.maxCoeff() - c.minCoeff()) <= 1e-12 * (1 + c.maxCoeff());
  out.closed_form =
      2.0 * c.cwiseSqrt().sum() / (static_cast<double>(m) + c.sum());

  // Minimize (1/M) sum_i [ (1/(1+c_i)) / x_i + x_i sum_j A_ji^2/(1+c_j) ]
  // over per-site x variances x_i > 0 by coordinate descent.
  Eigen::VectorXd av(m), bv(m);
  for (int i = 0; i < m; ++i) {
    av(i) = 1.0 / (1.0 + c(i));
    double acc = 0;
    for (int j = 0; j < m; ++j) acc += a(j, i) * a(j, i) / (1.0 + c(j));
    bv(i) = acc;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
  double prev = -1;
  for (int sweep = 0; sweep < 200; ++sweep) {
    for (int i = 0; i < m; ++i)
      x(i) = bv(i) > 0 ? std::sqrt(av(i) / bv(i)) : 1e8;
    double val = 0;
    for (int i = 0; i < m; ++i) val += av(i) / x(i) + bv(i) * x(i);
    val /= m;
    if (prev >= 0 && std::abs(val - prev) <= 1e-14 * (1 + val)) {
      prev = val;
      break;
    }
    prev = val;
  }
  out.minimized = prev;
  return out;
}

}  // namespace gsq::graphc
