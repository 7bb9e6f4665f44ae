#include "gsq/measure.hpp"

#include <cmath>
#include <numbers>

#include "gsq/errors.hpp"

namespace gsq::measure {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t trial_stream(std::uint64_t salt, long trial) {
  return (salt << 32) + static_cast<std::uint64_t>(trial);
}

// Square root factor of a covariance via its spectral decomposition.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success)
    throw NumericalError("covariance eigendecomposition failed");
  const double floor = -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff());
  Eigen::VectorXd lam = es.eigenvalues();
  for (int i = 0; i < lam.size(); ++i) {
    if (lam(i) < floor)
      throw NumericalError("covariance is not positive semidefinite");
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  return es.eigenvectors() * lam.asDiagonal();
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t stream)
    : state_(seed) {
  state_ += 0xD1B54A32D192ED03ULL * stream;
  next_u64();
  next_u64();
}

std::uint64_t TrialRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double TrialRng::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double TrialRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double a = 2 * kPi * uniform();
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Eigen::MatrixXd sample_records(const gaussian::GaussianState& state,
                               long n_trials, std::uint64_t seed,
                               std::uint64_t salt) {
  if (n_trials < 1) throw InputError("need at least one trial");
  const Eigen::MatrixXd factor = covariance_factor(state.cov);
  const int dim = static_cast<int>(state.cov.rows());
  Eigen::MatrixXd records(n_trials, dim);
  Eigen::VectorXd z(dim);
  for (long t = 0; t < n_trials; ++t) {
    TrialRng rng(seed, trial_stream(salt, t));
    for (int i = 0; i < dim; ++i) z(i) = rng.gaussian();
    records.row(t) = (state.mean + factor * z).transpose();
  }
  return records;
}

double sample_variance(const Eigen::VectorXd& values) {
  const long n = values.size();
  if (n < 2) throw InputError("variance needs at least two values");
  const double mean = values.mean();
  return (values.array() - mean).square().sum() / (n - 1);
}

Eigen::VectorXd variance_scan(const gaussian::GaussianState& state,
                              const Eigen::VectorXd& v,
                              const Eigen::VectorXd& angles, long n_trials,
                              std::uint64_t seed) {
  const int m = state.modes();
  if (v.size() != m) throw InputError("mode pattern has the wrong size");
  Eigen::VectorXd out(angles.size());
  for (int k = 0; k < angles.size(); ++k) {
    gaussian::GaussianState rotated = state;
    graphc::apply_steps(rotated, {graphc::GlobalSpinor{angles(k)}});
    const Eigen::MatrixXd rec = sample_records(
        rotated, n_trials, seed, static_cast<std::uint64_t>(k));
    out(k) = sample_variance(rec.leftCols(m) * v);
  }
  return out;
}

EllipseFit sinusoid_variance_fit(const Eigen::VectorXd& angles,
                                 const Eigen::VectorXd& variances) {
  const int n = static_cast<int>(angles.size());
  if (n != variances.size()) throw InputError("angle/variance size mismatch");
  if (n < 5) throw InputError("need at least 5 scan angles");
  if (angles.maxCoeff() - angles.minCoeff() < kPi / 2 - 1e-9)
    throw InputError("scan must span at least 90 degrees");

  Eigen::MatrixXd x(n, 3);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1;
    x(i, 1) = std::cos(2 * angles(i));
    x(i, 2) = std::sin(2 * angles(i));
  }
  const Eigen::Vector3d c =
      (x.transpose() * x).ldlt().solve(x.transpose() * variances);

  EllipseFit out;
  out.c0 = c(0);
  out.c1 = c(1);
  out.c2 = c(2);
  Eigen::Matrix2d blk;
  blk << c(0) + c(1), -c(2), -c(2), c(0) - c(1);
  out.ellipse = gaussian::mode_ellipse(blk);
  return out;
}

Eigen::MatrixXd nullifier_samples(const gaussian::GaussianState& state,
                                  const graphc::GraphSpec& g, long n_trials,
                                  std::uint64_t seed) {
  const int m = state.modes();
  if (g.size() != m) throw InputError("graph and state sizes disagree");
  const auto halves = graphc::bipartition(g);

  Eigen::MatrixXd out(n_trials, m);
  int setting = 0;
  for (const auto& rotated_sites :
       {halves.first, halves.second}) {
    if (rotated_sites.empty()) {
      ++setting;
      continue;
    }
    gaussian::GaussianState rotated = state;
    graphc::apply_steps(rotated,
                        {graphc::ReadoutRotation{rotated_sites}});
    const Eigen::MatrixXd rec =
        sample_records(rotated, n_trials, seed,
                       static_cast<std::uint64_t>(setting));
    // After the pi/2 rotation x reads -p on the rotated sites, while the
    // neighbors (other colour) still read x.
    for (int i : rotated_sites) {
      for (long t = 0; t < n_trials; ++t) {
        double acc = -rec(t, i);
        for (int j = 0; j < m; ++j) acc -= g.adjacency(i, j) * rec(t, j);
        out(t, i) = acc;
      }
    }
    ++setting;
  }
  return out;
}

Eigen::VectorXd simulate_differential(const ImagingModel& model,
                                      double total_counts, bool with_atoms,
                                      long n_trials, std::uint64_t seed,
                                      std::uint64_t salt) {
  if (total_counts < 0) throw InputError("total counts must be non-negative");
  const double slope = model.g + (with_atoms ? model.r : 0);
  const double var = model.a0 + slope * total_counts +
                     model.a2 * total_counts * total_counts;
  if (var <= 0) throw InputError("imaging model variance must be positive");
  const double sd = std::sqrt(var);
  Eigen::VectorXd out(n_trials);
  for (long t = 0; t < n_trials; ++t) {
    TrialRng rng(seed, trial_stream(salt, t));
    out(t) = sd * rng.gaussian();
  }
  return out;
}

QuadraticFit projection_noise_fit(const Eigen::VectorXd& totals,
                                  const Eigen::VectorXd& variances,
                                  const Eigen::VectorXd& trials) {
  const int n = static_cast<int>(totals.size());
  if (variances.size() != n || trials.size() != n)
    throw InputError("fit inputs must have matching sizes");
  if (n < 3) throw InputError("quadratic fit needs at least 3 settings");

  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    if (variances(i) <= 0 || trials(i) < 2)
      throw InputError("each setting needs positive variance and >= 2 trials");
    x(i, 0) = 1;
    x(i, 1) = totals(i);
    x(i, 2) = totals(i) * totals(i);
    w(i) = trials(i) / (2 * variances(i) * variances(i));
  }
  const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
  const Eigen::Matrix3d normal = xtw * x;
  const Eigen::Matrix3d inv = normal.inverse();
  const Eigen::Vector3d beta = inv * (xtw * variances);

  QuadraticFit out;
  out.a0 = beta(0);
  out.a1 = beta(1);
  out.a2 = beta(2);
  out.cov = inv;
  return out;
}

Eigen::VectorXd rabi_signal(const RabiParams& p, const Eigen::VectorXd& t) {
  Eigen::VectorXd y(t.size());
  for (int i = 0; i < t.size(); ++i) {
    const double env = std::exp(-std::pow(p.gamma * t(i), 2));
    y(i) = p.amplitude * env * std::cos(2 * p.omega * t(i)) + p.offset;
  }
  return y;
}

Eigen::VectorXd simulate_rabi(const RabiParams& p, const Eigen::VectorXd& t,
                              double sigma, std::uint64_t seed,
                              std::uint64_t salt) {
  Eigen::VectorXd y = rabi_signal(p, t);
  TrialRng rng(seed, salt);
  for (int i = 0; i < y.size(); ++i) y(i) += sigma * rng.gaussian();
  return y;
}

double rabi_contrast(const RabiParams& p) {
  if (p.omega <= 0) throw InputError("Rabi frequency must be positive");
  const double arg = p.gamma * kPi / (2 * p.omega);
  return p.amplitude * (1 + std::exp(-arg * arg)) / 2;
}

namespace {

struct GaussNewtonResult {
  RabiParams params;
  double sse = 0;
  int iterations = 0;
};

double sse_of(const RabiParams& p, const Eigen::VectorXd& t,
              const Eigen::VectorXd& y) {
  return (y - rabi_signal(p, t)).squaredNorm();
}

GaussNewtonResult refine(RabiParams p, const Eigen::VectorXd& t,
                         const Eigen::VectorXd& y) {
  const int n = static_cast<int>(t.size());
  double mu = 1e-6;
  double sse = sse_of(p, t, y);
  int iter = 0;
  for (; iter < 200; ++iter) {
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd resid(n);
    for (int i = 0; i < n; ++i) {
      const double ti = t(i);
      const double env = std::exp(-std::pow(p.gamma * ti, 2));
      const double osc = std::cos(2 * p.omega * ti);
      resid(i) = y(i) - (p.amplitude * env * osc + p.offset);
      jac(i, 0) = env * osc;
      jac(i, 1) = -2 * p.gamma * ti * ti * p.amplitude * env * osc;
      jac(i, 2) = -2 * ti * p.amplitude * env * std::sin(2 * p.omega * ti);
      jac(i, 3) = 1;
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d jtr = jac.transpose() * resid;
    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::Matrix4d damped = jtj;
      damped.diagonal().array() += mu;
      const Eigen::Vector4d delta = damped.ldlt().solve(jtr);
      RabiParams trial = p;
      trial.amplitude += delta(0);
      trial.gamma = std::abs(trial.gamma + delta(1));
      trial.omega = std::abs(trial.omega + delta(2));
      trial.offset += delta(3);
      const double trial_sse = sse_of(trial, t, y);
      if (trial_sse <= sse) {
        const double rel =
            delta.norm() /
            (1 + std::sqrt(p.amplitude * p.amplitude + p.gamma * p.gamma +
                           p.omega * p.omega + p.offset * p.offset));
        p = trial;
        const bool converged = rel < 1e-12 || sse - trial_sse < 1e-30;
        sse = trial_sse;
        mu = std::max(mu / 10, 1e-12);
        stepped = true;
        if (converged) iter = 200;
        break;
      }
      mu *= 10;
    }
    if (!stepped) break;
  }
  return {p, sse, iter};
}

}  // namespace

RabiFit rabi_fit(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                 double omega_hint) {
  if (t.size() != y.size() || t.size() < 8)
    throw InputError("need at least 8 samples to fit a Rabi trace");
  if (omega_hint <= 0) throw InputError("frequency hint must be positive");

  const double offset0 = y.mean();
  const double amp0 =
      std::max(1e-6, 0.5 * (y.maxCoeff() - y.minCoeff()));

  GaussNewtonResult best;
  bool have_best = false;
  for (double scale : {0.7, 0.85, 1.0, 1.15, 1.3}) {
    for (double gfrac : {0.02, 0.1}) {
      RabiParams start;
      start.amplitude = amp0;
      start.offset = offset0;
      start.omega = omega_hint * scale;
      start.gamma = omega_hint * gfrac;
      const GaussNewtonResult res = refine(start, t, y);
      if (!have_best || res.sse < best.sse) {
        best = res;
        have_best = true;
      }
    }
  }

  RabiFit out;
  out.params = best.params;
  if (out.params.amplitude < 0) {
    // Absorb the sign into a half-period phase: report the magnitude.
    out.params.amplitude = -out.params.amplitude;
  }
  out.contrast = rabi_contrast(out.params);
  out.sse = best.sse;
  out.iterations = best.iterations;
  return out;
}

}  // namespace gsq::measure
