#include "gsq/dynamics.hpp"

#include <cmath>

#include "gsq/errors.hpp"

namespace gsq::dynamics {

double delta_minus(const CavityParams& c) { return c.delta_c + c.omega_z; }
double delta_plus(const CavityParams& c) { return c.delta_c - c.omega_z; }

double nbar_intracavity(double nbar_input, double delta_c, double kappa) {
  double half = 0.5 * kappa;
  return nbar_input * half * half / (delta_c * delta_c + half * half);
}

ChiSplit interaction_strength(const CavityParams& c) {
  double half = 0.5 * c.kappa;
  double pref = c.atom_number * c.nbar * 0.5 * c.omega * c.omega;
  double dm = delta_minus(c), dp = delta_plus(c);
  return {pref * dm / (dm * dm + half * half),
          pref * dp / (dp * dp + half * half)};
}

SqueezingRate squeezing_rate(double chi, double q) {
  double disc = -q * (q + 2.0 * chi);
  if (disc >= 0.0) return {std::sqrt(disc), true};
  return {std::sqrt(-disc), false};
}

Eigen::Matrix2d squeeze_map(double chi, double q, double t) {
  Eigen::Matrix2d gen;
  gen << 0.0, -q, q + 2.0 * chi, 0.0;
  double disc = -q * (q + 2.0 * chi);  // gen^2 = disc * I
  double c, s;                         // exp(gen t) = c I + s gen
  if (disc > 0.0) {
    double lam = std::sqrt(disc);
    c = std::cosh(lam * t);
    s = std::sinh(lam * t) / lam;
  } else if (disc < 0.0) {
    double om = std::sqrt(-disc);
    c = std::cos(om * t);
    s = std::sin(om * t) / om;
  } else {
    c = 1.0;
    s = t;
  }
  return c * Eigen::Matrix2d::Identity() + s * gen;
}

namespace {

double wrap_pi(double phi) {
  phi = std::fmod(phi, M_PI);
  if (phi < 0) phi += M_PI;
  return phi;
}

}  // namespace

Asymptotics asymptotic_squeezing(double chi, double q, double t) {
  SqueezingRate r = squeezing_rate(chi, q);
  if (!r.hyperbolic || r.rate == 0.0)
    throw InputError("asymptotic squeezing needs the unstable regime");
  double ratio = chi / r.rate;
  Asymptotics out;
  out.zeta2_max = ratio * ratio * std::exp(2.0 * r.rate * t);
  out.zeta2_min = 1.0 / out.zeta2_max;
  out.phi_max = wrap_pi(std::atan(r.rate / q));
  out.phi_min = wrap_pi(std::atan(-q / r.rate));
  return out;
}

double sinusoidal_variance(double zeta2_min, double zeta2_max, double phi_min,
                           double phi) {
  double s = std::sin(phi - phi_min);
  return zeta2_min + s * s * (zeta2_max - zeta2_min);
}

double lindblad_variance(double chi, double q, double gamma_coll,
                         double gamma_sc, int m_modes, double t) {
  SqueezingRate r = squeezing_rate(chi, q);
  if (!r.hyperbolic || r.rate == 0.0)
    throw InputError("variance ODE solution needs the unstable regime");
  double gamma = gamma_coll + 2.0 * m_modes * gamma_sc;
  double decay = std::exp(-2.0 * r.rate * t);
  return decay + gamma / (2.0 * r.rate) * (1.0 - decay);
}

double collective_dissipation(const CavityParams& c) {
  double half = 0.5 * c.kappa;
  double gp = c.nbar * 0.5 * c.omega * c.omega * half /
              (std::pow(delta_plus(c), 2) + half * half);
  double gm = c.nbar * 0.5 * c.omega * c.omega * half /
              (std::pow(delta_minus(c), 2) + half * half);
  return 2.0 * c.atom_number * (gp + gm);
}

double collective_dissipation_ratio(double chi, double kappa,
                                    double delta_minus) {
  return chi * kappa / delta_minus;
}

double eta_thermal(const CavityParams& c) {
  double r = c.omega / c.omega_peak;
  return c.eta_peak * r * r;
}

double scattering_rate(double chi, double n_atoms, double eta,
                       double delta_minus, double kappa) {
  if (n_atoms <= 0 || eta <= 0) throw InputError("N eta must be positive");
  return std::abs(chi) * (96.0 / (n_atoms * eta)) * std::abs(delta_minus) /
         kappa;
}

OptimalPoint optimal_detuning(double n_atoms, double eta, int m_modes,
                              double kappa) {
  if (n_atoms <= 0 || eta <= 0 || m_modes < 1)
    throw InputError("optimal detuning needs positive N eta and M");
  double cooperativity = n_atoms * eta;
  OptimalPoint out;
  out.delta_minus = kappa * std::sqrt(cooperativity / (192.0 * m_modes));
  out.zeta2_min = 8.0 * std::sqrt(3.0 * m_modes / cooperativity);
  return out;
}

double coupling_inhomogeneity_noise(double beta) {
  if (beta <= 0) throw InputError("inverse temperature must be positive");
  double num = 2.0 * beta * (4.0 + beta);
  double den = (beta + 2.0) * (beta + 2.0) *
               (std::exp(8.0 / beta) - 2.0 * std::exp(4.0 / beta) + 3.0);
  return 1.0 - num / den;
}

double coupling_inhomogeneity_noise_asymptotic(double beta) {
  return 12.0 / (beta * beta);
}

double interaction_fluctuation_noise(double zeta2_max, double chi, double q,
                                     double frac_chi_sq) {
  double denom = 2.0 * std::abs(q + 2.0 * chi);
  if (denom == 0.0) throw InputError("q + 2 chi must be nonzero");
  return zeta2_max * q / denom * frac_chi_sq;
}

double interaction_noise_alpha(double omega, double n_atoms, double delta_c,
                               double delta_minus) {
  double delta_n = 4.0 * omega * n_atoms;
  return 1.0 + std::abs(2.0 * delta_n / delta_c) +
         std::abs(delta_n / delta_minus);
}

double combine_budget(const NoiseBudget& b) {
  if (b.unitary_min_variance < 0.0 || b.unitary_min_variance >= 1.0)
    throw InputError("unitary floor must lie in [0, 1)");
  if (b.contrast <= 0.0 || b.contrast > 1.0)
    throw InputError("contrast must lie in (0, 1]");
  double squeezing = 1.0 - b.unitary_min_variance;
  for (double d : b.beam_splitter) {
    if (d < 0.0 || d >= 1.0) throw InputError("beam-splitter term outside [0, 1)");
    squeezing *= 1.0 - d;
  }
  double zeta2 = 1.0 - squeezing;
  for (double d : b.additive) {
    if (d < 0.0) throw InputError("additive term must be non-negative");
    zeta2 += d;
  }
  return zeta2 / b.contrast;
}

double microwave_spinor_phase(double omega_mw, double delta) {
  return M_PI * (1.0 - delta / std::hypot(omega_mw, delta));
}

}  // namespace gsq::dynamics
