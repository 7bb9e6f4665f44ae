#pragma once

#include <vector>

#include <Eigen/Dense>

namespace gsq::dynamics {

// Cavity and drive operating point. Angular frequencies (rad/s) throughout.
struct CavityParams {
  double kappa = 0;        // cavity linewidth
  double omega_z = 0;      // Zeeman splitting omega_z
  double delta_c = 0;      // drive detuning from the dressed cavity
  double omega = 0;        // thermally averaged Raman Rabi rate
  double omega_peak = 0;   // peak Raman Rabi rate
  double eta_peak = 0;     // peak single-atom cooperativity
  double nbar = 0;         // intracavity photon number
  double atom_number = 0;  // atoms per addressed ensemble times ensembles
};

// Detunings of the two Raman sidebands from cavity resonance.
double delta_minus(const CavityParams& c);
double delta_plus(const CavityParams& c);

// Lorentzian cavity filter: intracavity photon number for a drive of
// input-referred photon number nbar_input detuned by delta_c.
double nbar_intracavity(double nbar_input, double delta_c, double kappa);

struct ChiSplit {
  double minus = 0;
  double plus = 0;
  double total() const { return minus + plus; }
};

// Light-mediated interaction strength chi^+- from the cavity operating
// point; chi = chi^- + chi^+.
ChiSplit interaction_strength(const CavityParams& c);

// Two-mode instability rate lambda = sqrt(-q(q + 2 chi)). In the stable
// regime the dynamics oscillates at `rate` instead of growing.
struct SqueezingRate {
  double rate = 0;
  bool hyperbolic = false;
};
SqueezingRate squeezing_rate(double chi, double q);

// Linearized flow of (F^x, Q^{yz})/sqrt(N): generator [[0, -q], [q+2chi, 0]].
// Valid in both regimes; det = 1 always.
Eigen::Matrix2d squeeze_map(double chi, double q, double t);

struct Asymptotics {
  double zeta2_min = 0;
  double zeta2_max = 0;
  double phi_min = 0;  // radians, in [0, pi)
  double phi_max = 0;
};
// Long-time envelope of the unstable dynamics: zeta2_max = (chi/lambda)^2
// e^{2 lambda t} at phi_max = atan(lambda/q), zeta2_min = 1/zeta2_max at
// phi_min = atan(-q/lambda). Hyperbolic regime only.
Asymptotics asymptotic_squeezing(double chi, double q, double t);

// Variance sinusoid between the principal axes:
// zeta^2(phi) = zeta2_min + sin^2(phi - phi_min) (zeta2_max - zeta2_min).
double sinusoidal_variance(double zeta2_min, double zeta2_max, double phi_min,
                           double phi);

// Squeezed-quadrature variance with collective decay and free-space
// scattering: d zeta^2/dt = -2 lambda zeta^2 + Gamma_coll + 2 M Gamma_sc.
double lindblad_variance(double chi, double q, double gamma_coll,
                         double gamma_sc, int m_modes, double t);

// Collective decay rate Gamma_coll = 2N(gamma_+ + gamma_-) with
// gamma_+- = nbar (Omega^2/2) (kappa/2) / (delta_+-^2 + (kappa/2)^2).
double collective_dissipation(const CavityParams& c);
// Far-detuned shortcut Gamma_coll = chi kappa / delta_-.
double collective_dissipation_ratio(double chi, double kappa,
                                    double delta_minus);

// Thermally averaged cooperativity eta = eta_peak (Omega/Omega_peak)^2.
double eta_thermal(const CavityParams& c);

// Free-space scattering: Gamma_sc = |chi| (96/(N eta)) |delta_-|/kappa.
double scattering_rate(double chi, double n_atoms, double eta,
                       double delta_minus, double kappa);

// Detuning balancing collective decay against scattering,
// (delta_-/kappa)^2 = N eta/(192 M), and the resulting squeezing floor
// zeta^2 = 8 sqrt(3M/(N eta)).
struct OptimalPoint {
  double delta_minus = 0;
  double zeta2_min = 0;
};
OptimalPoint optimal_detuning(double n_atoms, double eta, int m_modes,
                              double kappa);

// Squeezing penalty from thermal spread of the atom-cavity coupling at
// inverse temperature beta = U0/kB T (exact expression and its large-beta
// tail 12/beta^2).
double coupling_inhomogeneity_noise(double beta);
double coupling_inhomogeneity_noise_asymptotic(double beta);

// Shot-to-shot interaction-strength fluctuations map anti-squeezing into the
// squeezed quadrature: Delta zeta^2 = zeta2_max q/(2|q+2chi|) (dchi/chi)^2.
double interaction_fluctuation_noise(double zeta2_max, double chi, double q,
                                     double frac_chi_sq);
// (dchi/chi)^2 = (dnbar/nbar)^2 + alpha^2 (dN/N)^2 with
// alpha = 1 + |2 delta_N/delta_c| + |delta_N/delta_-|, delta_N = 4 Omega N.
double interaction_noise_alpha(double omega, double n_atoms, double delta_c,
                               double delta_minus);

// Witness-level budget: squeezing reductions compose multiplicatively on
// (1 - zeta^2), additive floors stack, contrast divides at the end.
struct NoiseBudget {
  double unitary_min_variance = 0;
  std::vector<double> beam_splitter;
  std::vector<double> additive;
  double contrast = 1.0;
};
double combine_budget(const NoiseBudget& b);

// Geometric phase of an off-resonant microwave 2pi pulse on the clock
// transition: phi = pi (1 - delta/sqrt(Omega^2 + delta^2)).
double microwave_spinor_phase(double omega_mw, double delta);

}  // namespace gsq::dynamics
