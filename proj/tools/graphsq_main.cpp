#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsq/config.hpp"
#include "gsq/dynamics.hpp"
#include "gsq/errors.hpp"
#include "gsq/gaussian.hpp"
#include "gsq/graph.hpp"
#include "gsq/measure.hpp"
#include "gsq/spin1.hpp"
#include "gsq/units.hpp"
#include "gsq/witness.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gsq;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  // Row-major flat array plus shape, so states reload unambiguously.
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

void emit(const GlobalOpts& opts, const json& doc,
          const std::string& filename, bool to_stdout) {
  const std::string text = doc.dump(2) + "\n";
  if (to_stdout) std::cout << text;
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / filename, text);
  }
}

void emit_csv(const GlobalOpts& opts, const std::string& csv,
              const std::string& filename, bool to_stdout) {
  if (to_stdout) std::cout << csv;
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / filename, csv);
  }
}

config::Config load_config(const GlobalOpts& opts) {
  if (opts.config_path.empty())
    throw InputError("this command needs --config");
  return config::Config::parse_file(opts.config_path);
}

std::uint64_t pick_seed(const GlobalOpts& opts, const config::Config& cfg) {
  if (opts.seed) return *opts.seed;
  return cfg.integer_or("sampling.seed", 1);
}

Eigen::MatrixXd load_matrix_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) throw InputError("graph file '" + path + "' is empty");
  const size_t n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw InputError("graph file '" + path + "' is not a square matrix");
    for (size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd load_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError("graph file '" + path + "': " + e.what());
  }
  if (doc.is_object() && doc.contains("adjacency")) doc = doc["adjacency"];
  if (!doc.is_array() || doc.empty())
    throw InputError("graph file '" + path +
                     "' must hold an adjacency array");
  const size_t n = doc.size();
  Eigen::MatrixXd m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (!doc[i].is_array() || doc[i].size() != n)
      throw InputError("graph file '" + path + "' is not a square matrix");
    for (size_t j = 0; j < n; ++j) m(i, j) = doc[i][j].get<double>();
  }
  return m;
}

graphc::GraphSpec load_graph(const config::Config& cfg) {
  if (cfg.has("graph.file")) {
    const std::string path = cfg.text("graph.file");
    const bool is_json = path.size() > 5 &&
                         path.compare(path.size() - 5, 5, ".json") == 0;
    return graphc::from_adjacency(is_json ? load_matrix_json(path)
                                          : load_matrix_text(path));
  }
  const std::string name = cfg.text_or("graph.name", "epr");
  const int sites = static_cast<int>(cfg.integer_or("graph.sites", 2));
  if (name == "epr") return graphc::epr_graph();
  if (name == "square") return graphc::square_graph();
  if (name == "edgeless" || name == "global")
    return graphc::edgeless_graph(sites);
  throw InputError("unknown graph.name '" + name +
                   "' (use epr, square, edgeless, global, or graph.file)");
}

dynamics::CavityParams load_cavity(const config::Config& cfg) {
  dynamics::CavityParams c;
  c.kappa = cfg.hz("cavity.kappa_hz");
  c.omega_z = cfg.hz("cavity.omega_z_hz");
  c.delta_c = cfg.hz("cavity.delta_c_hz");
  c.omega = cfg.hz_or("cavity.omega_hz", 0.0);
  c.omega_peak = cfg.hz_or("cavity.omega_peak_hz", c.omega);
  c.eta_peak = cfg.number_or("cavity.eta_peak", 0.0);
  c.nbar = cfg.number_or("cavity.nbar", 0.0);
  c.atom_number = cfg.number_or("cavity.atom_number", 0.0);
  return c;
}

struct PulsePoint {
  double chi = 0, q = 0, tau = 0, lambda = 0, squeeze_r = 0;
};

PulsePoint load_pulse(const config::Config& cfg) {
  PulsePoint p;
  p.q = cfg.hz("dynamics.q_hz");
  if (cfg.flag_or("dynamics.derive_chi", false)) {
    p.chi = dynamics::interaction_strength(load_cavity(cfg)).total();
  } else {
    p.chi = cfg.hz("dynamics.chi_hz");
  }
  const auto rate = dynamics::squeezing_rate(p.chi, p.q);
  if (!rate.hyperbolic)
    throw InputError("dynamics.chi_hz/q_hz are in the stable regime");
  p.lambda = rate.rate;
  p.tau = cfg.number_or("dynamics.tau_s", 0.0);
  if (p.tau <= 0) throw InputError("dynamics.tau_s must be positive");
  p.squeeze_r = p.lambda * p.tau;
  return p;
}

graphc::NoiseChannels load_noise_channels(const config::Config& cfg,
                                          const PulsePoint& pulse) {
  graphc::NoiseChannels noise;
  if (!cfg.flag_or("noise.dissipation", false)) return noise;
  noise.enabled = true;
  const auto cav = load_cavity(cfg);
  const double dm = dynamics::delta_minus(cav);
  noise.gamma_coll =
      std::abs(dynamics::collective_dissipation_ratio(pulse.chi, cav.kappa,
                                                      dm));
  const double eta = dynamics::eta_thermal(cav);
  noise.gamma_sc = dynamics::scattering_rate(pulse.chi, cav.atom_number,
                                             eta, dm, cav.kappa);
  return noise;
}

json step_json(const graphc::Step& step) {
  json out;
  if (const auto* sq = std::get_if<graphc::Squeeze>(&step)) {
    out["type"] = "squeeze";
    out["chi_hz"] = to_hz(sq->chi);
    out["q_hz"] = to_hz(sq->q);
    out["tau_s"] = sq->tau;
  } else if (const auto* fl = std::get_if<graphc::LocalPiFlip>(&step)) {
    out["type"] = "pi_flip";
    out["sites"] = fl->sites;
  } else if (const auto* gs = std::get_if<graphc::GlobalSpinor>(&step)) {
    out["type"] = "global_spinor";
    out["phi_deg"] = rad_to_deg(gs->phi);
  } else if (const auto* ls = std::get_if<graphc::LocalSpinor>(&step)) {
    out["type"] = "local_spinor";
    out["sites"] = ls->sites;
    out["phi_deg"] = rad_to_deg(ls->phi);
  } else if (const auto* rr = std::get_if<graphc::ReadoutRotation>(&step)) {
    out["type"] = "readout_rotation";
    out["sites"] = rr->sites;
  }
  return out;
}

std::string step_listing(const json& step) {
  std::ostringstream out;
  const std::string type = step["type"];
  if (type == "squeeze") {
    out << "squeeze  chi=" << fmt_double(step["chi_hz"].get<double>())
        << " Hz  q=" << fmt_double(step["q_hz"].get<double>())
        << " Hz  tau=" << fmt_double(step["tau_s"].get<double>()) << " s";
  } else if (type == "pi_flip") {
    out << "pi flip  sites";
    for (int s : step["sites"]) out << " " << s;
  } else if (type == "global_spinor") {
    out << "spinor   phi=" << fmt_double(step["phi_deg"].get<double>())
        << " deg (global)";
  } else if (type == "local_spinor") {
    out << "spinor   phi=" << fmt_double(step["phi_deg"].get<double>())
        << " deg  sites";
    for (int s : step["sites"]) out << " " << s;
  } else {
    out << "readout  sites";
    for (int s : step["sites"]) out << " " << s;
  }
  return out.str();
}

json compile_json(const graphc::GraphSpec& g,
                  const graphc::CompiledSequence& seq,
                  const PulsePoint& pulse) {
  json out;
  out["sites"] = g.size();
  out["eigenvalues"] = vector_json(seq.eigenvalues);
  json angles = json::array();
  for (int i = 0; i < seq.angles.size(); ++i)
    angles.push_back(rad_to_deg(seq.angles(i)));
  out["angles_deg"] = angles;
  json patterns = json::array();
  for (int k = 0; k < seq.mode_basis.cols(); ++k) {
    json pat = json::array();
    for (int i = 0; i < seq.mode_basis.rows(); ++i)
      pat.push_back(seq.mode_basis(i, k) >= 0 ? 1 : -1);
    patterns.push_back(pat);
  }
  out["mode_patterns"] = patterns;
  out["pulse"] = {{"chi_hz", to_hz(pulse.chi)},
                  {"q_hz", to_hz(pulse.q)},
                  {"tau_s", pulse.tau},
                  {"lambda_hz", to_hz(pulse.lambda)},
                  {"squeeze_r", pulse.squeeze_r}};
  json steps = json::array();
  json listing = json::array();
  for (const auto& step : seq.steps) {
    json js = step_json(step);
    listing.push_back(step_listing(js));
    steps.push_back(std::move(js));
  }
  out["steps"] = steps;
  out["listing"] = listing;
  return out;
}

graphc::CompiledSequence compile_from_config(const config::Config& cfg,
                                             const graphc::GraphSpec& g,
                                             const PulsePoint& pulse) {
  if (cfg.text_or("graph.name", "") == "global" && !cfg.has("graph.file")) {
    // One global squeezing pulse; the edgeless eigenbasis separates the
    // cavity-coupled symmetric mode from its idle orthogonal partners.
    const auto em = graphc::eigenmodes(g);
    graphc::CompiledSequence seq;
    seq.modes = g.size();
    seq.steps = {graphc::Squeeze{pulse.chi, pulse.q, pulse.tau}};
    seq.eigenvalues = em.values;
    seq.mode_basis = em.vectors;
    seq.angles = graphc::target_angles(em.values);
    return seq;
  }
  return graphc::compile(g, pulse.squeeze_r, {pulse.chi, pulse.q});
}

json state_json(const gaussian::GaussianState& state,
                const graphc::CompiledSequence& seq,
                const graphc::GraphSpec& g) {
  json out;
  out["modes"] = state.modes();
  out["mean"] = vector_json(state.mean);
  out["cov"] = matrix_json(state.cov);
  out["eigenvalues"] = vector_json(seq.eigenvalues);
  json report = json::array();
  const auto modes = graphc::mode_report(state, seq.mode_basis);
  for (const auto& mode : modes) {
    report.push_back({{"zeta2_min", mode.zeta2_min},
                      {"zeta2_max", mode.zeta2_max},
                      {"phi_min_deg", rad_to_deg(mode.phi_min)}});
  }
  out["mode_report"] = report;
  out["nullifiers"] = vector_json(witness::nullifier_variances(state, g));
  out["mean_nullifier"] = witness::mean_nullifier(state, g);
  return out;
}

std::string curves_csv(const gaussian::GaussianState& state,
                       const graphc::CompiledSequence& seq,
                       double step_deg) {
  std::ostringstream out;
  out << "phi_deg";
  for (int m = 0; m < seq.modes; ++m) out << ",zeta2_mode_" << (m + 1);
  out << "\n";
  for (double phi = 0; phi <= 180.0 + 1e-9; phi += step_deg) {
    out << fmt_double(phi);
    for (int m = 0; m < seq.modes; ++m) {
      const double var = gaussian::mode_quadrature_variance(
          state, seq.mode_basis.col(m), deg_to_rad(phi));
      out << "," << fmt_double(var);
    }
    out << "\n";
  }
  return out.str();
}

std::string records_csv(const Eigen::MatrixXd& records) {
  const int m = static_cast<int>(records.cols()) / 2;
  std::ostringstream out;
  for (int i = 0; i < m; ++i) out << (i ? "," : "") << "x_" << (i + 1);
  for (int i = 0; i < m; ++i) out << ",p_" << (i + 1);
  out << "\n";
  for (long t = 0; t < records.rows(); ++t) {
    for (int j = 0; j < records.cols(); ++j)
      out << (j ? "," : "") << fmt_double(records(t, j));
    out << "\n";
  }
  return out.str();
}

Eigen::MatrixXd read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open records file '" + path + "'");
  std::string line;
  std::vector<std::vector<double>> rows;
  bool first = true;
  size_t cols = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (first) {
      first = false;
      if (!numeric) continue;  // header row
    }
    if (!numeric)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": non-numeric record");
    if (cols == 0) cols = row.size();
    if (row.size() != cols)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": ragged record row");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || cols % 2 != 0)
    throw InputError("records file '" + path +
                     "' needs an even number of quadrature columns");
  Eigen::MatrixXd out(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) out(i, j) = rows[i][j];
  return out;
}

Eigen::MatrixXd rotate_records(const Eigen::MatrixXd& records, double phi) {
  const int m = static_cast<int>(records.cols()) / 2;
  Eigen::MatrixXd sp = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  const double c = std::cos(phi), s = std::sin(phi);
  for (int i = 0; i < m; ++i) {
    sp(i, i) = c;
    sp(i, m + i) = -s;
    sp(m + i, i) = s;
    sp(m + i, m + i) = c;
  }
  return records * sp.transpose();
}

int cmd_compile(const GlobalOpts& opts) {
  const auto cfg = load_config(opts);
  const auto g = load_graph(cfg);
  const auto pulse = load_pulse(cfg);
  const auto seq = compile_from_config(cfg, g, pulse);
  const json doc = compile_json(g, seq, pulse);
  emit(opts, doc, "compile.json", true);
  if (!opts.out_dir.empty()) {
    std::ostringstream listing;
    for (const auto& item : doc["listing"])
      listing << item.get<std::string>() << "\n";
    write_text(fs::path(opts.out_dir) / "sequence.txt", listing.str());
  }
  return 0;
}

int cmd_simulate(const GlobalOpts& opts) {
  const auto cfg = load_config(opts);
  const auto g = load_graph(cfg);
  const auto pulse = load_pulse(cfg);
  const auto seq = compile_from_config(cfg, g, pulse);
  const auto noise = load_noise_channels(cfg, pulse);
  const auto state = graphc::simulate(seq, noise);

  const json doc = state_json(state, seq, g);
  const std::string csv = curves_csv(state, seq, 5.0);
  emit(opts, doc, "state.json", opts.format == "json");
  emit_csv(opts, csv, "curves.csv", opts.format == "csv");

  if (!opts.out_dir.empty()) {
    const long n =
        static_cast<long>(cfg.integer_or("sampling.n_trials", 1000));
    const auto records =
        measure::sample_records(state, n, pick_seed(opts, cfg));
    emit_csv(opts, records_csv(records), "records.csv", false);
  }
  return 0;
}

int cmd_budget(const GlobalOpts& opts) {
  const auto cfg = load_config(opts);
  dynamics::NoiseBudget budget;
  budget.unitary_min_variance = cfg.number("noise.unitary_min_variance");
  budget.contrast = cfg.number_or("noise.contrast", 1.0);
  const double coupling = cfg.number_or("noise.coupling_variation", 0.0);
  const double cavity_loss = cfg.number_or("noise.cavity_photon_loss", 0.0);
  const double scattering =
      cfg.number_or("noise.free_space_scattering", 0.0);
  const double shot = cfg.number_or("noise.photon_shot", 0.0);
  const double interaction =
      cfg.number_or("noise.interaction_strength", 0.0);
  budget.beam_splitter = {coupling, cavity_loss, scattering};
  budget.additive = {shot, interaction};

  json doc;
  doc["1/zeta2_max"] = budget.unitary_min_variance;
  doc["Photon shot noise"] = shot;
  doc["Coupling variation"] = coupling;
  doc["Interaction strength noise"] = interaction;
  doc["Cavity photon loss"] = cavity_loss;
  doc["Free space scattering"] = scattering;
  doc["Measured contrast C_Rabi"] = budget.contrast;
  doc["Expected zeta2"] = dynamics::combine_budget(budget);

  if (cfg.has("dynamics.q_hz") &&
      (cfg.has("dynamics.chi_hz") || cfg.has("cavity.kappa_hz"))) {
    const auto pulse = load_pulse(cfg);
    json derived;
    derived["chi_hz"] = to_hz(pulse.chi);
    derived["q_hz"] = to_hz(pulse.q);
    derived["lambda_hz"] = to_hz(pulse.lambda);
    derived["tau_s"] = pulse.tau;
    derived["squeeze_r"] = pulse.squeeze_r;
    derived["unitary_zeta2_min"] =
        dynamics::asymptotic_squeezing(pulse.chi, pulse.q, pulse.tau)
            .zeta2_min;
    if (cfg.has("cavity.kappa_hz")) {
      const auto cav = load_cavity(cfg);
      const double dm = dynamics::delta_minus(cav);
      const double gamma_coll = std::abs(
          dynamics::collective_dissipation_ratio(pulse.chi, cav.kappa, dm));
      derived["delta_minus_hz"] = to_hz(dm);
      derived["gamma_coll_over_2lambda"] =
          gamma_coll / (2 * pulse.lambda);
      if (cav.eta_peak > 0) {
        const double eta = dynamics::eta_thermal(cav);
        const double gamma_sc = dynamics::scattering_rate(
            pulse.chi, cav.atom_number, eta, dm, cav.kappa);
        derived["eta_thermal"] = eta;
        derived["gamma_sc_hz"] = to_hz(gamma_sc);
        const int m = static_cast<int>(cfg.integer_or("dynamics.modes", 1));
        derived["delta_zeta2_sc"] = m * pulse.tau * gamma_sc * 2;
      }
    }
    if (cfg.has("noise.beta"))
      derived["coupling_noise_model"] =
          dynamics::coupling_inhomogeneity_noise(cfg.number("noise.beta"));
    doc["derived"] = derived;
  }
  emit(opts, doc, "budget.json", true);
  return 0;
}

int cmd_witness(const GlobalOpts& opts, const std::string& records_path) {
  const auto cfg = load_config(opts);
  const auto g = load_graph(cfg);
  const auto pulse = load_pulse(cfg);
  const auto seq = compile_from_config(cfg, g, pulse);
  const double contrast = cfg.number_or("noise.contrast", 1.0);
  const int m = g.size();

  gaussian::GaussianState state = gaussian::vacuum(m);
  Eigen::MatrixXd records;
  const bool sampled = !records_path.empty();
  if (sampled) {
    records = read_records_csv(records_path);
    if (records.cols() != 2 * m)
      throw InputError("records have " + std::to_string(records.cols()) +
                       " columns but the graph has " + std::to_string(m) +
                       " sites");
    const Eigen::MatrixXd centered =
        records.rowwise() - records.colwise().mean();
    state.cov = centered.transpose() * centered /
                static_cast<double>(records.rows() - 1);
  } else {
    const auto noise = load_noise_channels(cfg, pulse);
    state = graphc::simulate(seq, noise);
  }

  const auto modes = graphc::mode_report(state, seq.mode_basis);
  double zeta2 = modes.empty() ? 1.0 : modes.front().zeta2_min;
  for (const auto& mode : modes) zeta2 = std::min(zeta2, mode.zeta2_min);

  json doc;
  doc["zeta2"] = zeta2;
  doc["contrast"] = contrast;
  doc["xi2"] = witness::wineland(zeta2, contrast);
  const auto v = witness::nullifier_variances(state, g);
  doc["v"] = vector_json(v);
  doc["V_avg"] = v.mean();
  const auto bound = graphc::separability_bound(g);
  doc["separability_bound"] = bound.minimized;
  doc["separability_closed_form"] = bound.closed_form;

  if (m == 2) {
    // Pair criteria live in the readout frame that puts the first mode's
    // squeezed axis on x.
    const double frame = seq.angles(0);
    gaussian::GaussianState primed = state;
    graphc::apply_steps(primed, {graphc::GlobalSpinor{frame}});
    doc["W"] = witness::mancini_product(primed, 0, 1);
    doc["steering_LR"] = witness::steering_product(primed, 0, 1);
    doc["steering_RL"] = witness::steering_product(primed, 1, 0);
    if (sampled) {
      const Eigen::MatrixXd rotated = rotate_records(records, frame);
      const auto w_est = witness::mancini_from_samples(rotated, 0, 1);
      const auto lr = witness::steering_from_samples(rotated, 0, 1);
      const auto rl = witness::steering_from_samples(rotated, 1, 0);
      doc["W_sampled"] = w_est.value;
      doc["W_se"] = w_est.se;
      doc["steering_LR_sampled"] = lr.value;
      doc["steering_LR_se"] = lr.se;
      doc["steering_RL_sampled"] = rl.value;
      doc["steering_RL_se"] = rl.se;
    }
  } else {
    doc["W"] = nullptr;
    doc["steering_LR"] = nullptr;
    doc["steering_RL"] = nullptr;
  }
  if (sampled) {
    const auto mean_v =
        witness::mean_nullifier_from_samples(records, g);
    doc["V_avg_sampled"] = mean_v.value;
    doc["V_avg_se"] = mean_v.se;
    doc["n_trials"] = static_cast<long>(records.rows());
  }
  emit(opts, doc, "witness.json", true);
  return 0;
}

int cmd_oracle(const GlobalOpts& opts) {
  const auto cfg = load_config(opts);
  const double q = cfg.hz_or("dynamics.q_hz", from_hz(1.2e3));
  const double chi = -q;  // exact-diagonalization benchmark point
  const double lambda_t = cfg.number_or("oracle.lambda_t", 0.3);
  std::vector<double> atoms{20, 40, 60};
  if (cfg.has("oracle.atom_numbers")) atoms = cfg.list("oracle.atom_numbers");

  const double lambda = dynamics::squeezing_rate(chi, q).rate;
  const double t = lambda_t / lambda;

  const Eigen::Matrix2d map = dynamics::squeeze_map(chi, q, t);
  gaussian::GaussianState probe = gaussian::vacuum(1);
  probe.cov = map * map.transpose();
  const auto ellipse =
      gaussian::mode_ellipse(probe, Eigen::VectorXd::Ones(1));

  json rows = json::array();
  for (double n_atoms : atoms) {
    const int n = static_cast<int>(n_atoms);
    spin1::SymmetricBasis basis(n);
    const Eigen::VectorXcd psi0 = spin1::coherent_m0(basis);
    const Eigen::VectorXcd psi =
        spin1::evolve_exact(basis, psi0, chi, q, t);
    const double exact =
        spin1::quadrature_variance(basis, psi, ellipse.phi_min) / n;
    const double rel = std::abs(exact - ellipse.zeta2_min) /
                       ellipse.zeta2_min;
    rows.push_back({{"atoms", n},
                    {"exact_zeta2", exact},
                    {"gaussian_zeta2", ellipse.zeta2_min},
                    {"relative_deviation", rel}});
  }
  json doc;
  doc["chi_hz"] = to_hz(chi);
  doc["q_hz"] = to_hz(q);
  doc["lambda_t"] = lambda_t;
  doc["phi_min_deg"] = rad_to_deg(ellipse.phi_min);
  doc["comparison"] = rows;
  emit(opts, doc, "oracle.json", true);
  return 0;
}

int cmd_calibrate(const GlobalOpts& opts) {
  const auto cfg = load_config(opts);
  const std::uint64_t seed = pick_seed(opts, cfg);

  measure::ImagingModel model;
  model.r = cfg.number_or("imaging.r", 395.0);
  model.g = cfg.number_or("imaging.g", 20.0);
  model.a0 = cfg.number_or("imaging.a0", 0.0);
  model.a2 = cfg.number_or("imaging.a2", 5e-5);

  std::vector<double> atoms{250, 500, 1000, 2000, 4000, 8000};
  if (cfg.has("imaging.atom_numbers"))
    atoms = cfg.list("imaging.atom_numbers");
  const long n_trials =
      static_cast<long>(cfg.integer_or("imaging.n_trials", 500));

  const int k = static_cast<int>(atoms.size());
  Eigen::VectorXd totals(k), var_atoms(k), var_light(k), counts(k);
  std::ostringstream rec;
  rec << "trial,site,N_plus,N_zero,N_minus,c_plus,c_zero,c_minus\n";
  for (int i = 0; i < k; ++i) {
    totals(i) = model.r * atoms[i];
    const auto da = measure::simulate_differential(
        model, totals(i), true, n_trials, seed, 2 * i);
    const auto dl = measure::simulate_differential(
        model, totals(i), false, n_trials, seed, 2 * i + 1);
    var_atoms(i) = measure::sample_variance(da);
    var_light(i) = measure::sample_variance(dl);
    counts(i) = static_cast<double>(n_trials);
    for (long t = 0; t < n_trials; ++t) {
      const double c_plus = (totals(i) + da(t)) / 2;
      const double c_minus = (totals(i) - da(t)) / 2;
      rec << t << "," << i << "," << fmt_double(c_plus / model.r) << ",0,"
          << fmt_double(c_minus / model.r) << "," << fmt_double(c_plus)
          << ",0," << fmt_double(c_minus) << "\n";
    }
  }
  const auto fit_atoms =
      measure::projection_noise_fit(totals, var_atoms, counts);
  const auto fit_light =
      measure::projection_noise_fit(totals, var_light, counts);
  // r = a1 - g with g fixed by the light level; the light-only fit is a
  // cross-check on g, not part of the subtraction.
  const double r_hat = fit_atoms.a1 - model.g;

  measure::RabiParams truth;
  truth.amplitude = cfg.number_or("imaging.rabi_amplitude", 0.98);
  truth.gamma = cfg.number_or("imaging.rabi_gamma", 2000.0);
  truth.omega = cfg.hz_or("imaging.rabi_omega_hz", from_hz(5e3));
  truth.offset = cfg.number_or("imaging.rabi_offset", 0.01);
  const double sigma = cfg.number_or("imaging.rabi_sigma", 0.02);
  const int points = static_cast<int>(cfg.integer_or("imaging.rabi_points",
                                                     101));
  const double t_max = cfg.number_or("imaging.rabi_t_max_s", 500e-6);
  Eigen::VectorXd times(points);
  for (int i = 0; i < points; ++i)
    times(i) = t_max * i / std::max(1, points - 1);
  const auto trace =
      measure::simulate_rabi(truth, times, sigma, seed, 1000);
  const auto rabi = measure::rabi_fit(times, trace, truth.omega);

  json doc;
  doc["projection"] = {{"a0", fit_atoms.a0},
                       {"a1", fit_atoms.a1},
                       {"a2", fit_atoms.a2},
                       {"g", model.g},
                       {"g_light_fit", fit_light.a1},
                       {"r", r_hat},
                       {"settings", k},
                       {"trials_per_setting", n_trials}};
  doc["rabi"] = {{"amplitude", rabi.params.amplitude},
                 {"gamma", rabi.params.gamma},
                 {"omega_hz", to_hz(rabi.params.omega)},
                 {"offset", rabi.params.offset},
                 {"contrast", rabi.contrast},
                 {"true_contrast", measure::rabi_contrast(truth)},
                 {"sse", rabi.sse}};
  emit(opts, doc, "calibrate.json", opts.format == "json");
  emit_csv(opts, rec.str(), "measurement_records.csv",
           opts.format == "csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-variable graph states from cavity squeezing"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_option("--config", opts.config_path, "run configuration (INI)");
  app.add_option("--out", opts.out_dir, "directory for output files");
  app.add_option("--format", opts.format, "stdout payload: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_value, "override sampling.seed");

  auto* compile_cmd =
      app.add_subcommand("compile", "compile a graph to a pulse sequence");
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "simulate the compiled sequence and emit the state");
  auto* budget_cmd =
      app.add_subcommand("budget", "combine the configured noise budget");
  std::string records_path;
  auto* witness_cmd = app.add_subcommand(
      "witness", "evaluate the witness suite on a state or records");
  witness_cmd->add_option("--records", records_path,
                          "measurement records CSV");
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "compare exact spin-1 dynamics against the Gaussian model");
  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "fit synthetic imaging and Rabi calibration data");
  for (auto* sub : {compile_cmd, simulate_cmd, budget_cmd, witness_cmd,
                    oracle_cmd, calibrate_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (*seed_opt) opts.seed = seed_value;
    if (compile_cmd->parsed()) return cmd_compile(opts);
    if (simulate_cmd->parsed()) return cmd_simulate(opts);
    if (budget_cmd->parsed()) return cmd_budget(opts);
    if (witness_cmd->parsed()) return cmd_witness(opts, records_path);
    if (oracle_cmd->parsed()) return cmd_oracle(opts);
    if (calibrate_cmd->parsed()) return cmd_calibrate(opts);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnroutableGraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
