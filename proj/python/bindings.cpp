#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsq/config.hpp"
#include "gsq/dynamics.hpp"
#include "gsq/errors.hpp"
#include "gsq/gaussian.hpp"
#include "gsq/graph.hpp"
#include "gsq/measure.hpp"
#include "gsq/spin1.hpp"
#include "gsq/units.hpp"
#include "gsq/witness.hpp"

namespace py = pybind11;
using namespace gsq;

namespace {

void bind_units(py::module_& m) {
  m.def("from_hz", &from_hz, py::arg("f"));
  m.def("to_hz", &to_hz, py::arg("w"));
  m.def("deg_to_rad", &deg_to_rad, py::arg("d"));
  m.def("rad_to_deg", &rad_to_deg, py::arg("r"));
}

void bind_spin1(py::module_& m) {
  py::class_<spin1::SymmetricBasis>(m, "SymmetricBasis")
      .def(py::init<int>(), py::arg("n_atoms"))
      .def_property_readonly("atoms", &spin1::SymmetricBasis::atoms)
      .def_property_readonly("dim", &spin1::SymmetricBasis::dim);
  m.def("coherent_m0", &spin1::coherent_m0, py::arg("basis"));
  m.def("evolve_exact", &spin1::evolve_exact, py::arg("basis"),
        py::arg("psi0"), py::arg("chi"), py::arg("q"), py::arg("t"),
        py::arg("dense_cap") = 2000);
  m.def("quadrature_variance", &spin1::quadrature_variance, py::arg("basis"),
        py::arg("psi"), py::arg("phi"));
  m.def("spin_contrast", &spin1::contrast, py::arg("basis"), py::arg("psi"));
}

void bind_gaussian(py::module_& m) {
  py::class_<gaussian::GaussianState>(m, "GaussianState")
      .def(py::init<>())
      .def_readwrite("mean", &gaussian::GaussianState::mean)
      .def_readwrite("cov", &gaussian::GaussianState::cov)
      .def_property_readonly("modes", &gaussian::GaussianState::modes);
  m.def("vacuum", &gaussian::vacuum, py::arg("modes"));
  m.def("mode_quadrature_variance", &gaussian::mode_quadrature_variance,
        py::arg("state"), py::arg("pattern"), py::arg("phi"));
  py::class_<gaussian::ModeEllipse>(m, "ModeEllipse")
      .def_readonly("zeta2_min", &gaussian::ModeEllipse::zeta2_min)
      .def_readonly("zeta2_max", &gaussian::ModeEllipse::zeta2_max)
      .def_readonly("phi_min", &gaussian::ModeEllipse::phi_min);
  m.def("mode_ellipse",
        py::overload_cast<const gaussian::GaussianState&,
                          const Eigen::VectorXd&>(&gaussian::mode_ellipse),
        py::arg("state"), py::arg("pattern"));
}

void bind_dynamics(py::module_& m) {
  py::class_<dynamics::CavityParams>(m, "CavityParams")
      .def(py::init<>())
      .def_readwrite("kappa", &dynamics::CavityParams::kappa)
      .def_readwrite("omega_z", &dynamics::CavityParams::omega_z)
      .def_readwrite("delta_c", &dynamics::CavityParams::delta_c)
      .def_readwrite("omega", &dynamics::CavityParams::omega)
      .def_readwrite("omega_peak", &dynamics::CavityParams::omega_peak)
      .def_readwrite("eta_peak", &dynamics::CavityParams::eta_peak)
      .def_readwrite("nbar", &dynamics::CavityParams::nbar)
      .def_readwrite("atom_number", &dynamics::CavityParams::atom_number);
  m.def("delta_minus", &dynamics::delta_minus, py::arg("cavity"));
  py::class_<dynamics::ChiSplit>(m, "ChiSplit")
      .def_readonly("minus", &dynamics::ChiSplit::minus)
      .def_readonly("plus", &dynamics::ChiSplit::plus)
      .def("total", &dynamics::ChiSplit::total);
  m.def("interaction_strength", &dynamics::interaction_strength,
        py::arg("cavity"));
  py::class_<dynamics::SqueezingRate>(m, "SqueezingRate")
      .def_readonly("rate", &dynamics::SqueezingRate::rate)
      .def_readonly("hyperbolic", &dynamics::SqueezingRate::hyperbolic);
  m.def("squeezing_rate", &dynamics::squeezing_rate, py::arg("chi"),
        py::arg("q"));
  m.def("squeeze_map", &dynamics::squeeze_map, py::arg("chi"), py::arg("q"),
        py::arg("t"));
  py::class_<dynamics::Asymptotics>(m, "Asymptotics")
      .def_readonly("zeta2_min", &dynamics::Asymptotics::zeta2_min)
      .def_readonly("zeta2_max", &dynamics::Asymptotics::zeta2_max)
      .def_readonly("phi_min", &dynamics::Asymptotics::phi_min)
      .def_readonly("phi_max", &dynamics::Asymptotics::phi_max);
  m.def("asymptotic_squeezing", &dynamics::asymptotic_squeezing,
        py::arg("chi"), py::arg("q"), py::arg("t"));
  m.def("sinusoidal_variance", &dynamics::sinusoidal_variance,
        py::arg("zeta2_min"), py::arg("zeta2_max"), py::arg("phi_min"),
        py::arg("phi"));
  m.def("lindblad_variance", &dynamics::lindblad_variance, py::arg("chi"),
        py::arg("q"), py::arg("gamma_coll"), py::arg("gamma_sc"),
        py::arg("m_modes"), py::arg("t"));
  m.def("collective_dissipation_ratio", &dynamics::collective_dissipation_ratio,
        py::arg("chi"), py::arg("kappa"), py::arg("delta_minus"));
  m.def("eta_thermal", &dynamics::eta_thermal, py::arg("cavity"));
  m.def("scattering_rate", &dynamics::scattering_rate, py::arg("chi"),
        py::arg("n_atoms"), py::arg("eta"), py::arg("delta_minus"),
        py::arg("kappa"));
  m.def("coupling_inhomogeneity_noise", &dynamics::coupling_inhomogeneity_noise,
        py::arg("beta"));
  m.def("coupling_inhomogeneity_noise_asymptotic",
        &dynamics::coupling_inhomogeneity_noise_asymptotic, py::arg("beta"));
  m.def("interaction_fluctuation_noise",
        &dynamics::interaction_fluctuation_noise, py::arg("alpha"),
        py::arg("chi"), py::arg("q"), py::arg("rel_sigma"));
  py::class_<dynamics::NoiseBudget>(m, "NoiseBudget")
      .def(py::init<>())
      .def_readwrite("unitary_min_variance",
                     &dynamics::NoiseBudget::unitary_min_variance)
      .def_readwrite("beam_splitter", &dynamics::NoiseBudget::beam_splitter)
      .def_readwrite("additive", &dynamics::NoiseBudget::additive)
      .def_readwrite("contrast", &dynamics::NoiseBudget::contrast);
  m.def("combine_budget", &dynamics::combine_budget, py::arg("budget"));
}

void bind_graph(py::module_& m) {
  py::class_<graphc::GraphSpec>(m, "GraphSpec")
      .def_readonly("adjacency", &graphc::GraphSpec::adjacency)
      .def_property_readonly("sites", &graphc::GraphSpec::size);
  m.def("epr_graph", &graphc::epr_graph);
  m.def("square_graph", &graphc::square_graph);
  m.def("edgeless_graph", &graphc::edgeless_graph, py::arg("sites"));
  m.def("from_adjacency", &graphc::from_adjacency, py::arg("adjacency"));
  py::class_<graphc::Eigenmodes>(m, "Eigenmodes")
      .def_readonly("values", &graphc::Eigenmodes::values)
      .def_readonly("vectors", &graphc::Eigenmodes::vectors);
  m.def("eigenmodes", &graphc::eigenmodes, py::arg("graph"));
  m.def("target_angle", &graphc::target_angle, py::arg("eigenvalue"));

  py::class_<graphc::Squeeze>(m, "Squeeze")
      .def(py::init<double, double, double>(), py::arg("chi"), py::arg("q"),
           py::arg("tau"))
      .def_readonly("chi", &graphc::Squeeze::chi)
      .def_readonly("q", &graphc::Squeeze::q)
      .def_readonly("tau", &graphc::Squeeze::tau);
  py::class_<graphc::GlobalSpinor>(m, "GlobalSpinor")
      .def(py::init<double>(), py::arg("phi"))
      .def_readonly("phi", &graphc::GlobalSpinor::phi);
  py::class_<graphc::LocalSpinor>(m, "LocalSpinor")
      .def(py::init<std::vector<int>, double>(), py::arg("sites"),
           py::arg("phi"))
      .def_readonly("sites", &graphc::LocalSpinor::sites)
      .def_readonly("phi", &graphc::LocalSpinor::phi);
  py::class_<graphc::LocalPiFlip>(m, "LocalPiFlip")
      .def(py::init<std::vector<int>>(), py::arg("sites"))
      .def_readonly("sites", &graphc::LocalPiFlip::sites);
  py::class_<graphc::ReadoutRotation>(m, "ReadoutRotation")
      .def(py::init<std::vector<int>>(), py::arg("sites"))
      .def_readonly("sites", &graphc::ReadoutRotation::sites);

  py::class_<graphc::PulseParams>(m, "PulseParams")
      .def(py::init<double, double>(), py::arg("chi"), py::arg("q"))
      .def_readwrite("chi", &graphc::PulseParams::chi)
      .def_readwrite("q", &graphc::PulseParams::q);
  py::class_<graphc::CompiledSequence>(m, "CompiledSequence")
      .def_readonly("modes", &graphc::CompiledSequence::modes)
      .def_readonly("steps", &graphc::CompiledSequence::steps)
      .def_readonly("eigenvalues", &graphc::CompiledSequence::eigenvalues)
      .def_readonly("mode_basis", &graphc::CompiledSequence::mode_basis)
      .def_readonly("angles", &graphc::CompiledSequence::angles);
  m.def("compile", &graphc::compile, py::arg("graph"), py::arg("squeeze_r"),
        py::arg("pulse"));

  py::class_<graphc::NoiseChannels>(m, "NoiseChannels")
      .def(py::init<>())
      .def_readwrite("enabled", &graphc::NoiseChannels::enabled)
      .def_readwrite("gamma_coll", &graphc::NoiseChannels::gamma_coll)
      .def_readwrite("gamma_sc", &graphc::NoiseChannels::gamma_sc);
  m.def("simulate", &graphc::simulate, py::arg("sequence"),
        py::arg("noise") = graphc::NoiseChannels{});
  m.def("apply_steps", &graphc::apply_steps, py::arg("state"),
        py::arg("steps"),
        py::arg("noise") = graphc::NoiseChannels{});
  m.def("bipartition", &graphc::bipartition, py::arg("graph"));

  py::class_<graphc::ModeSpec>(m, "ModeSpec")
      .def(py::init<double, double, double>(), py::arg("zeta2_min"),
           py::arg("zeta2_max"), py::arg("phi_min"))
      .def_readwrite("zeta2_min", &graphc::ModeSpec::zeta2_min)
      .def_readwrite("zeta2_max", &graphc::ModeSpec::zeta2_max)
      .def_readwrite("phi_min", &graphc::ModeSpec::phi_min);
  m.def("mode_report", &graphc::mode_report, py::arg("state"),
        py::arg("basis"));
  m.def("state_from_modes", &graphc::state_from_modes, py::arg("modes"),
        py::arg("basis"));
  m.def("reconstruct_adjacency",
        py::overload_cast<const gaussian::GaussianState&>(
            &graphc::reconstruct_adjacency),
        py::arg("state"));
  m.def("reconstruct_adjacency_from_records",
        py::overload_cast<const Eigen::MatrixXd&>(
            &graphc::reconstruct_adjacency),
        py::arg("records"));
  m.def("correlation_xp", &graphc::correlation_xp, py::arg("state"));
  py::class_<graphc::SeparabilityBound>(m, "SeparabilityBound")
      .def_readonly("closed_form", &graphc::SeparabilityBound::closed_form)
      .def_readonly("minimized", &graphc::SeparabilityBound::minimized)
      .def_readonly("regular", &graphc::SeparabilityBound::regular);
  m.def("separability_bound", &graphc::separability_bound, py::arg("graph"));
}

void bind_witness(py::module_& m) {
  m.def("wineland", &witness::wineland, py::arg("zeta2"), py::arg("contrast"));
  m.def("contrast_from_populations", &witness::contrast_from_populations,
        py::arg("n_plus"), py::arg("n_zero"), py::arg("n_minus"));
  m.def("mancini_product", &witness::mancini_product, py::arg("state"),
        py::arg("a"), py::arg("b"));
  m.def("steering_product", &witness::steering_product, py::arg("state"),
        py::arg("a"), py::arg("b"));
  py::class_<witness::Estimate>(m, "Estimate")
      .def_readonly("value", &witness::Estimate::value)
      .def_readonly("se", &witness::Estimate::se)
      .def("__repr__", [](const witness::Estimate& e) {
        return "Estimate(value=" + std::to_string(e.value) +
               ", se=" + std::to_string(e.se) + ")";
      });
  m.def("zscore", &witness::zscore, py::arg("estimate"), py::arg("bound"));
  m.def("mancini_from_samples", &witness::mancini_from_samples,
        py::arg("records"), py::arg("a"), py::arg("b"),
        py::arg("subtract") = 0.0);
  m.def("steering_from_samples", &witness::steering_from_samples,
        py::arg("records"), py::arg("a"), py::arg("b"),
        py::arg("subtract") = 0.0);
  m.def("nullifier_variances", &witness::nullifier_variances,
        py::arg("state"), py::arg("graph"), py::arg("normalized") = true);
  m.def("mean_nullifier", &witness::mean_nullifier, py::arg("state"),
        py::arg("graph"));
  m.def("mean_nullifier_from_samples", &witness::mean_nullifier_from_samples,
        py::arg("records"), py::arg("graph"), py::arg("subtract") = 0.0);
  m.def("phase_space_areas", &witness::phase_space_areas, py::arg("state"),
        py::arg("basis"));
}

void bind_measure(py::module_& m) {
  py::class_<measure::TrialRng>(m, "TrialRng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream") = 0)
      .def("uniform", &measure::TrialRng::uniform)
      .def("gaussian", &measure::TrialRng::gaussian);
  m.def("sample_records", &measure::sample_records, py::arg("state"),
        py::arg("n_trials"), py::arg("seed"), py::arg("salt") = 0);
  m.def("sample_variance", &measure::sample_variance, py::arg("values"));
  m.def("variance_scan", &measure::variance_scan, py::arg("state"),
        py::arg("pattern"), py::arg("angles"), py::arg("n_trials"),
        py::arg("seed"));
  py::class_<measure::EllipseFit>(m, "EllipseFit")
      .def_readonly("ellipse", &measure::EllipseFit::ellipse)
      .def_readonly("c0", &measure::EllipseFit::c0)
      .def_readonly("c1", &measure::EllipseFit::c1)
      .def_readonly("c2", &measure::EllipseFit::c2);
  m.def("sinusoid_variance_fit", &measure::sinusoid_variance_fit,
        py::arg("angles"), py::arg("variances"));
  m.def("nullifier_samples", &measure::nullifier_samples, py::arg("state"),
        py::arg("graph"), py::arg("n_trials"), py::arg("seed"));
  py::class_<measure::ImagingModel>(m, "ImagingModel")
      .def(py::init<>())
      .def_readwrite("r", &measure::ImagingModel::r)
      .def_readwrite("g", &measure::ImagingModel::g)
      .def_readwrite("a0", &measure::ImagingModel::a0)
      .def_readwrite("a2", &measure::ImagingModel::a2);
  m.def("simulate_differential", &measure::simulate_differential,
        py::arg("model"), py::arg("total_counts"), py::arg("with_atoms"),
        py::arg("n_trials"), py::arg("seed"), py::arg("salt") = 0);
  py::class_<measure::QuadraticFit>(m, "QuadraticFit")
      .def_readonly("a0", &measure::QuadraticFit::a0)
      .def_readonly("a1", &measure::QuadraticFit::a1)
      .def_readonly("a2", &measure::QuadraticFit::a2);
  m.def("projection_noise_fit", &measure::projection_noise_fit,
        py::arg("totals"), py::arg("variances"), py::arg("trials"));
  py::class_<measure::RabiParams>(m, "RabiParams")
      .def(py::init<>())
      .def_readwrite("amplitude", &measure::RabiParams::amplitude)
      .def_readwrite("gamma", &measure::RabiParams::gamma)
      .def_readwrite("omega", &measure::RabiParams::omega)
      .def_readwrite("offset", &measure::RabiParams::offset);
  m.def("rabi_signal", &measure::rabi_signal, py::arg("params"),
        py::arg("t"));
  m.def("simulate_rabi", &measure::simulate_rabi, py::arg("params"),
        py::arg("t"), py::arg("sigma"), py::arg("seed"),
        py::arg("salt") = 0);
  py::class_<measure::RabiFit>(m, "RabiFit")
      .def_readonly("params", &measure::RabiFit::params)
      .def_readonly("contrast", &measure::RabiFit::contrast)
      .def_readonly("sse", &measure::RabiFit::sse)
      .def_readonly("iterations", &measure::RabiFit::iterations);
  m.def("rabi_fit", &measure::rabi_fit, py::arg("t"), py::arg("y"),
        py::arg("omega_hint"));
  m.def("rabi_contrast", &measure::rabi_contrast, py::arg("params"));
}

void bind_config(py::module_& m) {
  py::class_<config::Config>(m, "Config")
      .def_static("parse_file", &config::Config::parse_file, py::arg("path"))
      .def_static("parse_string", &config::Config::parse_string,
                  py::arg("text"), py::arg("name") = "<string>")
      .def("has", &config::Config::has, py::arg("key"))
      .def("number", &config::Config::number, py::arg("key"))
      .def("hz", &config::Config::hz, py::arg("key"))
      .def("integer", &config::Config::integer, py::arg("key"))
      .def("flag", &config::Config::flag, py::arg("key"))
      .def("text", &config::Config::text, py::arg("key"))
      .def("list", &config::Config::list, py::arg("key"))
      .def("dump", &config::Config::dump);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graph states of atomic ensembles: compiler, Gaussian simulator, "
            "witness suite, and calibration fits";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<UnroutableGraphError>(m, "UnroutableGraphError",
                                               PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);
  bind_units(m);
  bind_spin1(m);
  bind_gaussian(m);
  bind_dynamics(m);
  bind_graph(m);
  bind_witness(m);
  bind_measure(m);
  bind_config(m);
}
