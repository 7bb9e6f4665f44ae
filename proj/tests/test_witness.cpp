#include "gsq/witness.hpp"

#include <cmath>

#include "doctest.h"
#include "gsq/errors.hpp"
#include "gsq/units.hpp"

using namespace gsq;

namespace {

constexpr double kPi = 3.14159265358979323846;

gaussian::GaussianState epr_primed(double s) {
  // Pair state in the readout frame: symmetric mode squeezed along x,
  // antisymmetric along p.
  const Eigen::MatrixXd v = graphc::eigenmodes(graphc::epr_graph()).vectors;
  return graphc::state_from_modes({{s, 1 / s, 0.0}, {s, 1 / s, kPi / 2}},
                                  v);
}

// Four hand-checkable trials, columns (x_1, x_2, p_1, p_2).
Eigen::MatrixXd hand_records() {
  Eigen::MatrixXd r(4, 4);
  r << 2, 1, 1, 1,
      -2, -1, -1, -1,
       0, 0, 1, -1,
       0, 0, -1, 1;
  return r;
}

}  // namespace

TEST_CASE("wineland criterion references variance to contrast") {
  CHECK(witness::wineland(0.52, 0.825) ==
        doctest::Approx(0.6303030303030303).epsilon(1e-12));
  CHECK(witness::wineland(1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(witness::wineland(-0.1, 0.8), InputError);
  CHECK_THROWS_AS(witness::wineland(0.5, 0.0), InputError);
  CHECK_THROWS_AS(witness::wineland(0.5, 1.2), InputError);
}

TEST_CASE("contrast from populations") {
  CHECK(witness::contrast_from_populations(0, 10, 0) ==
        doctest::Approx(1.0));
  CHECK(witness::contrast_from_populations(1, 8, 1) ==
        doctest::Approx(0.6));
  CHECK(witness::contrast_from_populations(5, 0, 5) ==
        doctest::Approx(-1.0));
  CHECK_THROWS_AS(witness::contrast_from_populations(-1, 2, 0), InputError);
  CHECK_THROWS_AS(witness::contrast_from_populations(0, 0, 0), InputError);
}

TEST_CASE("pair criteria on the analytic two-mode squeezed state") {
  const auto state = epr_primed(0.5);
  CHECK(witness::mancini_product(state, 0, 1) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(witness::steering_product(state, 0, 1) ==
        doctest::Approx(0.64).epsilon(1e-12));
  CHECK(witness::steering_product(state, 1, 0) ==
        doctest::Approx(0.64).epsilon(1e-12));

  const auto vac = gaussian::vacuum(2);
  CHECK(witness::mancini_product(vac, 0, 1) == doctest::Approx(1.0));
  CHECK(witness::steering_product(vac, 0, 1) == doctest::Approx(1.0));

  CHECK_THROWS_AS(witness::mancini_product(state, 0, 0), InputError);
  CHECK_THROWS_AS(witness::steering_product(state, 0, 5), InputError);
}

TEST_CASE("mancini sign selection follows the squeezed combination") {
  // Swapped mode angles squeeze (x_1 - x_2) and (p_1 + p_2) instead.
  const Eigen::MatrixXd v = graphc::eigenmodes(graphc::epr_graph()).vectors;
  const auto state = graphc::state_from_modes(
      {{0.5, 2.0, kPi / 2}, {0.5, 2.0, 0.0}}, v);
  CHECK(witness::mancini_product(state, 0, 1) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sampled criteria recover plug-in moments") {
  const auto r = hand_records();

  const auto manc = witness::mancini_from_samples(r, 0, 1);
  CHECK(manc.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(manc.se >= 0);

  const auto steer = witness::steering_from_samples(r, 0, 1);
  CHECK(steer.value == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(steer.se == doctest::Approx(0.0).scale(1).epsilon(1e-12));

  CHECK_THROWS_AS(witness::mancini_from_samples(r.topRows(2), 0, 1),
                  InputError);
}

TEST_CASE("nullifier variances against mode identities") {
  const double q = from_hz(100.0);
  const double r = 0.5;
  const auto g = graphc::square_graph();
  const auto state = graphc::simulate(graphc::compile(g, r, {-q, q}));

  const auto norm = witness::nullifier_variances(state, g);
  const auto raw = witness::nullifier_variances(state, g, false);
  for (int i = 0; i < 4; ++i) {
    CHECK(norm(i) == doctest::Approx(std::exp(-2 * r)).epsilon(1e-9));
    CHECK(raw(i) == doctest::Approx(3 * std::exp(-2 * r)).epsilon(1e-9));
  }
  CHECK(witness::mean_nullifier(state, g) ==
        doctest::Approx(std::exp(-2 * r)).epsilon(1e-9));

  const auto vac_v = witness::nullifier_variances(gaussian::vacuum(4), g);
  for (int i = 0; i < 4; ++i) CHECK(vac_v(i) == doctest::Approx(1.0));
}

TEST_CASE("sampled mean nullifier with a detection floor") {
  // Nullifiers by row: n_1 = p_1 - x_2 gives (0, 0, 1, -1) and
  // n_2 = p_2 - x_1 gives (-1, 1, -1, 1), so the normalized variances are
  // 0.25 and 0.5.
  const auto g = graphc::epr_graph();
  const auto est = witness::mean_nullifier_from_samples(hand_records(), g);
  CHECK(est.value == doctest::Approx(0.375).epsilon(1e-12));

  const auto sub =
      witness::mean_nullifier_from_samples(hand_records(), g, 0.5);
  CHECK(sub.value == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("phase space areas flag decoherence") {
  const double q = from_hz(100.0);
  const auto seq = graphc::compile(graphc::epr_graph(), 0.5, {-q, q});

  const auto pure = graphc::simulate(seq);
  const auto areas = witness::phase_space_areas(pure, seq.mode_basis);
  CHECK(areas(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(areas(1) == doctest::Approx(1.0).epsilon(1e-9));

  graphc::NoiseChannels noise;
  noise.enabled = true;
  noise.gamma_coll = 0.2 * q;
  const auto lossy = graphc::simulate(seq, noise);
  const auto lossy_areas = witness::phase_space_areas(lossy, seq.mode_basis);
  CHECK(lossy_areas(0) > 1.0);
  CHECK(lossy_areas(1) > 1.0);
}

TEST_CASE("zscore orientation") {
  const witness::Estimate e{0.64, 0.01};
  CHECK(witness::zscore(e, 1.0) == doctest::Approx(36.0));
}
