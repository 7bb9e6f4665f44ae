#include "gsq/graph.hpp"

#include <cmath>
#include <variant>

#include "doctest.h"
#include "gsq/dynamics.hpp"
#include "gsq/errors.hpp"
#include "gsq/units.hpp"

using namespace gsq;

namespace {

constexpr double kPi = 3.14159265358979323846;

graphc::GraphSpec path3() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1;
  a(1, 2) = a(2, 1) = 1;
  return graphc::from_adjacency(a);
}

double nullifier_variance(const gaussian::GaussianState& state,
                          const Eigen::MatrixXd& adj, int site) {
  const int m = state.modes();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * m);
  w(m + site) = 1;
  for (int j = 0; j < m; ++j) w(j) = -adj(site, j);
  return w.dot(state.cov * w);
}

}  // namespace

TEST_CASE("named graphs and adjacency validation") {
  CHECK(graphc::epr_graph().size() == 2);
  CHECK(graphc::square_graph().size() == 4);
  CHECK(graphc::edgeless_graph(5).size() == 5);
  CHECK(graphc::square_graph().adjacency.sum() == doctest::Approx(8.0));

  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(graphc::from_adjacency(bad), InputError);
  bad << 1, 1, 1, 0;
  CHECK_THROWS_AS(graphc::from_adjacency(bad), InputError);
  CHECK_THROWS_AS(graphc::edgeless_graph(0), InputError);
}

TEST_CASE("square graph eigenmodes are canonical sign patterns") {
  const auto em = graphc::eigenmodes(graphc::square_graph());
  CHECK(em.values(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(em.values(1) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(em.values(2) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(em.values(3) == doctest::Approx(-2.0).epsilon(1e-12));

  Eigen::MatrixXd expect(4, 4);
  expect << 1, 1, 1, 1,
            1, 1, -1, -1,
            1, -1, -1, 1,
            1, -1, 1, -1;
  expect *= 0.5;
  CHECK((em.vectors - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("target angles follow arccot of the eigenvalue") {
  CHECK(rad_to_deg(graphc::target_angle(1.0)) ==
        doctest::Approx(45.0).epsilon(1e-12));
  CHECK(rad_to_deg(graphc::target_angle(-1.0)) ==
        doctest::Approx(135.0).epsilon(1e-12));
  CHECK(rad_to_deg(graphc::target_angle(2.0)) ==
        doctest::Approx(26.56505117707799).epsilon(1e-12));
  CHECK(rad_to_deg(graphc::target_angle(-2.0)) ==
        doctest::Approx(153.43494882292202).epsilon(1e-12));
  CHECK(rad_to_deg(graphc::target_angle(0.0)) ==
        doctest::Approx(90.0).epsilon(1e-12));
}

TEST_CASE("path graph is not routable through the symmetric mode") {
  const auto em = graphc::eigenmodes(path3());
  CHECK(em.values(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const graphc::PulseParams pulse{-from_hz(100.0),
                                  from_hz(100.0)};
  CHECK_THROWS_AS(graphc::compile(path3(), 0.5, pulse),
                  UnroutableGraphError);
}

TEST_CASE("compiled pair sequence has the expected shape") {
  const double q = from_hz(100.0);
  const auto seq = graphc::compile(graphc::epr_graph(), 0.5, {-q, q});
  CHECK(seq.modes == 2);
  CHECK(seq.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(seq.eigenvalues(1) == doctest::Approx(-1.0));
  CHECK(seq.angles(0) == doctest::Approx(kPi / 4));
  CHECK(seq.angles(1) == doctest::Approx(3 * kPi / 4));

  int n_squeeze = 0, n_flip = 0, n_spinor = 0;
  for (const auto& step : seq.steps) {
    if (const auto* sq = std::get_if<graphc::Squeeze>(&step)) {
      ++n_squeeze;
      CHECK(sq->tau == doctest::Approx(0.5 / q).epsilon(1e-12));
    } else if (const auto* fl = std::get_if<graphc::LocalPiFlip>(&step)) {
      ++n_flip;
      REQUIRE(fl->sites.size() == 1);
      CHECK(fl->sites[0] == 1);
    } else if (std::holds_alternative<graphc::GlobalSpinor>(step)) {
      ++n_spinor;
    }
  }
  CHECK(n_squeeze == 2);
  CHECK(n_flip == 1);
  CHECK(n_spinor >= 1);
}

TEST_CASE("simulated square graph lands modes on target angles") {
  const double q = from_hz(100.0);
  const double r = 0.5;
  const auto seq = graphc::compile(graphc::square_graph(), r, {-q, q});
  const auto state = graphc::simulate(seq);
  const auto report = graphc::mode_report(state, seq.mode_basis);

  REQUIRE(report.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(report[k].zeta2_min ==
          doctest::Approx(std::exp(-2 * r)).epsilon(1e-9));
    CHECK(report[k].zeta2_max ==
          doctest::Approx(std::exp(2 * r)).epsilon(1e-9));
    double diff = std::fmod(report[k].phi_min - seq.angles(k), kPi);
    if (diff < -kPi / 2) diff += kPi;
    if (diff > kPi / 2) diff -= kPi;
    CHECK(std::abs(diff) < 1e-9);
  }
}

TEST_CASE("square graph nullifier variances match the mode identity") {
  const double q = from_hz(100.0);
  const double r = 0.5;
  const auto g = graphc::square_graph();
  const auto state = graphc::simulate(graphc::compile(g, r, {-q, q}));
  for (int i = 0; i < 4; ++i) {
    CHECK(nullifier_variance(state, g.adjacency, i) ==
          doctest::Approx(std::exp(-2 * r) * 3.0).epsilon(1e-9));
  }
}

TEST_CASE("edgeless graph compiles to uncorrelated squeezing") {
  const double q = from_hz(100.0);
  const auto g = graphc::edgeless_graph(2);
  const auto seq = graphc::compile(g, 0.4, {-q, q});
  const auto state = graphc::simulate(seq);
  const auto a = graphc::reconstruct_adjacency(state);
  CHECK(a.cwiseAbs().maxCoeff() < 1e-12);
  const auto report = graphc::mode_report(state, seq.mode_basis);
  for (const auto& mode : report)
    CHECK(mode.phi_min == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("pair adjacency reconstruction matches the squeezing level") {
  const Eigen::MatrixXd v = graphc::eigenmodes(graphc::epr_graph()).vectors;

  SUBCASE("moderate squeezing gives the closed-form weight") {
    const double s = 0.5;
    const auto state = graphc::state_from_modes(
        {{s, 1 / s, kPi / 4}, {s, 1 / s, 3 * kPi / 4}}, v);
    const auto a = graphc::reconstruct_adjacency(state);
    CHECK(a(0, 1) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(a(1, 0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(std::abs(a(0, 0)) < 1e-12);
    const auto corr = graphc::correlation_xp(state);
    CHECK(corr(0, 1) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(std::abs(corr(0, 0)) < 1e-12);
  }

  SUBCASE("strong squeezing approaches unit weight") {
    const double s = 1e-3;
    const auto state = graphc::state_from_modes(
        {{s, 1 / s, kPi / 4}, {s, 1 / s, 3 * kPi / 4}}, v);
    const auto a = graphc::reconstruct_adjacency(state);
    CHECK(std::abs(a(0, 1) - 1.0) < 1e-5);
  }

  SUBCASE("compiled route agrees") {
    const double q = from_hz(100.0);
    const double r = std::log(2.0) / 2;  // zeta^2 = 0.5
    const auto state =
        graphc::simulate(graphc::compile(graphc::epr_graph(), r, {-q, q}));
    const auto a = graphc::reconstruct_adjacency(state);
    CHECK(a(0, 1) == doctest::Approx(0.6).epsilon(1e-9));
  }
}

TEST_CASE("separability bounds") {
  SUBCASE("square ring") {
    const auto b = graphc::separability_bound(graphc::square_graph());
    CHECK(b.regular);
    CHECK(b.closed_form ==
          doctest::Approx(2 * std::sqrt(2.0) / 3).epsilon(1e-12));
    CHECK(b.minimized == doctest::Approx(b.closed_form).epsilon(1e-9));
  }
  SUBCASE("pair") {
    const auto b = graphc::separability_bound(graphc::epr_graph());
    CHECK(b.regular);
    CHECK(b.closed_form == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.minimized == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("edgeless") {
    const auto b = graphc::separability_bound(graphc::edgeless_graph(5));
    CHECK(b.closed_form == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(b.minimized < 1e-7);
  }
  SUBCASE("path is irregular with a known minimum") {
    const auto b = graphc::separability_bound(path3());
    CHECK_FALSE(b.regular);
    CHECK(b.minimized ==
          doctest::Approx(0.9292312334115679).epsilon(1e-9));
  }
}

TEST_CASE("loss channels reproduce the dissipative variance") {
  const double q = from_hz(100.0);
  const double r = 0.5;
  const double tau = r / q;
  const auto seq = graphc::compile(graphc::epr_graph(), r, {-q, q});

  SUBCASE("collective decay touches each mode once") {
    graphc::NoiseChannels noise;
    noise.enabled = true;
    noise.gamma_coll = 0.2 * q;
    const auto state = graphc::simulate(seq, noise);
    const auto report = graphc::mode_report(state, seq.mode_basis);
    const double expect =
        dynamics::lindblad_variance(-q, q, noise.gamma_coll, 0.0, 2, tau);
    CHECK(report[0].zeta2_min == doctest::Approx(expect).epsilon(1e-12));
    CHECK(report[1].zeta2_min == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("scattering loss accumulates over later pulses") {
    graphc::NoiseChannels noise;
    noise.enabled = true;
    noise.gamma_sc = 0.05 * q;
    const auto state = graphc::simulate(seq, noise);
    const auto report = graphc::mode_report(state, seq.mode_basis);
    const double t_sc = 1 - 2 * tau * noise.gamma_sc;
    const double s = std::exp(-2 * r);
    // Scheduled first: the mode with the smaller eigenvalue, index 1.
    CHECK(report[1].zeta2_min ==
          doctest::Approx(t_sc * t_sc * s + 1 - t_sc * t_sc)
              .epsilon(1e-12));
    CHECK(report[0].zeta2_min ==
          doctest::Approx(t_sc * s + 1 - t_sc).epsilon(1e-12));
  }
}

TEST_CASE("bipartition two-colors routable graphs") {
  const auto square = graphc::bipartition(graphc::square_graph());
  CHECK(square.first == std::vector<int>{0, 2});
  CHECK(square.second == std::vector<int>{1, 3});

  const auto path = graphc::bipartition(path3());
  CHECK(path.first == std::vector<int>{0, 2});
  CHECK(path.second == std::vector<int>{1});

  Eigen::MatrixXd tri = Eigen::MatrixXd::Ones(3, 3);
  tri.diagonal().setZero();
  CHECK_THROWS_AS(graphc::bipartition(graphc::from_adjacency(tri)),
                  UnroutableGraphError);
}

TEST_CASE("sitewise steps act on the addressed sites only") {
  const double q = from_hz(100.0);
  const graphc::Squeeze sq{-q, q, 0.5 / q};

  const auto plain = graphc::simulate_steps({sq}, 2);
  const auto rotated =
      graphc::simulate_steps({sq, graphc::ReadoutRotation{{0}}}, 2);

  // Site 0 swaps x and p (up to sign), site 1 is untouched.
  CHECK(rotated.cov(0, 0) == doctest::Approx(plain.cov(2, 2)).epsilon(1e-12));
  CHECK(rotated.cov(2, 2) == doctest::Approx(plain.cov(0, 0)).epsilon(1e-12));
  CHECK(rotated.cov(1, 1) == doctest::Approx(plain.cov(1, 1)).epsilon(1e-12));
  CHECK(rotated.cov(3, 3) == doctest::Approx(plain.cov(3, 3)).epsilon(1e-12));

  const auto spun =
      graphc::simulate_steps({sq, graphc::LocalSpinor{{0}, kPi / 2}}, 2);
  CHECK((spun.cov - rotated.cov).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(
      graphc::simulate_steps({graphc::LocalPiFlip{{5}}}, 2), InputError);
}
