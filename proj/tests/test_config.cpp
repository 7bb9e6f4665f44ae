#include "gsq/config.hpp"

#include <cmath>

#include "doctest.h"
#include "gsq/errors.hpp"
#include "gsq/units.hpp"

using namespace gsq;

namespace {

const char* kSample = R"(# reference operating point
[cavity]
kappa_hz = 250e3     ; linewidth
nbar = 800

[dynamics]
q_hz = 1.2e3
derive_chi = false
chi_hz = -4.3e3

sampling.n_trials = 100000
sampling.seed = 17
oracle.atom_numbers = 20, 40 60
)";

}  // namespace

TEST_CASE("config parses sections, dotted keys and comments") {
  const auto cfg = config::Config::parse_string(kSample, "sample.ini");
  CHECK(cfg.number("cavity.kappa_hz") == doctest::Approx(250e3));
  CHECK(cfg.hz("cavity.kappa_hz") == doctest::Approx(from_hz(250e3)));
  CHECK(cfg.number("cavity.nbar") == doctest::Approx(800));
  CHECK(cfg.number("dynamics.chi_hz") == doctest::Approx(-4.3e3));
  CHECK_FALSE(cfg.flag("dynamics.derive_chi"));
  CHECK(cfg.integer("sampling.n_trials") == 100000);
  CHECK(cfg.integer("sampling.seed") == 17);

  const auto atoms = cfg.list("oracle.atom_numbers");
  REQUIRE(atoms.size() == 3);
  CHECK(atoms[0] == doctest::Approx(20));
  CHECK(atoms[2] == doctest::Approx(60));

  CHECK(cfg.has("dynamics.q_hz"));
  CHECK_FALSE(cfg.has("dynamics.tau_s"));
  CHECK(cfg.number_or("noise.beta", 15.0) == doctest::Approx(15.0));
  CHECK(cfg.text_or("graph.name", "epr") == "epr");
}

TEST_CASE("unknown keys are rejected with file and line") {
  try {
    config::Config::parse_string("[cavity]\nkapa_hz = 1\n", "bad.ini");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.ini:2") != std::string::npos);
    CHECK(msg.find("unknown key 'cavity.kapa_hz'") != std::string::npos);
  }
}

TEST_CASE("malformed input diagnostics") {
  using config::Config;
  CHECK_THROWS_AS(Config::parse_string("[cavity\nkappa_hz = 1\n"),
                  InputError);
  CHECK_THROWS_AS(Config::parse_string("kappa_hz = 1\n"), InputError);
  CHECK_THROWS_AS(Config::parse_string("[cavity]\nkappa_hz\n"), InputError);
  CHECK_THROWS_AS(Config::parse_string("[cavity]\nkappa_hz =\n"),
                  InputError);
  CHECK_THROWS_AS(
      Config::parse_string("[cavity]\nkappa_hz = 1\nkappa_hz = 2\n"),
      InputError);

  const auto cfg =
      config::Config::parse_string("[cavity]\nkappa_hz = fast\n");
  CHECK_THROWS_AS(cfg.number("cavity.kappa_hz"), InputError);
  CHECK_THROWS_AS(cfg.number("cavity.missing"), InputError);
}

TEST_CASE("typed getter validation") {
  const auto cfg = config::Config::parse_string(
      "[sampling]\nn_trials = 2.5\nseed = maybe\n[noise]\ndissipation = "
      "2\n");
  CHECK_THROWS_AS(cfg.integer("sampling.n_trials"), InputError);
  CHECK_THROWS_AS(cfg.integer("sampling.seed"), InputError);
  CHECK_THROWS_AS(cfg.flag("noise.dissipation"), InputError);
}

TEST_CASE("dump is a parse fixpoint") {
  const auto cfg = config::Config::parse_string(kSample, "sample.ini");
  const std::string canon = cfg.dump();
  const auto again = config::Config::parse_string(canon, "canon.ini");
  CHECK(again.dump() == canon);
  CHECK(again.entries() == cfg.entries());
}
