#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dunes/config.hpp"

using namespace dunes;

TEST_CASE("defaults parse and build every problem kind") {
  const RunConfig cfg = parse_config_text("");
  CHECK_NOTHROW(cfg.make_flux_law());
  CHECK_NOTHROW(cfg.make_forcing());
  CHECK_NOTHROW(cfg.make_eps_problem());
  CHECK_NOTHROW(cfg.make_cell_problem());
  CHECK(cfg.eps_i_exponent() == 1);
  CHECK(cfg.cell_i_exponent() == 0);
}

TEST_CASE("round-trip: serialize then parse is field-wise idempotent") {
  RunConfig cfg = parse_config_text("");
  cfg.epsilon = 0.0625;
  cfg.regime = Regime::Long;
  cfg.mutation = TidalForcing::Mutation::Aperiodic;
  cfg.eps_ladder = {0.5, 0.25};
  cfg.dt = 0.001;
  cfg.g_spec = "constant:0.3";
  cfg.cell_i = 1;
  cfg.g_thr_tilde = 2.4;
  const std::string text = serialize_config(cfg);
  const RunConfig back = parse_config_text(text);
  CHECK(serialize_config(back) == text);
  CHECK(back.epsilon == cfg.epsilon);
  CHECK(back.regime == cfg.regime);
  CHECK(back.mutation == cfg.mutation);
  CHECK(back.eps_ladder == cfg.eps_ladder);
  CHECK(back.dt == cfg.dt);
  CHECK(back.cell_i == cfg.cell_i);
  CHECK(back.g_thr_tilde == cfg.g_thr_tilde);
}

TEST_CASE("unknown keys and sections are rejected with location info") {
  try {
    parse_config_text("[model]\nzz = 1\n", "cfg.ini");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cfg.ini:2") != std::string::npos);
    CHECK(msg.find("zz") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[nosuch]\na = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("a = 1\n"), ConfigError);       // no section
  CHECK_THROWS_AS(parse_config_text("[model]\nbroken\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[model]\na = abc\n"), ConfigError);
}

TEST_CASE("invariants are re-validated by the builders") {
  RunConfig cfg = parse_config_text("");
  cfg.g_thr = 10.0;  // > d
  CHECK_THROWS_AS(cfg.make_flux_law(), ConfigError);
  cfg = parse_config_text("");
  cfg.theta_alpha = 0.6;
  cfg.theta_omega = 0.5;
  CHECK_THROWS_AS(cfg.make_forcing(), ConfigError);
  cfg = parse_config_text("");
  cfg.nx = 4;  // too coarse
  CHECK_THROWS_AS(cfg.make_grid(), ConfigError);
  cfg = parse_config_text("");
  cfg.epsilon = 1.5;
  CHECK_THROWS_AS(cfg.make_constants(), ConfigError);
}

TEST_CASE("z0 and g presets") {
  RunConfig cfg = parse_config_text("");
  cfg.z0_spec = "zero";
  CHECK(l2_norm(cfg.make_z0()) == 0.0);
  cfg.z0_spec = "gaussian:0.5,0.5,0.2,2.0";
  const ScalarField z = cfg.make_z0();
  CHECK(z.at(16, 16) == doctest::Approx(2.0).epsilon(0.01));
  cfg.z0_spec = "gaussian:bad";
  CHECK_THROWS_AS(cfg.make_z0(), ConfigError);
  cfg.z0_spec = "nonsense";
  CHECK_THROWS_AS(cfg.make_z0(), ConfigError);

  cfg = parse_config_text("");
  cfg.g_spec = "constant:0.7";
  CHECK(cfg.make_g()(0.0, {0.0, 0.5}) == 0.7);
  cfg.g_spec = "trace:cospi_decay,2.0";
  const BoundaryFunc g = cfg.make_g();
  CHECK(g(0.0, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(g(1.0, {0.0, 0.0}) == doctest::Approx(std::exp(-2.0)));
  cfg.g_spec = "trace:unknown,1";
  CHECK_THROWS_AS(cfg.make_g(), ConfigError);
}

TEST_CASE("regime wiring: long regime selects i = 2 and cell i = 1") {
  RunConfig cfg = parse_config_text("[forcing]\nregime = long\n");
  CHECK(cfg.eps_i_exponent() == 2);
  CHECK(cfg.cell_i_exponent() == 1);
  CHECK(cfg.effective_g_thr_tilde() == doctest::Approx(2.0));  // a * g_thr
  cfg.g_thr_tilde = 2.4;
  CHECK(cfg.effective_g_thr_tilde() == 2.4);
}
