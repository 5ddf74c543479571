#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dunes/coefficients.hpp"

using namespace dunes;

namespace {

TidalForcing::Params default_params(Regime regime = Regime::Short) {
  TidalForcing::Params p;
  p.regime = regime;
  if (regime == Regime::Mean) p.tau_peak = 0.05;
  return p;
}

FluxLaw default_law() { return FluxLaw(8.0, 1.0, 2.0, 0.8); }

}  // namespace

TEST_CASE("b = 0 makes A equal the limit exactly") {
  ModelConstants k{1.0, 0.0, 0.5, 0.125, 0.0, 0.0};
  TidalForcing f(default_params());
  const FluxLaw law = default_law();
  for (double theta : {0.1, 0.25, 0.6, 0.8}) {
    const auto s = assemble_coefficients(k, law, f, 0.0, 0.0, theta, {0.5, 0.5});
    CHECK(s.A == s.A_tilde);
  }
}

TEST_CASE("vanishing velocity kills the drift") {
  // dead tide: |U| = 0 everywhere
  auto p = default_params();
  p.u_peak = 0.0;
  p.mean_flow = {0.0, 0.0};
  TidalForcing f(p);
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  const auto s =
      assemble_coefficients(k, default_law(), f, 0.0, 0.0, 0.3, {0.5, 0.5});
  CHECK(s.C.x == 0.0);
  CHECK(s.C.y == 0.0);
  CHECK(s.C_tilde.x == 0.0);
  CHECK(s.A == doctest::Approx(default_law().eval_ga(0.0)));
}

TEST_CASE("direct arithmetic: a(1 - b eps M) ga = 0.76") {
  // Build data so that at a plateau node ga(|U|) = 0.8 and M = 0.5:
  //   law: d = 1, g_thr = 0.8 (so ga(u_thr) = 0.8 exactly on the plateau),
  //   forcing: m_peak chosen so M = m_peak (u_thr - mean)/u_peak = 0.5.
  FluxLaw law(1.0, 1.0, 0.8, 0.8);
  auto p = default_params();
  p.m_peak = 1.0;  // (1 - 0.5)/1 * 1.0 = 0.5 on the plateau
  TidalForcing f(p);
  ModelConstants k{1.0, 1.0, 0.5, 0.1, 0.0, 0.0};
  // theta = 0.75 sits on the clamped plateau
  const auto s = assemble_coefficients(k, law, f, 0.0, 0.0, 0.75, {0.5, 0.5});
  REQUIRE(norm(f.eval(0, 0, 0.75, {0.5, 0.5}).velocity) ==
          doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(f.eval(0, 0, 0.75, {0.5, 0.5}).height ==
          doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.A == doctest::Approx(0.76).epsilon(1e-13));
}

TEST_CASE("coefficient theta-periodicity to relative 1e-12") {
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  TidalForcing f(default_params());
  const FluxLaw law = default_law();
  for (double theta : {0.05, 0.33, 0.71}) {
    const auto s0 = assemble_coefficients(k, law, f, 0.1, 0.0, theta, {0.4, 0.3});
    const auto s1 =
        assemble_coefficients(k, law, f, 0.1, 0.0, theta + 1.0, {0.4, 0.3});
    const auto s2 =
        assemble_coefficients(k, law, f, 0.1, 0.0, theta + 2.0, {0.4, 0.3});
    CHECK(std::abs(s1.A - s0.A) <= 1e-12 * std::max(1.0, std::abs(s0.A)));
    CHECK(std::abs(s2.A - s0.A) <= 1e-12 * std::max(1.0, std::abs(s0.A)));
    CHECK(norm(s1.C - s0.C) <= 1e-12 * std::max(1.0, norm(s0.C)));
  }
}

TEST_CASE("freeze property of the assembled coefficient") {
  // Central differences of A_eps vanish at sub-threshold samples.
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  auto p = default_params();
  p.modulation_amplitude = 0.3;
  TidalForcing f(p);
  const FluxLaw law = default_law();
  const double h = 1e-7;
  const Vec2 x{0.41, 0.59};
  const double theta = 0.75;  // plateau
  REQUIRE(norm(f.eval(0, 0, theta, x).velocity) <= law.u_thr());
  auto A_at = [&](double t, double tau, double th, Vec2 xx) {
    return assemble_coefficients(k, law, f, t, tau, th, xx).A;
  };
  CHECK(std::abs(A_at(h, 0, theta, x) - A_at(-h, 0, theta, x)) / (2 * h) <=
        1e-8 * law.d());
  CHECK(std::abs(A_at(0, 0, theta + h, x) - A_at(0, 0, theta - h, x)) /
            (2 * h) <=
        1e-8 * law.d());
  CHECK(std::abs(A_at(0, 0, theta, {x.x + h, x.y}) -
                 A_at(0, 0, theta, {x.x - h, x.y})) /
            (2 * h) <=
        1e-8 * law.d());
}

TEST_CASE("limit consistency bound |A - A_tilde| <= a |b| eps sup|M| d") {
  TidalForcing f(default_params());
  const FluxLaw law = default_law();
  for (double eps : {0.25, 0.125, 0.0625}) {
    ModelConstants k{1.0, 0.5, 0.5, eps, 0.0, 0.0};
    const double bound = k.a * std::abs(k.b) * eps * f.sup_height() * law.d();
    for (int m = 0; m < 64; ++m) {
      const double theta = (m + 0.5) / 64.0;
      const auto s =
          assemble_coefficients(k, law, f, 0.0, 0.0, theta, {0.5, 0.5});
      CHECK(std::abs(s.A - s.A_tilde) <= bound * (1.0 + 1e-12));
    }
  }
  // mean regime: sqrt(eps) factor
  TidalForcing fm(default_params(Regime::Mean));
  ModelConstants k{1.0, 0.5, 0.5, 0.0625, 0.0, 0.0};
  const double bound =
      k.a * std::abs(k.b) * std::sqrt(k.epsilon) * fm.sup_height() * law.d();
  for (int m = 0; m < 64; ++m) {
    const auto s = assemble_coefficients(k, law, fm, 0.0, 0.37,
                                         (m + 0.5) / 64.0, {0.5, 0.5});
    CHECK(std::abs(s.A - s.A_tilde) <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("long-regime limit uses the x-independent leading tide") {
  auto p = default_params(Regime::Long);
  p.modulation_amplitude = 0.3;
  p.epsilon = 0.125;
  TidalForcing f(p);
  const FluxLaw law = default_law();
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  const auto s1 = assemble_coefficients(k, law, f, 0.0, 0.0, 0.2, {0.2, 0.2});
  const auto s2 = assemble_coefficients(k, law, f, 0.0, 0.0, 0.2, {0.5, 0.5});
  CHECK(s1.A_tilde == s2.A_tilde);  // x-independent limit
  CHECK(s1.A != s2.A);              // the eps-field itself is modulated
}

TEST_CASE("validate_hypotheses: compliant defaults pass at fine density") {
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  auto p = default_params();
  p.modulation_amplitude = 0.3;
  const auto report =
      validate_hypotheses(default_law(), TidalForcing(p), k, 24);
  CHECK(report.pass());
  CHECK(report.empirical_g_thr_tilde > 0.0);
}

TEST_CASE("validate_hypotheses: mutants are caught") {
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  auto p = default_params();
  p.mutation = TidalForcing::Mutation::Unfrozen;
  CHECK_FALSE(validate_hypotheses(default_law(), TidalForcing(p), k, 16).pass());
  p.mutation = TidalForcing::Mutation::Aperiodic;
  CHECK_FALSE(validate_hypotheses(default_law(), TidalForcing(p), k, 16).pass());
}

TEST_CASE("validate_hypotheses rejects a too-coarse sampling request") {
  ModelConstants k{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  CHECK_THROWS_AS(
      validate_hypotheses(default_law(), TidalForcing(default_params()), k, 8),
      std::invalid_argument);
}

TEST_CASE("constants invariant eps |b| sup|M| < 1") {
  TidalForcing f(default_params());
  ModelConstants bad{1.0, 50.0, 0.5, 0.5, 0.0, 0.0};
  CHECK_THROWS_AS(bad.validate_against(f), ConfigError);
  ModelConstants good{1.0, 0.5, 0.5, 0.125, 0.0, 0.0};
  CHECK_NOTHROW(good.validate_against(f));
}
