#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dunes/cell_solver.hpp"
#include "dunes/linear_solver.hpp"

using namespace dunes;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

TidalForcing::Params forcing_params(Regime regime = Regime::Short) {
  TidalForcing::Params p;
  p.regime = regime;
  p.modulation_amplitude = 0.3;
  return p;
}

CellProblem default_cell(double mu, double nu, double eps = 0.125) {
  ModelConstants k{1.0, 0.5, 0.5, eps, nu, mu};
  auto fp = forcing_params();
  fp.epsilon = eps;
  return CellProblem{k,
                     FluxLaw(8.0, 1.0, 2.0, 0.8),
                     TidalForcing(fp),
                     Grid(12, 12, 1.0, 1.0),
                     0.0,
                     0.0,
                     0,
                     64,
                     constant_boundary(0.05),
                     std::nullopt,
                     1e-9,
                     500};
}

}  // namespace

TEST_CASE("homogeneous problem has the zero profile") {
  CellProblem p = default_cell(0.1, 0.1);
  // dead tide (no drift) and zero boundary data
  auto fp = forcing_params();
  fp.u_peak = 0.0;
  fp.mean_flow = {0.0, 0.0};
  fp.modulation_amplitude = 0.0;
  p.forcing = TidalForcing(fp);
  p.g = zero_boundary();
  const PeriodicProfile prof = solve_mu_nu(p);
  CHECK(prof.periodic_residual == 0.0);
  for (const auto& node : prof.nodes)
    for (double v : node.data()) CHECK(v == 0.0);
}

TEST_CASE("scalar ODE oracle: mu s + s' = cos(2 pi theta)") {
  // diffusion inert (A == 0): every cell follows the scalar ODE whose
  // periodic solution is (cos + 2 pi sin)/(1 + 4 pi^2)
  PeriodicMarchSpec spec;
  spec.grid = Grid(8, 8, 1.0, 1.0);
  spec.theta_steps = 8192;
  spec.mu = 1.0;
  spec.diffusivity = [](double, Vec2) { return 0.0; };
  spec.source = [](double th, Vec2) { return std::cos(2.0 * kPi * th); };
  spec.tol_periodic = 1e-12;
  const PeriodicProfile prof = solve_periodic_march(spec);

  const double A = 1.0 / (1.0 + 4.0 * kPi * kPi);
  const double B = 2.0 * kPi / (1.0 + 4.0 * kPi * kPi);
  CHECK(prof.nodes[0].at(4, 4) == doctest::Approx(A).epsilon(2e-3));

  // L2_# norm against the closed form (first-order march: ~7e-6 here)
  std::vector<double> sq(prof.steps());
  for (int m = 0; m < prof.steps(); ++m) {
    const double v = prof.nodes[m].at(0, 0);
    sq[m] = v * v;
  }
  const double num_norm = std::sqrt(pairwise_sum(sq) * prof.dtheta);
  const double exact_norm = std::sqrt((A * A + B * B) / 2.0);
  CHECK(std::abs(num_norm - exact_norm) <= 2e-5);
}

TEST_CASE("uniform source keeps the solution spatially uniform") {
  PeriodicMarchSpec spec;
  spec.grid = Grid(10, 10, 1.0, 1.0);
  spec.theta_steps = 64;
  spec.mu = 0.7;
  spec.diffusivity = [](double, Vec2) { return 0.0; };
  spec.source = [](double th, Vec2) { return std::sin(2.0 * kPi * th) + 0.2; };
  spec.tol_periodic = 1e-11;
  const PeriodicProfile prof = solve_periodic_march(spec);
  for (const auto& node : prof.nodes) {
    const double v0 = node.at(0, 0);
    for (double v : node.data()) CHECK(v == doctest::Approx(v0).epsilon(1e-14));
  }
  // independent oracle: the scalar backward-Euler recursion
  const int n = spec.theta_steps;
  const double dth = 1.0 / n;
  std::vector<double> s(n + 1, 0.0);
  for (int sweep = 0; sweep < 400; ++sweep) {
    for (int m = 0; m < n; ++m) {
      const double th = (m + 1) * dth;
      s[m + 1] = (s[m] + dth * (std::sin(2.0 * kPi * th) + 0.2)) /
                 (1.0 + spec.mu * dth);
    }
    if (std::abs(s[n] - s[0]) < 1e-13) break;
    s[0] = s[n];
  }
  for (int m = 0; m < n; ++m)
    CHECK(prof.nodes[m].at(3, 7) == doctest::Approx(s[m]).epsilon(1e-8));
}

TEST_CASE("solve_mu_nu converges on the default problem") {
  CellProblem p = default_cell(0.05, 0.05);
  const PeriodicProfile prof = solve_mu_nu(p);
  CHECK(prof.periodic_residual <= 1e-9);
  CHECK(prof.periods_used <= 500);
  CHECK(prof.linf_l2_norm > 0.0);
  // wrap check: stored nodes satisfy the periodicity the march certifies
  CHECK(l2_distance(prof.node(prof.steps()), prof.node(0)) == 0.0);
}

TEST_CASE("solve_mu_nu preconditions") {
  CellProblem p = default_cell(0.0, 0.1);
  CHECK_THROWS_AS(solve_mu_nu(p), std::invalid_argument);
  p = default_cell(0.1, 0.0);
  CHECK_THROWS_AS(solve_mu_nu(p), std::invalid_argument);
}

TEST_CASE("uniqueness: different Picard seeds land on the same profile") {
  CellProblem p = default_cell(0.05, 0.05);
  CellProblem q = p;
  ScalarField seed(p.grid);
  seed.fill([](Vec2 x) { return std::sin(3.0 * x.x) - 0.4 * x.y; });
  q.seed = seed;
  const PeriodicProfile a = solve_mu_nu(p);
  const PeriodicProfile b = solve_mu_nu(q);
  double sup = 0.0;
  for (int m = 0; m < a.steps(); ++m)
    sup = std::max(sup, l2_distance(a.nodes[m], b.nodes[m]));
  CHECK(sup <= 10.0 * p.tol_periodic);
}

TEST_CASE("mu continuation: decreasing increments, warm-started") {
  CellProblem p = default_cell(0.0, 0.05);
  const ContinuationResult res =
      continue_mu_to_zero(p, {1e-1, 1e-2, 1e-3, 1e-4});
  REQUIRE(res.increments.size() == 3);
  CHECK(res.increments[1] <= res.increments[0]);
  CHECK(res.increments[2] <= res.increments[1]);
  // single-entry ladder equals solve_mu_nu
  CellProblem q = default_cell(0.05, 0.05);
  const ContinuationResult single = continue_mu_to_zero(q, {0.05});
  const PeriodicProfile direct = solve_mu_nu(q);
  for (int m = 0; m < direct.steps(); ++m)
    CHECK(l2_distance(single.profile.nodes[m], direct.nodes[m]) <= 1e-12);
}

TEST_CASE("nu continuation stabilizes") {
  CellProblem p = default_cell(0.0, 0.0);
  const ContinuationResult res = continue_nu_to_zero(p, {1e-1, 1e-2, 1e-3});
  REQUIRE(res.increments.size() == 2);
  CHECK(res.increments[1] <= res.increments[0]);
  // identical ladder values are rejected (not strictly decreasing)
  CHECK_THROWS_AS(continue_nu_to_zero(p, {1e-2, 1e-2}), std::invalid_argument);
}

TEST_CASE("homogenized short: theta-independent data gives the stationary solution") {
  // constant active tide: clamp inactive, fields theta-independent
  auto fp = forcing_params();
  fp.u_peak = 0.0;
  fp.mean_flow = {1.2, 0.0};
  fp.modulation_amplitude = 0.3;
  CellProblem p = default_cell(0.0, 0.0);
  p.forcing = TidalForcing(fp);
  p.g = constant_boundary(0.1);
  const PeriodicProfile prof = solve_homogenized_short(p);

  // profile must be constant in theta
  for (int m = 1; m < prof.steps(); ++m)
    CHECK(l2_distance(prof.nodes[m], prof.nodes[0]) <= 1e-8);

  // independent oracle: direct stationary Robin solve -L0 U = div C + b_g
  const Grid& grid = p.grid;
  FluxField A(grid);
  auto diff = [&](Vec2 x) {
    return assemble_coefficients(p.consts, p.law, p.forcing, 0, 0, 0.0, x)
        .A_tilde;
  };
  A.fill_x(diff);
  A.fill_y(diff);
  FluxField C(grid);
  auto drift = [&](Vec2 x) {
    return assemble_coefficients(p.consts, p.law, p.forcing, 0, 0, 0.0, x)
        .C_tilde;
  };
  C.fill_x([&](Vec2 x) { return drift(x).x; });
  C.fill_y([&](Vec2 x) { return drift(x).y; });
  const ScalarField bsrc = diffusion_boundary_source(A, p.g, 0.0);
  const ScalarField divC = divergence_of_drift(C);
  std::vector<double> rhs(grid.cells());
  for (std::size_t k = 0; k < rhs.size(); ++k)
    rhs[k] = divC.data()[k] + bsrc.data()[k];
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    ScalarField vf(grid);
    vf.data() = v;
    const ScalarField Lv = apply_diffusion_homogeneous(A, vf);
    out.resize(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = -Lv.data()[k];
  };
  const ScalarField dg = diffusion_diagonal(A);
  std::vector<double> inv(dg.data().size());
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / dg.data()[k];
  std::vector<double> u(grid.cells(), 0.0);
  const CgResult cg = pcg(apply, rhs, u, inv, 1e-12, 10000);
  REQUIRE(cg.converged);
  ScalarField stationary(grid);
  stationary.data() = u;
  CHECK(l2_distance(prof.nodes[0], stationary) <= 1e-6);
}

TEST_CASE("threshold set: mask matches pointwise evaluation and anchoring is exact") {
  auto fp = forcing_params(Regime::Long);
  fp.modulation_amplitude = 0.0;
  CellProblem p = default_cell(0.0, 0.0);
  p.forcing = TidalForcing(fp);
  p.i_exponent = 1;
  p.g = zero_boundary();

  // raise the threshold so the plateau (A_tilde = a g_thr = 2) is masked
  const double g_thr_tilde = 2.4;
  const ThresholdSet thr = compute_threshold_set(p, g_thr_tilde, {0.0});

  // oracle: direct pointwise evaluation of the limit coefficient
  int masked = 0;
  for (int m = 0; m < p.theta_steps; ++m) {
    const double theta = double(m) / p.theta_steps;
    const double A_tilde =
        p.consts.a * p.law.eval_ga(norm(p.forcing.u0_component(theta)));
    CHECK(thr.masked(0, m) == (A_tilde < g_thr_tilde));
    masked += thr.masked(0, m);
  }
  REQUIRE(masked > 0);
  REQUIRE(masked < p.theta_steps);

  const PeriodicProfile prof = solve_homogenized_long(p, thr);
  // held exactly constant across masked nodes (backward difference zero)
  for (int m = 0; m < prof.steps(); ++m)
    if (prof.threshold_mask[m])
      CHECK(l2_distance(prof.node(m), prof.node(m - 1)) == 0.0);
  // active nodes solve the elliptic problem tightly
  for (int m = 0; m < prof.steps(); ++m)
    if (!prof.threshold_mask[m])
      CHECK(prof.elliptic_residuals[m] <= 1e-9);
}

TEST_CASE("fully masked threshold set is an error") {
  auto fp = forcing_params(Regime::Long);
  fp.modulation_amplitude = 0.0;
  CellProblem p = default_cell(0.0, 0.0);
  p.forcing = TidalForcing(fp);
  p.i_exponent = 1;
  const ThresholdSet thr = compute_threshold_set(p, 1e9, {0.0});
  CHECK_THROWS_AS(solve_homogenized_long(p, thr), SolverError);
}

TEST_CASE("norm certificates") {
  SUBCASE("zero profile gives zero norms") {
    PeriodicProfile prof;
    prof.dtheta = 1.0 / 64;
    prof.nodes.assign(64, ScalarField(Grid(8, 8, 1, 1), 0.0));
    const NormCertificates n = norm_certificates(prof, zero_boundary());
    CHECK(n.linf_l2 == 0.0);
    CHECK(n.laplacian_l2 == 0.0);
    CHECK(n.sup_abs_mass == 0.0);
  }
  SUBCASE("converged default profile has finite norms") {
    CellProblem p = default_cell(0.05, 0.05);
    const PeriodicProfile prof = solve_mu_nu(p);
    const NormCertificates n = norm_certificates(
        prof, p.g, &p, 1e-3,
        [](const CellProblem& q) { return solve_mu_nu(q); });
    CHECK(std::isfinite(n.l2_h1));
    CHECK(std::isfinite(n.dtheta_l2));
    CHECK(std::isfinite(n.laplacian_l2));
    CHECK(n.has_dt_norm);
    CHECK(std::isfinite(n.dt_l2_h1));
    CHECK(n.l2_h1 > 0.0);
  }
}

TEST_CASE("degenerate problem without regularization reports a stall") {
  // dead tide, A == 0, nu = 0, mu = 0, but nonzero boundary data: the
  // periodic march cannot contract
  auto fp = forcing_params();
  fp.u_peak = 0.0;
  fp.mean_flow = {0.3, 0.0};
  fp.modulation_amplitude = 0.0;
  PeriodicMarchSpec spec;
  spec.grid = Grid(8, 8, 1.0, 1.0);
  spec.theta_steps = 32;
  spec.mu = 0.0;
  spec.diffusivity = [](double, Vec2) { return 0.0; };
  spec.source = [](double, Vec2) { return 1.0; };  // constant injection
  spec.tol_periodic = 1e-9;
  spec.max_periods = 50;
  CHECK_THROWS_AS(solve_periodic_march(spec), SolverError);
}
