#include "dunes/twoscale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dunes {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double TestFunction::eval_time(double t, double T) const {
  switch (time) {
    case TimeKind::One: return 1.0;
    case TimeKind::Linear: return t;
    case TimeKind::Bump: {
      const double s = std::sin(kPi * t / T);
      return s * s;
    }
  }
  return 1.0;
}

double TestFunction::eval_theta(double th) const {
  switch (theta) {
    case ThetaKind::One: return 1.0;
    case ThetaKind::Sin: return std::sin(kTwoPi * theta_k * wrap_unit(th));
    case ThetaKind::Cos: return std::cos(kTwoPi * theta_k * wrap_unit(th));
  }
  return 1.0;
}

double TestFunction::eval_space(Vec2 x, const Grid& g) const {
  switch (space) {
    case SpaceKind::One: return 1.0;
    case SpaceKind::X: return x.x;
    case SpaceKind::Y: return x.y;
    case SpaceKind::SinSin:
      return std::sin(kPi * x.x / g.lx) * std::sin(kPi * x.y / g.ly);
  }
  return 1.0;
}

std::string TestFunction::id() const {
  std::string s;
  switch (theta) {
    case ThetaKind::One: s = "1"; break;
    case ThetaKind::Sin: s = "sin" + std::to_string(2 * theta_k) + "pi.th"; break;
    case ThetaKind::Cos: s = "cos" + std::to_string(2 * theta_k) + "pi.th"; break;
  }
  switch (space) {
    case SpaceKind::One: break;
    case SpaceKind::X: s += "*x"; break;
    case SpaceKind::Y: s += "*y"; break;
    case SpaceKind::SinSin: s += "*sinsin"; break;
  }
  switch (time) {
    case TimeKind::One: break;
    case TimeKind::Linear: s += "*t"; break;
    case TimeKind::Bump: s += "*bump"; break;
  }
  return s;
}

std::vector<TestFunction> default_battery() {
  std::vector<TestFunction> out;
  const TestFunction::ThetaKind thetas[] = {TestFunction::ThetaKind::One,
                                            TestFunction::ThetaKind::Sin,
                                            TestFunction::ThetaKind::Cos,
                                            TestFunction::ThetaKind::Sin};
  const int theta_ks[] = {1, 1, 1, 2};
  const TestFunction::SpaceKind spaces[] = {
      TestFunction::SpaceKind::One, TestFunction::SpaceKind::X,
      TestFunction::SpaceKind::Y, TestFunction::SpaceKind::SinSin};
  const TestFunction::TimeKind times[] = {TestFunction::TimeKind::One,
                                          TestFunction::TimeKind::Linear};
  for (int it = 0; it < 2; ++it)
    for (int is = 0; is < 4; ++is)
      for (int ith = 0; ith < 4; ++ith) {
        TestFunction f;
        f.theta = thetas[ith];
        f.theta_k = theta_ks[ith];
        f.space = spaces[is];
        f.time = times[it];
        out.push_back(f);
      }
  return out;
}

namespace {

// Midpoint quadrature of z * phi_x over the domain.
double space_pairing(const ScalarField& z, const TestFunction& psi) {
  const Grid& g = z.grid();
  std::vector<double> terms(g.cells());
  std::size_t k = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      terms[k++] = z.at(i, j) * psi.eval_space(g.center(i, j), g);
  return pairwise_sum(terms) * g.cell_area();
}

}  // namespace

double pair_sequence(const SolveRun& run, const TestFunction& psi,
                     double epsilon) {
  if (run.snapshots.size() < 2)
    throw std::invalid_argument("pair_sequence: need at least two snapshots");
  const double T = run.times.back();
  for (std::size_t n = 0; n + 1 < run.times.size(); ++n) {
    const double dt = run.times[n + 1] - run.times[n];
    if (dt > epsilon / 16.0 + 1e-12)
      throw std::invalid_argument(
          "pair_sequence: dt too coarse for epsilon (need dt <= eps/16)");
  }
  // trapezoid in t
  std::vector<double> terms(run.times.size(), 0.0);
  for (std::size_t n = 0; n < run.times.size(); ++n) {
    const double t = run.times[n];
    const double w_left = n > 0 ? 0.5 * (run.times[n] - run.times[n - 1]) : 0.0;
    const double w_right =
        n + 1 < run.times.size() ? 0.5 * (run.times[n + 1] - run.times[n]) : 0.0;
    const double value = space_pairing(run.snapshots[n], psi) *
                         psi.eval_time(t, T) *
                         psi.eval_theta(wrap_unit(t / epsilon));
    terms[n] = (w_left + w_right) * value;
  }
  return pairwise_sum(terms);
}

double pair_limit(const PeriodicProfile& profile, const TestFunction& psi,
                  double T) {
  if (profile.steps() < 32)
    throw std::invalid_argument("pair_limit: theta resolution >= 32 required");
  // theta: periodic rectangle rule over the profile nodes
  std::vector<double> theta_terms(profile.steps());
  for (int m = 0; m < profile.steps(); ++m) {
    const double th = m * profile.dtheta;
    theta_terms[m] = space_pairing(profile.nodes[m], psi) *
                     psi.eval_theta(th) * profile.dtheta;
  }
  const double space_theta = pairwise_sum(theta_terms);
  // t: dense trapezoid of the scalar time factor
  const int nt = 512;
  std::vector<double> t_terms(nt + 1);
  for (int n = 0; n <= nt; ++n) {
    const double t = T * n / nt;
    const double w = (n == 0 || n == nt) ? 0.5 : 1.0;
    t_terms[n] = w * psi.eval_time(t, T) * (T / nt);
  }
  return pairwise_sum(t_terms) * space_theta;
}

PeriodicProfile study_homogenized_profile(const StudySetup& setup) {
  CellProblem cell{setup.consts, setup.law,   setup.forcing,
                   setup.grid,   0.0,         0.0,
                   0,            setup.theta_steps, setup.g,
                   std::nullopt, setup.tol_periodic, 500};
  return solve_homogenized_short(cell);
}

TwoScaleReport convergence_study(const StudySetup& setup,
                                 const std::vector<TestFunction>& battery,
                                 const std::vector<double>& eps_ladder) {
  if (battery.empty())
    throw std::invalid_argument("convergence_study: empty psi battery");
  if (eps_ladder.size() < 3)
    throw std::invalid_argument("convergence_study: ladder length >= 3");
  for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] > eps_ladder[i + 1]))
      throw std::invalid_argument(
          "convergence_study: ladder must be strictly decreasing");

  const PeriodicProfile U = study_homogenized_profile(setup);

  TwoScaleReport report;
  report.eps_ladder = eps_ladder;
  std::vector<double> limits(battery.size());
  for (std::size_t b = 0; b < battery.size(); ++b)
    limits[b] = pair_limit(U, battery[b], setup.T_final);

  for (double eps : eps_ladder) {
    ModelConstants k = setup.consts;
    k.epsilon = eps;
    auto fp = setup.forcing.params();
    fp.epsilon = eps;
    // dt scales like eps^2 so the integrator bias (a fixed fast-time step
    // would leave an eps-independent floor) decays with the two-scale signal
    EpsProblem p{k,       setup.law, TidalForcing(fp), 1, setup.z0,
                 setup.g, setup.T_final, std::min(eps / 16.0, eps * eps / 2.0)};
    SolveRun run;
    try {
      run = solve(p);
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "convergence_study at eps=" << eps << ": " << e.what();
      throw SolverError(os.str(), e.residual_history());
    }
    for (std::size_t b = 0; b < battery.size(); ++b) {
      PairingRow row;
      row.psi_id = battery[b].id();
      row.epsilon = eps;
      row.pairing = pair_sequence(run, battery[b], eps);
      row.limit_pairing = limits[b];
      row.abs_error = std::abs(row.pairing - row.limit_pairing);
      report.rows.push_back(row);
    }
  }

  // verdict: errors decrease monotonically on the final 3 ladder entries
  report.monotone_decrease = true;
  const std::size_t L = eps_ladder.size();
  for (std::size_t b = 0; b < battery.size(); ++b) {
    bool ok = true;
    for (std::size_t i = L - 3; i + 1 < L; ++i) {
      const double e0 = report.rows[i * battery.size() + b].abs_error;
      const double e1 = report.rows[(i + 1) * battery.size() + b].abs_error;
      if (!(e1 < e0)) ok = false;
    }
    if (!ok) {
      report.monotone_decrease = false;
      report.failing_psi.push_back(battery[b].id());
    }
  }
  return report;
}

CorrectorReport corrector_study(const StudySetup& setup,
                                const std::vector<TestFunction>& battery,
                                const std::vector<double>& eps_ladder) {
  if (setup.forcing.params().regime != Regime::Short)
    throw std::invalid_argument(
        "corrector_study: stated for the short regime only");
  if (eps_ladder.empty())
    throw std::invalid_argument("corrector_study: empty ladder");

  // The corrector divides by eps, so every discrete error in U must sit well
  // below the O(eps) signal: solve the profile on a fine theta grid.
  StudySetup fine = setup;
  fine.theta_steps = std::max(512, setup.theta_steps);
  const PeriodicProfile U = study_homogenized_profile(fine);

  CorrectorReport report;
  double prev_sup = 0.0;
  for (double eps : eps_ladder) {
    ModelConstants k = setup.consts;
    k.epsilon = eps;
    auto fp = setup.forcing.params();
    fp.epsilon = eps;
    // well-prepared initial data: z0 = U at theta = 0. The corrector is an
    // O(eps) signal, so the time step must out-resolve it: dt ~ eps^(5/2)
    // makes the backward-Euler contribution to W decay like sqrt(eps).
    const double dt_corr = std::min(eps / 16.0, 0.5 * std::pow(eps, 2.5));
    EpsProblem p{k,       setup.law, TidalForcing(fp), 1, U.node(0),
                 setup.g, setup.T_final, dt_corr};
    const SolveRun run = solve(p);

    const SolveRun wrun = corrector_deviation(run, U, eps);
    const double sup = sup_l2(wrun);

    CorrectorRow row;
    row.epsilon = eps;
    row.sup_corrector_l2 = sup;
    row.ladder_ratio = prev_sup > 0.0 ? sup / prev_sup : 0.0;
    report.rows.push_back(row);
    prev_sup = sup;

    for (const auto& psi : battery) {
      PairingRow pr;
      pr.psi_id = psi.id();
      pr.epsilon = eps;
      pr.pairing = pair_sequence(wrun, psi, eps);
      pr.limit_pairing = 0.0;
      pr.abs_error = 0.0;
      report.corrector_pairings.push_back(pr);
    }
  }
  report.bounded = true;
  for (const auto& row : report.rows)
    if (row.ladder_ratio > 1.25) report.bounded = false;
  return report;
}

SolveRun corrector_deviation(const SolveRun& run, const PeriodicProfile& U,
                             double epsilon) {
  SolveRun wrun;
  wrun.times = run.times;
  for (std::size_t n = 0; n < run.snapshots.size(); ++n) {
    const ScalarField Ue = U.interpolate(run.times[n] / epsilon);
    ScalarField W = run.snapshots[n];
    for (std::size_t idx = 0; idx < W.data().size(); ++idx)
      W.data()[idx] = (W.data()[idx] - Ue.data()[idx]) / epsilon;
    wrun.snapshots.push_back(std::move(W));
  }
  return wrun;
}

double sup_l2(const SolveRun& run) {
  double sup = 0.0;
  for (const auto& z : run.snapshots) sup = std::max(sup, l2_norm(z));
  return sup;
}

SolveRun make_synthetic_run(const Grid& grid, double T, double dt,
                            const std::function<double(double t, Vec2 x)>& f) {
  SolveRun run;
  double t = 0.0;
  while (true) {
    ScalarField z(grid);
    z.fill([&](Vec2 x) { return f(t, x); });
    run.times.push_back(t);
    run.snapshots.push_back(std::move(z));
    if (t >= T - 1e-12 * std::max(T, 1.0)) break;
    t = std::min(t + dt, T);
  }
  return run;
}

}  // namespace dunes
