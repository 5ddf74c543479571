#include "dunes/eps_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dunes/linear_solver.hpp"

namespace dunes {

double EpsProblem::eps_power() const {
  return i_exponent == 2 ? consts.epsilon * consts.epsilon : consts.epsilon;
}

double EpsProblem::tau_of(double t) const {
  return forcing.params().regime == Regime::Mean
             ? t / std::sqrt(consts.epsilon)
             : 0.0;
}

double EpsProblem::effective_dt() const {
  if (dt > 0.0) return dt;
  return std::min(0.1 * eps_power(), T_final > 0.0 ? T_final / 256.0 : 0.1);
}

void EpsProblem::validate() const {
  consts.validate();
  if (!A_override) consts.validate_against(forcing);
  if (i_exponent != 1 && i_exponent != 2)
    throw ConfigError("eps problem: i_exponent must be 1 or 2");
  if (T_final < 0.0) throw ConfigError("eps problem: T_final must be >= 0");
  if (dt < 0.0) throw ConfigError("eps problem: dt must be >= 0");
  // Accuracy guard: the step must resolve the fast time scale.
  if (dt > 0.0 && dt > eps_power())
    throw ConfigError("eps problem: dt must not exceed eps^i");
}

FluxField assemble_face_diffusivity(const EpsProblem& p, double t) {
  const Grid& g = p.z0.grid();
  FluxField A(g);
  const double theta = p.theta_of(t);
  const double tau = p.tau_of(t);
  auto value = [&](Vec2 x) {
    if (p.A_override) return (*p.A_override)(t, x) + p.consts.nu;
    return assemble_coefficients(p.consts, p.law, p.forcing, t, tau, theta, x)
               .A +
           p.consts.nu;
  };
  A.fill_x(value);
  A.fill_y(value);
  return A;
}

FluxField assemble_face_drift(const EpsProblem& p, double t) {
  const Grid& g = p.z0.grid();
  FluxField C(g);
  const double theta = p.theta_of(t);
  const double tau = p.tau_of(t);
  auto value = [&](Vec2 x) {
    if (p.C_override) return (*p.C_override)(t, x);
    return assemble_coefficients(p.consts, p.law, p.forcing, t, tau, theta, x)
        .C;
  };
  C.fill_x([&](Vec2 x) { return value(x).x; });
  C.fill_y([&](Vec2 x) { return value(x).y; });
  return C;
}

ScalarField step_implicit(const EpsProblem& p, const ScalarField& z_n,
                          double t_n, double dt, StepDiagnostics* diag,
                          double* mass_prev) {
  const Grid& grid = z_n.grid();
  const double t_next = t_n + dt;
  const double k = dt / p.eps_power();

  const FluxField A = assemble_face_diffusivity(p, t_next);
  const FluxField C = assemble_face_drift(p, t_next);

  // rhs = z_n + k*(boundary source + div C)
  const ScalarField bsrc = diffusion_boundary_source(A, p.g, t_next);
  const ScalarField divC = divergence_of_drift(C);
  std::vector<double> rhs(z_n.data());
  for (std::size_t idx = 0; idx < rhs.size(); ++idx)
    rhs[idx] += k * (bsrc.data()[idx] + divC.data()[idx]);

  // operator: v -> v - k * L0 v   (symmetric positive definite for A >= 0)
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    ScalarField vf(grid);
    vf.data() = v;
    const ScalarField Lv = apply_diffusion_homogeneous(A, vf);
    out.resize(v.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx)
      out[idx] = v[idx] - k * Lv.data()[idx];
  };

  const ScalarField ddiag = diffusion_diagonal(A);
  std::vector<double> inv_diag(ddiag.data().size());
  for (std::size_t idx = 0; idx < inv_diag.size(); ++idx)
    inv_diag[idx] = 1.0 / (1.0 + k * ddiag.data()[idx]);

  std::vector<double> x(z_n.data());  // warm start from z_n
  const int max_iter = 10 * grid.nx * grid.ny;
  const CgResult cg = pcg(apply, rhs, x, inv_diag, p.cg_tol, max_iter);
  if (!cg.converged) {
    std::ostringstream os;
    os << "implicit step at t=" << t_next << ": CG stalled at relative residual "
       << cg.rel_residual << " after " << cg.iterations << " iterations";
    throw SolverError(os.str(), cg.history);
  }

  ScalarField z_next(grid);
  z_next.data() = std::move(x);
  z_next.check_finite("implicit step");

  if (diag) {
    diag->t = t_next;
    diag->l2 = l2_norm(z_next);
    diag->h1 = h1_seminorm(z_next);
    diag->mass = mass(z_next);
    diag->boundary_flux =
        boundary_flux_integral(A, z_next, p.g, t_next, C) / p.eps_power();
    diag->cg_iterations = cg.iterations;
    if (mass_prev)
      diag->identity_gap =
          std::abs((diag->mass - *mass_prev) / dt - diag->boundary_flux);
  }
  return z_next;
}

SolveRun solve(const EpsProblem& p) {
  p.validate();
  SolveRun run;
  ScalarField z = p.z0;
  z.check_finite("initial data");
  run.times.push_back(0.0);
  run.snapshots.push_back(z);

  if (p.T_final <= 0.0) return run;

  const double dt = p.effective_dt();
  double t = 0.0;
  double m_prev = mass(z);
  int step = 0;
  while (t < p.T_final - 1e-12 * p.T_final) {
    const double step_dt = std::min(dt, p.T_final - t);
    StepDiagnostics d;
    try {
      z = step_implicit(p, z, t, step_dt, &d, &m_prev);
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << e.what() << " (step " << step << ")";
      throw SolverError(os.str(), e.residual_history());
    }
    t += step_dt;
    m_prev = d.mass;
    run.times.push_back(t);
    run.snapshots.push_back(z);
    run.diagnostics.push_back(d);
    ++step;
  }
  return run;
}

BoundStudy uniform_bound_study(const EpsProblem& tmpl,
                               const std::vector<double>& eps_ladder) {
  if (eps_ladder.empty())
    throw std::invalid_argument("uniform_bound_study: empty ladder");
  for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] > eps_ladder[i + 1]))
      throw std::invalid_argument(
          "uniform_bound_study: ladder must be strictly decreasing");
  for (double e : eps_ladder)
    if (!(e > 0.0 && e < 1.0))
      throw std::invalid_argument(
          "uniform_bound_study: epsilons must lie in (0,1)");

  BoundStudy study;
  double prev = 0.0;
  for (double eps : eps_ladder) {
    EpsProblem p = tmpl;
    p.consts.epsilon = eps;
    auto fp = p.forcing.params();
    fp.epsilon = eps;
    p.forcing = TidalForcing(fp);
    p.dt = 0.0;  // default rule per epsilon
    SolveRun run;
    try {
      run = solve(p);
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "uniform_bound_study at eps=" << eps << ": " << e.what();
      throw SolverError(os.str(), e.residual_history());
    }
    double sup = l2_norm(run.snapshots.front());
    for (const auto& d : run.diagnostics) sup = std::max(sup, d.l2);
    BoundStudyRow row;
    row.epsilon = eps;
    row.sup_l2 = sup;
    row.ratio = prev > 0.0 ? sup / prev : 0.0;
    study.rows.push_back(row);
    study.max_sup_l2 = std::max(study.max_sup_l2, sup);
    prev = sup;
  }
  return study;
}

std::vector<MassBalanceRow> mass_balance_report(const SolveRun& run) {
  if (run.snapshots.size() < 2)
    throw std::invalid_argument("mass_balance_report: need >= 2 snapshots");
  std::vector<MassBalanceRow> rows;
  const double m0 = mass(run.snapshots.front());
  for (std::size_t n = 0; n < run.diagnostics.size(); ++n) {
    const double dt = run.times[n + 1] - run.times[n];
    const double m_prev = mass(run.snapshots[n]);
    MassBalanceRow r;
    r.t = run.times[n + 1];
    r.mass_rate = (run.diagnostics[n].mass - m_prev) / dt;
    r.boundary_flux = run.diagnostics[n].boundary_flux;
    r.identity_gap = run.diagnostics[n].identity_gap;
    r.mass_drift = run.diagnostics[n].mass - m0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dunes
