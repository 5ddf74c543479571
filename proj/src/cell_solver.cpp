#include "dunes/cell_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dunes/linear_solver.hpp"

namespace dunes {

ScalarField PeriodicProfile::interpolate(double theta) const {
  const int n = steps();
  const double s = wrap_unit(theta) * n;
  const int m0 = static_cast<int>(std::floor(s));
  const double w = s - m0;
  const ScalarField& a = node(m0);
  const ScalarField& b = node(m0 + 1);
  ScalarField out = a;
  for (std::size_t k = 0; k < out.data().size(); ++k)
    out.data()[k] = (1.0 - w) * a.data()[k] + w * b.data()[k];
  return out;
}

namespace {

void fill_profile_norms(PeriodicProfile& prof) {
  const int n = prof.steps();
  std::vector<double> h1sq(n), l2s(n), dth(n);
  double linf = 0.0;
  for (int m = 0; m < n; ++m) {
    const double l2 = l2_norm(prof.nodes[m]);
    const double h1 = h1_seminorm(prof.nodes[m]);
    h1sq[m] = l2 * l2 + h1 * h1;
    l2s[m] = l2;
    linf = std::max(linf, l2);
    dth[m] = l2_distance(prof.node(m + 1), prof.node(m)) / prof.dtheta;
  }
  prof.l2_h1_norm = std::sqrt(pairwise_sum(h1sq) * prof.dtheta);
  prof.linf_l2_norm = linf;
  std::vector<double> dthsq(n);
  for (int m = 0; m < n; ++m) dthsq[m] = dth[m] * dth[m];
  prof.dtheta_l2_norm = std::sqrt(pairwise_sum(dthsq) * prof.dtheta);
}

}  // namespace

PeriodicProfile solve_periodic_march(const PeriodicMarchSpec& spec) {
  if (spec.theta_steps < 32)
    throw ConfigError("periodic march: theta_steps must be >= 32");
  if (!spec.diffusivity)
    throw ConfigError("periodic march: diffusivity function required");

  const Grid& grid = spec.grid;
  const int n = spec.theta_steps;
  const double dth = 1.0 / n;
  const int max_cg = 10 * grid.nx * grid.ny;

  // Pre-assemble per-node operators data.
  std::vector<FluxField> A(n);
  std::vector<ScalarField> rhs_fixed(n);  // scale*(b_g + div C) + source
  std::vector<std::vector<double>> inv_diag(n);
  for (int m = 0; m < n; ++m) {
    const double theta = (m + 1) * dth;  // backward Euler: data at theta_{m+1}
    FluxField Am(grid);
    Am.fill_x([&](Vec2 x) { return spec.diffusivity(theta, x); });
    Am.fill_y([&](Vec2 x) { return spec.diffusivity(theta, x); });
    ScalarField fixed(grid);
    {
      const ScalarField bsrc = diffusion_boundary_source(
          Am, [&](double, Vec2 x) { return spec.g(theta, x); }, theta);
      for (std::size_t k = 0; k < fixed.data().size(); ++k)
        fixed.data()[k] += spec.scale * bsrc.data()[k];
    }
    if (spec.drift) {
      FluxField Cm(grid);
      Cm.fill_x([&](Vec2 x) { return spec.drift(theta, x).x; });
      Cm.fill_y([&](Vec2 x) { return spec.drift(theta, x).y; });
      const ScalarField divC = divergence_of_drift(Cm);
      for (std::size_t k = 0; k < fixed.data().size(); ++k)
        fixed.data()[k] += spec.scale * divC.data()[k];
    }
    if (spec.source) {
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
          fixed.at(i, j) += spec.source(theta, grid.center(i, j));
    }
    const ScalarField ddiag = diffusion_diagonal(Am);
    std::vector<double> inv(ddiag.data().size());
    for (std::size_t k = 0; k < inv.size(); ++k)
      inv[k] = 1.0 / (1.0 + spec.mu * dth + dth * spec.scale * ddiag.data()[k]);
    A[m] = std::move(Am);
    rhs_fixed[m] = std::move(fixed);
    inv_diag[m] = std::move(inv);
  }

  ScalarField state =
      spec.seed ? *spec.seed : ScalarField(grid, 0.0);
  if (!state.grid().same_shape(grid))
    throw ConfigError("periodic march: seed grid mismatch");

  PeriodicProfile prof;
  prof.dtheta = dth;
  std::vector<double> history;

  auto march_one_period = [&](const ScalarField& start,
                              std::vector<ScalarField>* nodes) {
    ScalarField z = start;
    if (nodes) {
      nodes->clear();
      nodes->push_back(z);
    }
    for (int m = 0; m < n; ++m) {
      // (1 + mu*dth) v - dth*scale*L0 v = z + dth*rhs_fixed
      std::vector<double> rhs(z.data());
      for (std::size_t k = 0; k < rhs.size(); ++k)
        rhs[k] += dth * rhs_fixed[m].data()[k];
      auto apply = [&](const std::vector<double>& v,
                       std::vector<double>& out) {
        ScalarField vf(grid);
        vf.data() = v;
        const ScalarField Lv = apply_diffusion_homogeneous(A[m], vf);
        out.resize(v.size());
        for (std::size_t k = 0; k < v.size(); ++k)
          out[k] = (1.0 + spec.mu * dth) * v[k] - dth * spec.scale * Lv.data()[k];
      };
      std::vector<double> x(z.data());
      const CgResult cg = pcg(apply, rhs, x, inv_diag[m], spec.cg_tol, max_cg);
      if (!cg.converged) {
        std::ostringstream os;
        os << "periodic march: CG stalled at theta step " << m
           << " (relative residual " << cg.rel_residual << ")";
        throw SolverError(os.str(), cg.history);
      }
      z.data() = std::move(x);
      if (nodes && m + 1 < n) nodes->push_back(z);
    }
    z.check_finite("periodic march");
    return z;
  };

  for (int period = 1; period <= spec.max_periods; ++period) {
    std::vector<ScalarField> nodes;
    const ScalarField end = march_one_period(state, &nodes);
    const double residual = l2_distance(end, state);
    history.push_back(residual);
    if (residual <= spec.tol_periodic) {
      prof.nodes = std::move(nodes);
      prof.periodic_residual = residual;
      prof.periods_used = period;
      prof.residual_history = std::move(history);
      fill_profile_norms(prof);
      return prof;
    }
    // Stall detection: no progress over the last 10 periods.
    const std::size_t h = history.size();
    if (h >= 10 && history[h - 1] > 0.95 * history[h - 10]) {
      std::ostringstream os;
      os << "periodic march: Picard iteration stalled after " << period
         << " periods (residual " << residual
         << "); the problem may be degenerate, retry with nu > 0";
      throw SolverError(os.str(), history);
    }
    state = end;
  }
  std::ostringstream os;
  os << "periodic march: no periodic fixed point within " << spec.max_periods
     << " periods (last residual " << history.back() << ")";
  throw SolverError(os.str(), history);
}

void CellProblem::validate() const {
  consts.validate();
  consts.validate_against(forcing);
  if (i_exponent != 0 && i_exponent != 1)
    throw ConfigError("cell problem: i_exponent must be 0 or 1");
  if (theta_steps < 32)
    throw ConfigError("cell problem: theta_steps must be >= 32");
  if (!(tol_periodic > 0.0))
    throw ConfigError("cell problem: tol_periodic must be positive");
}

double CellProblem::scale() const {
  return i_exponent == 0 ? 1.0 : 1.0 / consts.epsilon;
}

namespace {

PeriodicMarchSpec march_spec_from(const CellProblem& p, double mu, double nu,
                                  bool limit_coefficients) {
  PeriodicMarchSpec spec;
  spec.grid = p.grid;
  spec.theta_steps = p.theta_steps;
  spec.mu = mu;
  spec.scale = limit_coefficients ? 1.0 : p.scale();
  spec.g = p.g;
  spec.seed = p.seed;
  spec.tol_periodic = p.tol_periodic;
  spec.max_periods = p.max_periods;
  const ModelConstants k = p.consts;
  const FluxLaw law = p.law;
  const TidalForcing f = p.forcing;
  const double t = p.t_frozen, tau = p.tau_frozen;
  if (limit_coefficients) {
    spec.diffusivity = [k, law, f, t, tau](double theta, Vec2 x) {
      return assemble_coefficients(k, law, f, t, tau, theta, x).A_tilde;
    };
    spec.drift = [k, law, f, t, tau](double theta, Vec2 x) {
      return assemble_coefficients(k, law, f, t, tau, theta, x).C_tilde;
    };
  } else {
    spec.diffusivity = [k, law, f, t, tau, nu](double theta, Vec2 x) {
      return assemble_coefficients(k, law, f, t, tau, theta, x).A + nu;
    };
    spec.drift = [k, law, f, t, tau](double theta, Vec2 x) {
      return assemble_coefficients(k, law, f, t, tau, theta, x).C;
    };
  }
  return spec;
}

}  // namespace

PeriodicProfile solve_mu_nu(const CellProblem& p) {
  p.validate();
  if (!(p.consts.mu > 0.0))
    throw std::invalid_argument("solve_mu_nu: mu must be positive");
  if (!(p.consts.nu > 0.0))
    throw std::invalid_argument("solve_mu_nu: nu must be positive");
  return solve_periodic_march(
      march_spec_from(p, p.consts.mu, p.consts.nu, false));
}

namespace {

double profile_distance(const PeriodicProfile& a, const PeriodicProfile& b) {
  double sup = 0.0;
  for (int m = 0; m < a.steps(); ++m)
    sup = std::max(sup, l2_distance(a.nodes[m], b.nodes[m]));
  return sup;
}

ContinuationResult run_continuation(const CellProblem& p,
                                    const std::vector<double>& ladder,
                                    bool vary_mu) {
  if (ladder.empty())
    throw std::invalid_argument("continuation: empty ladder");
  for (double v : ladder)
    if (!(v > 0.0))
      throw std::invalid_argument("continuation: ladder values must be > 0");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i + 1]))
      throw std::invalid_argument(
          "continuation: ladder must be strictly decreasing");

  ContinuationResult out;
  out.ladder = ladder;
  CellProblem q = p;
  PeriodicProfile prev;
  bool have_prev = false;
  for (double v : ladder) {
    const double mu = vary_mu ? v : 0.0;
    const double nu = vary_mu ? p.consts.nu : v;
    if (vary_mu && !(nu > 0.0))
      throw std::invalid_argument("continue_mu_to_zero: requires nu > 0");
    PeriodicProfile prof =
        solve_periodic_march(march_spec_from(q, mu, nu, false));
    if (have_prev) {
      const double inc = profile_distance(prev, prof);
      if (!out.increments.empty() && inc > out.increments.back()) {
        std::ostringstream os;
        os << "continuation: Cauchy increments not decreasing ("
           << out.increments.back() << " -> " << inc << ")";
        throw SolverError(os.str(), out.increments);
      }
      out.increments.push_back(inc);
    }
    q.seed = prof.nodes.front();  // warm start for the next rung
    prev = std::move(prof);
    have_prev = true;
  }
  out.declared_converged =
      !out.increments.empty() &&
      out.increments.back() <= 10.0 * p.tol_periodic;
  out.profile = std::move(prev);
  return out;
}

}  // namespace

ContinuationResult continue_mu_to_zero(const CellProblem& p,
                                       const std::vector<double>& mu_ladder) {
  p.validate();
  if (!(p.consts.nu > 0.0))
    throw std::invalid_argument("continue_mu_to_zero: nu must be positive");
  return run_continuation(p, mu_ladder, true);
}

ContinuationResult continue_nu_to_zero(const CellProblem& p,
                                       const std::vector<double>& nu_ladder) {
  p.validate();
  return run_continuation(p, nu_ladder, false);
}

PeriodicProfile solve_homogenized_short(const CellProblem& p) {
  p.validate();
  return solve_periodic_march(march_spec_from(p, 0.0, 0.0, true));
}

ThresholdSet compute_threshold_set(const CellProblem& p, double g_thr_tilde,
                                   const std::vector<double>& t_samples) {
  ThresholdSet thr;
  thr.g_thr_tilde = g_thr_tilde;
  thr.t_samples = t_samples.empty() ? std::vector<double>{p.t_frozen}
                                    : t_samples;
  const int n = p.theta_steps;
  thr.theta_nodes.resize(n);
  for (int m = 0; m < n; ++m) thr.theta_nodes[m] = double(m) / n;
  thr.mask.resize(thr.t_samples.size() * n);
  const Vec2 x_any{0.5 * p.grid.lx, 0.5 * p.grid.ly};
  for (std::size_t it = 0; it < thr.t_samples.size(); ++it) {
    for (int m = 0; m < n; ++m) {
      const double A_tilde =
          assemble_coefficients(p.consts, p.law, p.forcing, thr.t_samples[it],
                                p.tau_frozen, thr.theta_nodes[m], x_any)
              .A_tilde;
      thr.mask[it * n + m] = A_tilde < g_thr_tilde ? 1 : 0;
    }
  }
  return thr;
}

PeriodicProfile solve_homogenized_long(const CellProblem& p,
                                       const ThresholdSet& thr) {
  p.validate();
  if (p.forcing.params().regime != Regime::Long)
    throw ConfigError("solve_homogenized_long: long-regime forcing required");
  const int n = p.theta_steps;
  if (static_cast<int>(thr.theta_nodes.size()) != n)
    throw ConfigError("solve_homogenized_long: threshold set node mismatch");

  const Grid& grid = p.grid;
  const int max_cg = 10 * grid.nx * grid.ny;
  std::vector<std::uint8_t> mask(thr.mask.begin(), thr.mask.begin() + n);
  bool any_active = false;
  for (auto m : mask) any_active = any_active || (m == 0);
  if (!any_active)
    throw SolverError(
        "solve_homogenized_long: every theta node is below the threshold; no "
        "anchoring value exists");

  PeriodicProfile prof;
  prof.dtheta = 1.0 / n;
  prof.nodes.assign(n, ScalarField(grid));
  prof.threshold_mask = mask;
  prof.elliptic_residuals.assign(n, 0.0);

  // Solve the stationary Robin problem at every active node.
  for (int m = 0; m < n; ++m) {
    if (mask[m]) continue;
    const double theta = thr.theta_nodes[m];
    FluxField A(grid);
    auto diff = [&](Vec2 x) {
      return assemble_coefficients(p.consts, p.law, p.forcing, p.t_frozen,
                                   p.tau_frozen, theta, x)
          .A_tilde;
    };
    A.fill_x(diff);
    A.fill_y(diff);
    FluxField C(grid);
    auto drift = [&](Vec2 x) {
      return assemble_coefficients(p.consts, p.law, p.forcing, p.t_frozen,
                                   p.tau_frozen, theta, x)
          .C_tilde;
    };
    C.fill_x([&](Vec2 x) { return drift(x).x; });
    C.fill_y([&](Vec2 x) { return drift(x).y; });

    // -L0 U = div C + b_g
    const ScalarField bsrc = diffusion_boundary_source(
        A, [&](double, Vec2 x) { return p.g(theta, x); }, theta);
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
    const ScalarField ddiag = diffusion_diagonal(A);
    std::vector<double> inv(ddiag.data().size());
    for (std::size_t k = 0; k < inv.size(); ++k)
      inv[k] = ddiag.data()[k] > 0.0 ? 1.0 / ddiag.data()[k] : 1.0;
    std::vector<double> x(grid.cells(), 0.0);
    const CgResult cg = pcg(apply, rhs, x, inv, 1e-12, max_cg);
    if (!cg.converged) {
      std::ostringstream os;
      os << "solve_homogenized_long: elliptic solve failed at theta node " << m
         << " (relative residual " << cg.rel_residual << ")";
      throw SolverError(os.str(), cg.history);
    }
    prof.nodes[m].data() = std::move(x);
    prof.elliptic_residuals[m] = cg.rel_residual;
  }

  // Hold U constant across threshold nodes, anchored at the most recent
  // active node with periodic wrap-around.
  int last_active = -1;
  for (int m = n - 1; m >= 0; --m)
    if (!mask[m]) {
      last_active = m;
      break;
    }
  for (int m = 0; m < n; ++m) {
    if (!mask[m]) {
      last_active = m;
    } else {
      prof.nodes[m] = prof.nodes[last_active];
    }
  }
  // Leading masked nodes anchor to the last active node of the period.
  fill_profile_norms(prof);
  prof.periodic_residual = 0.0;
  prof.periods_used = 1;
  return prof;
}

NormCertificates norm_certificates(
    const PeriodicProfile& profile, const BoundaryFunc& g,
    const CellProblem* p, double dt_probe,
    std::function<PeriodicProfile(const CellProblem&)> resolver) {
  NormCertificates out;
  out.l2_h1 = profile.l2_h1_norm;
  out.linf_l2 = profile.linf_l2_norm;
  out.dtheta_l2 = profile.dtheta_l2_norm;

  const int n = profile.steps();
  std::vector<double> lap_sq(n), masses(n);
  double linf_h1 = 0.0;
  for (int m = 0; m < n; ++m) {
    const ScalarField& S = profile.nodes[m];
    const double theta = double(m) / n;
    FluxField unit(S.grid(), 1.0);
    const ScalarField lap = divergence_of_diffusive_flux(
        unit, S, [&](double, Vec2 x) { return g(theta, x); }, theta);
    const double ln = l2_norm(lap);
    lap_sq[m] = ln * ln;
    masses[m] = std::abs(mass(S));
    const double l2 = l2_norm(S), h1 = h1_seminorm(S);
    linf_h1 = std::max(linf_h1, std::sqrt(l2 * l2 + h1 * h1));
  }
  out.laplacian_l2 = std::sqrt(pairwise_sum(lap_sq) * profile.dtheta);
  out.sup_abs_mass = *std::max_element(masses.begin(), masses.end());
  out.linf_h1 = linf_h1;

  if (p && resolver) {
    CellProblem shifted = *p;
    shifted.t_frozen += dt_probe;
    const PeriodicProfile other = resolver(shifted);
    std::vector<double> dsq(n);
    for (int m = 0; m < n; ++m) {
      const double dl2 =
          l2_distance(other.nodes[m], profile.nodes[m]) / dt_probe;
      // H1 distance: L2 of the difference plus the seminorm of the difference
      ScalarField diff = other.nodes[m];
      for (std::size_t k = 0; k < diff.data().size(); ++k)
        diff.data()[k] -= profile.nodes[m].data()[k];
      const double dh1 = h1_seminorm(diff) / dt_probe;
      dsq[m] = dl2 * dl2 + dh1 * dh1;
    }
    out.dt_l2_h1 = std::sqrt(pairwise_sum(dsq) * profile.dtheta);
    out.has_dt_norm = true;
  }
  return out;
}

}  // namespace dunes
