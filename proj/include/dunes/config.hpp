#pragma once

#include <map>
#include <string>
#include <vector>

#include "dunes/cell_solver.hpp"
#include "dunes/eps_solver.hpp"
#include "dunes/twoscale.hpp"

namespace dunes {

/// Flat INI-style run configuration. Unknown sections or keys are rejected
/// at load time; all module invariants are re-validated by the builders.
struct RunConfig {
  // [model]
  double a = 1.0, b = 0.5, c = 0.5;
  double epsilon = 0.125;
  double nu = 0.0, mu = 0.0;

  // [grid]
  int nx = 32, ny = 32;
  double lx = 1.0, ly = 1.0;
  BoundaryKind boundary = BoundaryKind::Robin;

  // [flux]
  double d = 8.0, u_thr = 1.0, g_thr = 2.0, ramp_width = 0.8;

  // [forcing]
  Regime regime = Regime::Short;
  double u_peak = 1.0, tau_peak = 0.0, m_peak = 0.5;
  Vec2 mean_flow{0.5, 0.0};
  Vec2 direction{1.0, 0.0};
  double theta_alpha = 0.1, theta_omega = 0.4;
  double modulation = 0.0;
  TidalForcing::Mutation mutation = TidalForcing::Mutation::None;

  // [problem]
  double T_final = 1.0;
  double dt = 0.0;  // 0 = auto
  std::string z0_spec = "gaussian:0.5,0.5,0.15,1.0";
  std::string g_spec = "zero";
  int theta_steps = 128;
  double tol_periodic = 1e-9;
  double t_frozen = 0.0, tau_frozen = 0.0;
  int cell_i = -1;           // -1 = auto (short/mean -> 0, long -> 1)
  double g_thr_tilde = -1.0; // < 0 = auto (a * g_thr)
  std::vector<double> eps_ladder{0.125, 0.0625, 0.03125, 0.015625};
  std::vector<double> mu_ladder{0.1, 0.01, 0.001, 0.0001};
  std::vector<double> nu_ladder{0.1, 0.01, 0.001};

  // [output]
  std::string out_dir = "out";
  unsigned long seed = 1234;

  // builders (each revalidates the relevant invariants)
  FluxLaw make_flux_law() const;
  TidalForcing make_forcing() const;
  ModelConstants make_constants() const;
  Grid make_grid() const;
  ScalarField make_z0() const;
  BoundaryFunc make_g() const;
  EpsProblem make_eps_problem() const;
  CellProblem make_cell_problem() const;
  StudySetup make_study_setup() const;
  int eps_i_exponent() const { return regime == Regime::Long ? 2 : 1; }
  int cell_i_exponent() const {
    if (cell_i >= 0) return cell_i;
    return regime == Regime::Long ? 1 : 0;
  }
  double effective_g_thr_tilde() const {
    return g_thr_tilde >= 0.0 ? g_thr_tilde : a * g_thr;
  }
};

/// Parses a config file. Throws ConfigError with line/key diagnostics.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

/// Canonical text form; parse(serialize(cfg)) == cfg field-wise.
std::string serialize_config(const RunConfig& cfg);

}  // namespace dunes
