#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dunes/coefficients.hpp"
#include "dunes/grid.hpp"
#include "dunes/operators.hpp"

namespace dunes {

/// One theta-periodic profile: fields at theta_m = m/steps, m = 0..steps-1,
/// plus convergence and norm diagnostics.
struct PeriodicProfile {
  std::vector<ScalarField> nodes;
  double dtheta = 0.0;
  double periodic_residual = 0.0;  // ||S(1) - S(0)||_2 of the last period
  int periods_used = 0;
  std::vector<double> residual_history;
  std::vector<std::uint8_t> threshold_mask;   // long-term solves only
  std::vector<double> elliptic_residuals;     // long-term solves only

  const ScalarField& node(int m) const {
    const int n = static_cast<int>(nodes.size());
    return nodes[((m % n) + n) % n];
  }
  int steps() const { return static_cast<int>(nodes.size()); }
  /// Linear interpolation in theta (periodic wrap).
  ScalarField interpolate(double theta) const;

  // norm diagnostics, filled by the solvers
  double l2_h1_norm = 0.0;      // L2_# in theta of the H1 norm
  double linf_l2_norm = 0.0;    // sup_theta of the L2 norm
  double dtheta_l2_norm = 0.0;  // L2_# of ||dS/dtheta||_2
};

/// Generic backward-Euler march of
///   mu S + dS/dtheta - scale * div((A)grad S) = scale * (div C + b_g) + source
/// iterated over periods (Picard) until the period map is a fixed point.
struct PeriodicMarchSpec {
  Grid grid;
  int theta_steps = 128;
  double mu = 0.0;
  double scale = 1.0;  // 1/eps^i
  std::function<double(double theta, Vec2 x)> diffusivity;  // incl. nu
  std::function<Vec2(double theta, Vec2 x)> drift;          // may be null
  std::function<double(double theta, Vec2 x)> source;       // may be null
  BoundaryFunc g = zero_boundary();
  std::optional<ScalarField> seed;
  double tol_periodic = 1e-9;
  int max_periods = 500;
  double cg_tol = 1e-12;
};

PeriodicProfile solve_periodic_march(const PeriodicMarchSpec& spec);

/// A frozen-(t, tau) cell problem built from the model data.
struct CellProblem {
  ModelConstants consts;  // nu, mu used by the regularized solves
  FluxLaw law;
  TidalForcing forcing;
  Grid grid;
  double t_frozen = 0.0;
  double tau_frozen = 0.0;
  int i_exponent = 0;  // 0: short/mean, 1: long
  int theta_steps = 128;
  BoundaryFunc g = zero_boundary();
  std::optional<ScalarField> seed;  // Picard seed (z0); zero when absent
  double tol_periodic = 1e-9;
  int max_periods = 500;

  void validate() const;
  double scale() const;  // 1/eps^i
};

/// Regularized problem with mu > 0, nu > 0 (both from consts).
PeriodicProfile solve_mu_nu(const CellProblem& p);

struct ContinuationResult {
  PeriodicProfile profile;            // at the last ladder entry
  std::vector<double> ladder;         // the mu or nu values
  std::vector<double> increments;     // ||S_k - S_{k+1}||_{Linf(L2)}
  bool declared_converged = false;    // last increment <= 10 * tol_periodic
};

/// mu -> 0 at fixed nu > 0, warm-starting each solve from the previous.
/// Throws SolverError if the increments fail to decrease.
ContinuationResult continue_mu_to_zero(const CellProblem& p,
                                       const std::vector<double>& mu_ladder);

/// nu -> 0 with mu = 0.
ContinuationResult continue_nu_to_zero(const CellProblem& p,
                                       const std::vector<double>& nu_ladder);

/// Limit problem of the short/mean regimes: theta-march with the limit
/// coefficients, mu = nu = 0, no eps factor.
PeriodicProfile solve_homogenized_short(const CellProblem& p);

/// Fast times where the long-term limit diffusivity falls below the
/// threshold. The mask is over (t, theta) samples; the long-term limit
/// coefficient depends only on theta.
struct ThresholdSet {
  std::vector<double> t_samples;
  std::vector<double> theta_nodes;
  std::vector<std::uint8_t> mask;  // t-major: mask[it*theta + m]
  double g_thr_tilde = 0.0;
  bool masked(std::size_t it, std::size_t m) const {
    return mask[it * theta_nodes.size() + m] != 0;
  }
};

ThresholdSet compute_threshold_set(const CellProblem& p, double g_thr_tilde,
                                   const std::vector<double>& t_samples);

/// Long-term limit: an elliptic Robin solve per active theta node; on
/// threshold nodes the profile is held constant at the most recent active
/// value (periodic wrap). Throws if every node is masked.
PeriodicProfile solve_homogenized_long(const CellProblem& p,
                                       const ThresholdSet& thr);

struct NormCertificates {
  double l2_h1 = 0.0;        // ||S||_{L2_#(H1)}
  double linf_l2 = 0.0;      // ||S||_{Linf_#(L2)}
  double linf_h1 = 0.0;      // ||S||_{Linf_#(H1)}
  double dtheta_l2 = 0.0;    // ||dS/dtheta||_{L2_#(L2)}
  double laplacian_l2 = 0.0; // ||Lap S||_{L2_#(L2)} (discrete, A == 1)
  double sup_abs_mass = 0.0; // sup_theta |int S dx|
  double dt_l2_h1 = 0.0;     // ||dS/dt||_{L2_#(H1)} via parameter perturbation
  bool has_dt_norm = false;
};

/// Discrete versions of the estimate-suite norms. If `p` is given, the
/// t-derivative norm is estimated by re-solving at t_frozen + dt_probe.
NormCertificates norm_certificates(
    const PeriodicProfile& profile, const BoundaryFunc& g,
    const CellProblem* p = nullptr, double dt_probe = 1e-3,
    std::function<PeriodicProfile(const CellProblem&)> resolver = {});

}  // namespace dunes
