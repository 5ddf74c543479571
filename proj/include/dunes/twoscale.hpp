#pragma once

#include <string>
#include <vector>

#include "dunes/cell_solver.hpp"
#include "dunes/eps_solver.hpp"

namespace dunes {

/// Separable test function psi(t, theta, x) = phi_t(t) phi_theta(theta)
/// phi_x(x), with phi_theta 1-periodic. Drawn from a small closed family.
struct TestFunction {
  enum class TimeKind { One, Linear, Bump };       // 1, t, sin^2(pi t/T)
  enum class ThetaKind { One, Sin, Cos };          // 1, sin 2*pi*k, cos 2*pi*k
  enum class SpaceKind { One, X, Y, SinSin };      // 1, x, y, sin(pi x)sin(pi y)

  TimeKind time = TimeKind::One;
  ThetaKind theta = ThetaKind::One;
  int theta_k = 1;
  SpaceKind space = SpaceKind::One;

  double eval_time(double t, double T) const;
  double eval_theta(double th) const;
  double eval_space(Vec2 x, const Grid& g) const;
  std::string id() const;
};

/// The default psi battery: {1, sin 2pi th, cos 2pi th, sin 4pi th} x
/// {1, x, y, sin(pi x) sin(pi y)} x {1, t}.
std::vector<TestFunction> default_battery();

/// Two-scale pairing of a trajectory: trapezoid in t, midpoint in x, with
/// phi_theta evaluated at t/epsilon mod 1. Requires dt <= epsilon/16.
double pair_sequence(const SolveRun& run, const TestFunction& psi,
                     double epsilon);

/// Limit pairing of a (t-independent) theta-profile against psi over
/// [0,T] x [0,1] x Omega.
double pair_limit(const PeriodicProfile& profile, const TestFunction& psi,
                  double T);

struct PairingRow {
  std::string psi_id;
  double epsilon = 0.0;
  double pairing = 0.0;
  double limit_pairing = 0.0;
  double abs_error = 0.0;
};

struct TwoScaleReport {
  std::vector<PairingRow> rows;      // ladder-major per psi
  std::vector<double> eps_ladder;
  bool monotone_decrease = false;    // last 3 entries, every psi
  std::vector<std::string> failing_psi;
};

/// Inputs shared by the convergence and corrector studies: the model data,
/// grid, boundary data and horizon of the eps-problems.
struct StudySetup {
  ModelConstants consts;
  FluxLaw law;
  TidalForcing forcing;
  Grid grid;
  ScalarField z0;
  BoundaryFunc g = zero_boundary();
  double T_final = 1.0;
  int theta_steps = 128;
  double tol_periodic = 1e-9;
};

/// Solves the matching homogenized profile, then runs the eps-solver per
/// ladder entry and pairs both sides against the battery.
TwoScaleReport convergence_study(const StudySetup& setup,
                                 const std::vector<TestFunction>& battery,
                                 const std::vector<double>& eps_ladder);

struct CorrectorRow {
  double epsilon = 0.0;
  double sup_corrector_l2 = 0.0;  // sup_t ||(z - U^eps)/eps||_2
  double ladder_ratio = 0.0;      // vs previous entry
};

struct CorrectorReport {
  std::vector<CorrectorRow> rows;
  bool bounded = false;  // every ratio <= 1.25
  // empirical first-order profile: pairings of W_eps against the battery
  std::vector<PairingRow> corrector_pairings;
};

/// First-order corrector study (short regime). Solves the homogenized
/// profile, prepares the initial data z0 := U(theta=0), and measures
/// W_eps = (z^eps - U(t/eps))/eps per ladder entry.
CorrectorReport corrector_study(const StudySetup& setup,
                                const std::vector<TestFunction>& battery,
                                const std::vector<double>& eps_ladder);

/// Builds a trajectory from an explicit space-time formula sampled on the
/// grid (synthetic fixtures).
SolveRun make_synthetic_run(const Grid& grid, double T, double dt,
                            const std::function<double(double t, Vec2 x)>& f);

/// W(t) = (z(t) - U(t/eps))/eps with U theta-interpolated linearly.
SolveRun corrector_deviation(const SolveRun& run, const PeriodicProfile& U,
                             double epsilon);

double sup_l2(const SolveRun& run);

/// Homogenized profile used by both studies (short-regime limit problem).
PeriodicProfile study_homogenized_profile(const StudySetup& setup);

}  // namespace dunes
