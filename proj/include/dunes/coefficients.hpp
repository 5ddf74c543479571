#pragma once

#include <string>
#include <vector>

#include "dunes/common.hpp"
#include "dunes/flux_law.hpp"
#include "dunes/tidal_forcing.hpp"

namespace dunes {

/// Model constants of the transport equation and its regularizations.
struct ModelConstants {
  double a = 1.0;    // diffusivity scale, > 0
  double b = 0.5;    // height feedback
  double c = 0.5;    // drift scale
  double epsilon = 0.125;  // scale separation, in (0,1)
  double nu = 0.0;   // diffusion regularizer, >= 0
  double mu = 0.0;   // zeroth-order regularizer, >= 0

  void validate() const;
  /// Checks eps * |b| * sup|M| < 1 against the given forcing.
  void validate_against(const TidalForcing& f) const;
};

/// One evaluation of the transport coefficients and their two-scale limits.
struct CoefficientSample {
  double A = 0.0;       // scalar diffusivity
  Vec2 C{0.0, 0.0};     // drift flux
  double A_tilde = 0.0; // limit diffusivity
  Vec2 C_tilde{0.0, 0.0};
};

/// Height-coupling factor: epsilon for short/long, sqrt(epsilon) for mean.
double eps_height_factor(Regime regime, double epsilon);

/// Assembles A, C and the limits at one point. The limits use the full field
/// in the short/mean regimes and the x-independent leading component in the
/// long regime. C is exactly zero where the velocity vanishes.
CoefficientSample assemble_coefficients(const ModelConstants& k,
                                        const FluxLaw& law,
                                        const TidalForcing& f, double t,
                                        double tau, double theta, Vec2 x);

struct HypothesisViolation {
  std::string hypothesis;  // short tag, e.g. "freeze.dU/dtheta"
  std::string location;    // sample coordinates
  double margin = 0.0;     // amount by which the inequality failed
};

struct ValidationReport {
  std::vector<HypothesisViolation> violations;  // capped exemplars
  long total_violations = 0;
  double empirical_g_thr_tilde = 0.0;  // inf of A_eps over the active window
  long samples_checked = 0;
  bool pass() const { return total_violations == 0; }
  std::string summary() const;
};

/// Samples the flux-law and forcing hypotheses on a tensor grid and reports
/// every violated inequality. Violations are report entries, not errors.
/// Requires sample_density >= 16.
ValidationReport validate_hypotheses(const FluxLaw& law, const TidalForcing& f,
                                     const ModelConstants& k,
                                     int sample_density);

}  // namespace dunes
