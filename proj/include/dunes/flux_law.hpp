#pragma once

#include "dunes/common.hpp"

namespace dunes {

/// Sand flux laws g_a (erosion) and g_c (deposition drift).
///
/// g_a is a smooth ramp of height d: zero below a foot velocity, rising over
/// a window of width 2*ramp_width, calibrated so that g_a(u_thr) == g_thr
/// exactly. g_c damps g_a by u^2/(u^2 + u_thr^2), which vanishes to second
/// order at u = 0. Both are monotone nondecreasing and bounded by d.
class FluxLaw {
 public:
  FluxLaw(double d, double u_thr, double g_thr, double ramp_width);

  /// Erosion flux magnitude. Throws std::domain_error on negative speed.
  double eval_ga(double u) const;
  /// Drift flux magnitude, g_c <= g_a, g_c(0) = g_c'(0) = 0.
  double eval_gc(double u) const;

  double d() const { return d_; }
  double u_thr() const { return u_thr_; }
  double g_thr() const { return g_thr_; }
  double ramp_width() const { return ramp_width_; }
  /// Center of the ramp (the solved calibration point u0).
  double ramp_center() const { return u0_; }
  /// g_a is identically zero at or below this speed (degenerate window).
  double degenerate_below() const { return u0_ - ramp_width_; }

  /// Cubic smoothstep over [-1, 1]: 0 for s <= -1, 1 for s >= 1.
  static double smoothstep(double s);

 private:
  double d_;
  double u_thr_;
  double g_thr_;
  double ramp_width_;
  double u0_;
};

}  // namespace dunes
