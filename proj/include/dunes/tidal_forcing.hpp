#pragma once

#include "dunes/common.hpp"

namespace dunes {

enum class Regime { Short, Mean, Long };

struct ForcingSample {
  Vec2 velocity;   // water velocity U
  double height;   // tidal height variation M
};

/// Tidal velocity/height fields, 1-periodic in the fast time(s) and frozen
/// below the motion threshold.
///
/// The raw tide is a sinusoid along a fixed direction,
///   v(tau, theta) = mean_speed + u_peak*sin(2 pi theta) + tau_peak*sin(2 pi tau),
/// clamped from below at u_thr. On the clamped plateau the velocity equals
/// u_thr * direction for every (t, tau, x), so all partial derivatives vanish
/// identically wherever |U| <= u_thr. Spatial modulation multiplies only the
/// excess above the threshold,
///   U = direction * (u_thr + (w - u_thr) * phi(x)),
/// which keeps |U| >= u_thr off the plateau and keeps the plateau constant.
/// The height is tied to the same clamped signal,
///   M = m_peak * (w - mean_speed) / u_peak,
/// so it freezes exactly where the velocity does. A tide whose raw signal
/// never exceeds u_thr is frozen globally at the mean speed (all fields
/// constant); such a tide has no active window.
///
/// In the long regime the field decomposes as
///   U = U0(theta) + eps*U1(theta, x) + eps^2*U2(t, theta, x),
///   M = M1(theta, x) + eps^2*M2(t, theta, x),
/// with U0 the x-independent clamped tide, U1 the modulation excess and
/// U2 = M2 = 0 by default.
class TidalForcing {
 public:
  /// Validator mutations. The compliant construction is `None`; the others
  /// deliberately break one hypothesis so the validator can be exercised
  /// end to end from a config file.
  enum class Mutation {
    None,
    Unfrozen,    // raw sinusoid, no threshold clamp
    Aperiodic,   // adds a linear drift in theta
  };

  struct Params {
    Regime regime = Regime::Short;
    double u_thr = 1.0;      // motion threshold shared with the flux law
    double u_peak = 1.0;
    double tau_peak = 0.0;   // amplitude of the second fast time (mean regime)
    double m_peak = 0.5;
    Vec2 mean_flow{0.5, 0.0};
    Vec2 direction{1.0, 0.0};
    double theta_alpha = 0.10;
    double theta_omega = 0.40;
    double modulation_amplitude = 0.0;  // phi = 1 + amp sin(pi x/lx) sin(pi y/ly)
    double lx = 1.0;
    double ly = 1.0;
    double epsilon = 0.125;  // used by the long-regime composition
    Mutation mutation = Mutation::None;
  };

  explicit TidalForcing(const Params& p);

  /// Regime-dependent evaluation. Short ignores tau; long composes the
  /// eps-decomposition. Throws std::domain_error if x is outside the domain.
  ForcingSample eval(double t, double tau, double theta, Vec2 x) const;

  /// Long-regime components U0, U1, U2, M1, M2.
  Vec2 u0_component(double theta) const;
  Vec2 u1_component(double theta, Vec2 x) const;
  Vec2 u2_component(double t, double theta, Vec2 x) const;
  double m1_component(double theta, Vec2 x) const;
  double m2_component(double t, double theta, Vec2 x) const;

  const Params& params() const { return p_; }
  double mean_speed() const { return mean_speed_; }
  /// True when the raw tide exceeds the threshold somewhere (an active
  /// window exists); false for a globally frozen tide.
  bool active() const { return active_; }
  /// Upper bound of |M| over the period, used for the eps*|b|*sup|M| check.
  double sup_height() const;
  /// Upper bound of |U| over the period and domain.
  double sup_speed() const;

  double u_thr() const { return p_.u_thr; }
  /// Spatial modulation factor phi(x) (1 when modulation_amplitude == 0).
  double modulation(Vec2 x) const;

 private:
  double raw_signal(double tau, double theta) const;
  double clamped_signal(double tau, double theta) const;
  void check_domain(Vec2 x) const;

  Params p_;
  double mean_speed_ = 0.0;
  bool active_ = true;
};

}  // namespace dunes
