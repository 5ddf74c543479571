#include "dunes/flux_law.hpp"

#include <cmath>

namespace dunes {

double FluxLaw::smoothstep(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double tau = 0.5 * (s + 1.0);
  return tau * tau * (3.0 - 2.0 * tau);
}

namespace {

// Inverse of the [-1,1] smoothstep on (0,1]; bisection to full precision.
double smoothstep_inverse(double q) {
  if (q >= 1.0) return 1.0;
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (FluxLaw::smoothstep(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-17) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FluxLaw::FluxLaw(double d, double u_thr, double g_thr, double ramp_width)
    : d_(d), u_thr_(u_thr), g_thr_(g_thr), ramp_width_(ramp_width) {
  if (!(d > 0.0)) throw ConfigError("flux law: d must be positive");
  if (!(u_thr > 0.0)) throw ConfigError("flux law: u_thr must be positive");
  if (!(g_thr > 0.0)) throw ConfigError("flux law: g_thr must be positive");
  if (!(g_thr <= d)) throw ConfigError("flux law: g_thr must satisfy g_thr <= d");
  if (!(ramp_width > 0.0))
    throw ConfigError("flux law: ramp_width must be positive");
  // Place the ramp so that g_a(u_thr) = g_thr exactly.
  const double s = smoothstep_inverse(g_thr / d);
  u0_ = u_thr - ramp_width * s;
}

double FluxLaw::eval_ga(double u) const {
  if (u < 0.0) throw std::domain_error("eval_ga: negative speed");
  return d_ * smoothstep((u - u0_) / ramp_width_);
}

double FluxLaw::eval_gc(double u) const {
  if (u < 0.0) throw std::domain_error("eval_gc: negative speed");
  const double ga = d_ * smoothstep((u - u0_) / ramp_width_);
  return ga * (u * u) / (u * u + u_thr_ * u_thr_);
}

}  // namespace dunes
