#include "dunes/tidal_forcing.hpp"

#include <algorithm>
#include <cmath>

namespace dunes {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TidalForcing::TidalForcing(const Params& p) : p_(p) {
  if (!(p.u_thr > 0.0)) throw ConfigError("forcing: u_thr must be positive");
  if (p.u_peak < 0.0) throw ConfigError("forcing: u_peak must be nonnegative");
  if (p.tau_peak < 0.0) throw ConfigError("forcing: tau_peak must be nonnegative");
  if (p.m_peak < 0.0) throw ConfigError("forcing: m_peak must be nonnegative");
  if (!(p.theta_alpha >= 0.0 && p.theta_omega <= 1.0 &&
        p.theta_alpha < p.theta_omega))
    throw ConfigError(
        "forcing: need 0 <= theta_alpha < theta_omega <= 1");
  if (!(std::abs(norm(p.direction) - 1.0) < 1e-9))
    throw ConfigError("forcing: direction must be a unit vector");
  if (!(std::abs(p.modulation_amplitude) < 1.0))
    throw ConfigError("forcing: |modulation_amplitude| must be < 1");
  if (!(p.lx > 0.0 && p.ly > 0.0))
    throw ConfigError("forcing: domain extents must be positive");
  if (p.regime != Regime::Mean && p.tau_peak != 0.0)
    throw ConfigError("forcing: tau_peak is only meaningful in the mean regime");

  mean_speed_ = dot(p.mean_flow, p.direction);
  const double sup_raw = mean_speed_ + p.u_peak + p.tau_peak;
  active_ = sup_raw > p.u_thr;
}

double TidalForcing::raw_signal(double tau, double theta) const {
  double v = mean_speed_ + p_.u_peak * std::sin(kTwoPi * wrap_unit(theta));
  if (p_.regime == Regime::Mean)
    v += p_.tau_peak * std::sin(kTwoPi * wrap_unit(tau));
  if (p_.mutation == Mutation::Aperiodic) v += 0.5 * theta;
  return v;
}

double TidalForcing::clamped_signal(double tau, double theta) const {
  if (!active_) return mean_speed_;  // globally frozen tide
  return std::max(raw_signal(tau, theta), p_.u_thr);
}

double TidalForcing::modulation(Vec2 x) const {
  if (p_.modulation_amplitude == 0.0) return 1.0;
  const double pi = 3.1415926535897932384626433832795;
  return 1.0 + p_.modulation_amplitude * std::sin(pi * x.x / p_.lx) *
                   std::sin(pi * x.y / p_.ly);
}

void TidalForcing::check_domain(Vec2 x) const {
  const double slack = 1e-3 * std::max(p_.lx, p_.ly);
  if (x.x < -slack || x.x > p_.lx + slack || x.y < -slack ||
      x.y > p_.ly + slack)
    throw std::domain_error("forcing: point outside the domain");
}

ForcingSample TidalForcing::eval(double t, double tau, double theta,
                                 Vec2 x) const {
  check_domain(x);
  if (p_.mutation == Mutation::Unfrozen) {
    // Raw sinusoid without the threshold clamp; violates the freeze
    // hypothesis wherever the tide dips below u_thr.
    const double v = raw_signal(tau, theta);
    return {v * modulation(x) * p_.direction,
            p_.m_peak * std::cos(kTwoPi * theta)};
  }

  if (p_.regime == Regime::Long) {
    const double e = p_.epsilon;
    const Vec2 u = u0_component(theta) + e * u1_component(theta, x) +
                   (e * e) * u2_component(t, theta, x);
    const double m =
        m1_component(theta, x) + (e * e) * m2_component(t, theta, x);
    return {u, m};
  }

  const double th = (p_.regime == Regime::Short) ? 0.0 : tau;
  const double w = clamped_signal(th, theta);
  if (!active_) return {w * p_.direction, 0.0};

  const double speed = p_.u_thr + (w - p_.u_thr) * modulation(x);
  const double amp = p_.u_peak + p_.tau_peak;
  const double m = (amp > 0.0) ? p_.m_peak * (w - mean_speed_) / amp : 0.0;
  return {speed * p_.direction, m};
}

Vec2 TidalForcing::u0_component(double theta) const {
  return clamped_signal(0.0, theta) * p_.direction;
}

Vec2 TidalForcing::u1_component(double theta, Vec2 x) const {
  if (!active_) return {0.0, 0.0};
  const double w = clamped_signal(0.0, theta);
  return (w - p_.u_thr) * (modulation(x) - 1.0) * p_.direction;
}

Vec2 TidalForcing::u2_component(double, double, Vec2) const {
  return {0.0, 0.0};
}

double TidalForcing::m1_component(double theta, Vec2) const {
  if (!active_ || p_.u_peak <= 0.0) return 0.0;
  const double w = clamped_signal(0.0, theta);
  return p_.m_peak * (w - mean_speed_) / p_.u_peak;
}

double TidalForcing::m2_component(double, double, Vec2) const { return 0.0; }

double TidalForcing::sup_height() const {
  if (!active_) return 0.0;
  const double amp = p_.u_peak + p_.tau_peak;
  if (amp <= 0.0) return 0.0;
  const double lo = std::abs(p_.u_thr - mean_speed_);
  const double hi = std::abs(amp);
  return p_.m_peak * std::max(lo, hi) / ((p_.regime == Regime::Long) ? p_.u_peak : amp);
}

double TidalForcing::sup_speed() const {
  if (!active_) return std::abs(mean_speed_);
  const double w_max = mean_speed_ + p_.u_peak + p_.tau_peak;
  const double phi_max = 1.0 + std::abs(p_.modulation_amplitude);
  return p_.u_thr + (w_max - p_.u_thr) * phi_max;
}

}  // namespace dunes
