#include "dunes/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dunes {

void ModelConstants::validate() const {
  if (!(a > 0.0)) throw ConfigError("constants: a must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ConfigError("constants: epsilon must lie in (0,1)");
  if (nu < 0.0 || mu < 0.0)
    throw ConfigError("constants: nu and mu must be nonnegative");
}

void ModelConstants::validate_against(const TidalForcing& f) const {
  validate();
  const double factor = eps_height_factor(f.params().regime, epsilon);
  if (!(factor * std::abs(b) * f.sup_height() < 1.0))
    throw ConfigError(
        "constants: epsilon*|b|*sup|M| must be < 1 (diffusivity would lose "
        "positivity)");
}

double eps_height_factor(Regime regime, double epsilon) {
  return regime == Regime::Mean ? std::sqrt(epsilon) : epsilon;
}

CoefficientSample assemble_coefficients(const ModelConstants& k,
                                        const FluxLaw& law,
                                        const TidalForcing& f, double t,
                                        double tau, double theta, Vec2 x) {
  const ForcingSample s = f.eval(t, tau, theta, x);
  const double speed = norm(s.velocity);
  const double factor =
      1.0 - k.b * eps_height_factor(f.params().regime, k.epsilon) * s.height;

  CoefficientSample out;
  const double ga = law.eval_ga(speed);
  const double gc = law.eval_gc(speed);
  out.A = k.a * factor * ga;
  if (speed > 0.0) {
    out.C = (k.c * factor * gc / speed) * s.velocity;
  }

  if (f.params().regime == Regime::Long) {
    const Vec2 u0 = f.u0_component(theta);
    const double s0 = norm(u0);
    out.A_tilde = k.a * law.eval_ga(s0);
    if (s0 > 0.0) out.C_tilde = (k.c * law.eval_gc(s0) / s0) * u0;
  } else {
    out.A_tilde = k.a * ga;
    if (speed > 0.0) out.C_tilde = (k.c * gc / speed) * s.velocity;
  }
  return out;
}

namespace {

struct ViolationSink {
  ValidationReport* report;
  static constexpr std::size_t kMaxStored = 200;

  void add(const std::string& tag, const std::string& loc, double margin) {
    ++report->total_violations;
    if (report->violations.size() < kMaxStored)
      report->violations.push_back({tag, loc, margin});
  }
};

std::string loc4(double t, double tau, double theta, Vec2 x) {
  std::ostringstream os;
  os << "(t=" << t << ", tau=" << tau << ", theta=" << theta << ", x=(" << x.x
     << "," << x.y << "))";
  return os.str();
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "hypothesis validation: " << total_violations << " violation(s) over "
     << samples_checked << " samples; empirical G_thr_tilde = "
     << empirical_g_thr_tilde << "\n";
  for (const auto& v : violations)
    os << "  [" << v.hypothesis << "] at " << v.location
       << " margin=" << v.margin << "\n";
  if (total_violations > static_cast<long>(violations.size()))
    os << "  ... and " << (total_violations - violations.size())
       << " more\n";
  return os.str();
}

ValidationReport validate_hypotheses(const FluxLaw& law, const TidalForcing& f,
                                     const ModelConstants& k,
                                     int sample_density) {
  if (sample_density < 16)
    throw std::invalid_argument("validate_hypotheses: sample_density >= 16");

  ValidationReport report;
  ViolationSink sink{&report};
  const double d = law.d();

  // --- flux-law hypotheses on a fine speed grid -------------------------
  {
    const int n = 10000;
    const double u_max = 10.0 * law.u_thr();
    const double du = u_max / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double u = i * du;
      const double ga = law.eval_ga(u);
      const double gc = law.eval_gc(u);
      if (gc < -1e-15 || ga < -1e-15)
        sink.add("flux.nonnegative", "u=" + std::to_string(u),
                 std::min(ga, gc));
      if (gc > ga + 1e-12 * d)
        sink.add("flux.gc<=ga", "u=" + std::to_string(u), gc - ga);
      if (ga > d * (1.0 + 1e-12))
        sink.add("flux.ga<=d", "u=" + std::to_string(u), ga - d);
      if (u >= law.u_thr() && ga < law.g_thr() * (1.0 - 1e-12))
        sink.add("flux.ga>=G_thr_above_U_thr", "u=" + std::to_string(u),
                 law.g_thr() - ga);
      if (i > 0 && i < n - 1) {
        const double fd_ga =
            (law.eval_ga(u + du) - law.eval_ga(u - du)) / (2.0 * du);
        const double fd_gc =
            (law.eval_gc(u + du) - law.eval_gc(u - du)) / (2.0 * du);
        if (std::abs(fd_ga) > d * (1.0 + 1e-6))
          sink.add("flux.|ga'|<=d", "u=" + std::to_string(u),
                   std::abs(fd_ga) - d);
        if (std::abs(fd_gc) > d * (1.0 + 1e-6))
          sink.add("flux.|gc'|<=d", "u=" + std::to_string(u),
                   std::abs(fd_gc) - d);
      }
    }
    if (law.eval_gc(0.0) != 0.0)
      sink.add("flux.gc(0)=0", "u=0", law.eval_gc(0.0));
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (double h : {1e-4, 1e-5, 1e-6}) {
      const double ratio = std::abs(law.eval_gc(h) / h);
      if (ratio > prev_ratio + 1e-15)
        sink.add("flux.gc'(0)=0", "h=" + std::to_string(h),
                 ratio - prev_ratio);
      prev_ratio = ratio;
    }
  }

  // --- forcing hypotheses on a tensor grid ------------------------------
  const Regime regime = f.params().regime;
  const int n_theta = sample_density;
  const int n_x = std::min(sample_density, 64);
  const int n_t = std::min(sample_density, 4);
  const int n_tau = regime == Regime::Mean ? std::min(sample_density, 8) : 1;
  const double lx = f.params().lx, ly = f.params().ly;
  const double h_fd = 1e-7;
  const double freeze_tol = 1e-10;

  const double eps_factor = eps_height_factor(regime, k.epsilon);
  double inf_window_A = std::numeric_limits<double>::infinity();

  auto vel = [&](double t, double tau, double theta, Vec2 x) {
    return f.eval(t, tau, theta, x).velocity;
  };
  auto hgt = [&](double t, double tau, double theta, Vec2 x) {
    return f.eval(t, tau, theta, x).height;
  };

  for (int it = 0; it < n_t; ++it) {
    const double t = (n_t == 1) ? 0.0 : double(it) / n_t;
    for (int itau = 0; itau < n_tau; ++itau) {
      const double tau = (n_tau == 1) ? 0.0 : double(itau) / n_tau;
      for (int ith = 0; ith < n_theta; ++ith) {
        const double theta = double(ith) / n_theta;
        for (int ix = 0; ix < n_x; ++ix) {
          for (int iy = 0; iy < n_x; ++iy) {
            const Vec2 x{(ix + 0.5) * lx / n_x, (iy + 0.5) * ly / n_x};
            ++report.samples_checked;
            const ForcingSample s = f.eval(t, tau, theta, x);
            const double speed = norm(s.velocity);
            const std::string loc = loc4(t, tau, theta, x);

            // boundedness by d
            if (speed > d * (1.0 + 1e-12))
              sink.add("forcing.|U|<=d", loc, speed - d);
            if (std::abs(s.height) > d * (1.0 + 1e-12))
              sink.add("forcing.|M|<=d", loc, std::abs(s.height) - d);

            // theta-periodicity (and tau, in the mean regime)
            {
              const Vec2 u1 = vel(t, tau, theta + 1.0, x);
              const double m1 = hgt(t, tau, theta + 1.0, x);
              const double scale = std::max(1.0, speed);
              if (norm(u1 - s.velocity) > 1e-12 * scale ||
                  std::abs(m1 - s.height) > 1e-12 * std::max(1.0, std::abs(s.height)))
                sink.add("forcing.theta_periodic", loc,
                         norm(u1 - s.velocity));
              if (regime == Regime::Mean) {
                const Vec2 u2 = vel(t, tau + 1.0, theta, x);
                if (norm(u2 - s.velocity) > 1e-12 * scale)
                  sink.add("forcing.tau_periodic", loc, norm(u2 - s.velocity));
              }
            }

            // derivative bounds and the freeze property
            struct Probe {
              const char* tag;
              Vec2 du;
              double dm;
              double speed_plus;
              double speed_minus;
            };
            auto fd_pair = [&](int axis) -> Probe {
              double tp = t, tm = t, taup = tau, taum = tau, thp = theta,
                     thm = theta;
              Vec2 xp = x, xm = x;
              const char* tag = "";
              switch (axis) {
                case 0: tp += h_fd; tm -= h_fd; tag = "t"; break;
                case 1: taup += h_fd; taum -= h_fd; tag = "tau"; break;
                case 2: thp += h_fd; thm -= h_fd; tag = "theta"; break;
                case 3: xp.x += h_fd; xm.x -= h_fd; tag = "x"; break;
                default: xp.y += h_fd; xm.y -= h_fd; tag = "y"; break;
              }
              const ForcingSample sp = f.eval(tp, taup, thp, xp);
              const ForcingSample sm = f.eval(tm, taum, thm, xm);
              return {tag, (1.0 / (2.0 * h_fd)) * (sp.velocity - sm.velocity),
                      (sp.height - sm.height) / (2.0 * h_fd), norm(sp.velocity),
                      norm(sm.velocity)};
            };

            for (int axis = 0; axis < 5; ++axis) {
              // skip axes that would step outside the domain
              if (axis == 3 && (x.x < h_fd || x.x > lx - h_fd)) continue;
              if (axis == 4 && (x.y < h_fd || x.y > ly - h_fd)) continue;
              const Probe pr = fd_pair(axis);
              const double du_mag = norm(pr.du);
              const double dm_mag = std::abs(pr.dm);
              if (du_mag > d * (1.0 + 1e-6))
                sink.add(std::string("forcing.|dU/d") + pr.tag + "|<=d", loc,
                         du_mag - d);
              if (dm_mag > d * (1.0 + 1e-6))
                sink.add(std::string("forcing.|dM/d") + pr.tag + "|<=d", loc,
                         dm_mag - d);
              // The freeze implication constrains derivatives on the
              // sub-threshold set; check it when the whole difference
              // stencil lies inside (a kink at the very contact point of the
              // set has no classical derivative to constrain).
              if (speed <= f.u_thr() && pr.speed_plus <= f.u_thr() &&
                  pr.speed_minus <= f.u_thr()) {
                if (du_mag > freeze_tol)
                  sink.add(std::string("freeze.dU/d") + pr.tag, loc, du_mag);
                if (dm_mag > freeze_tol)
                  sink.add(std::string("freeze.dM/d") + pr.tag, loc, dm_mag);
              }
            }

            // active window and the empirical threshold
            const bool in_window = theta >= f.params().theta_alpha &&
                                   theta <= f.params().theta_omega;
            if (in_window) {
              if (speed < f.u_thr() * (1.0 - 1e-12))
                sink.add("forcing.window_active", loc, f.u_thr() - speed);
              const double A_eps =
                  k.a * (1.0 - k.b * eps_factor * s.height) *
                  law.eval_ga(speed);
              inf_window_A = std::min(inf_window_A, A_eps);
            }
          }
        }
      }
    }
  }

  report.empirical_g_thr_tilde =
      std::isfinite(inf_window_A) ? inf_window_A : 0.0;
  return report;
}

}  // namespace dunes
