// Batch driver for the sand-transport multiscale solver. One subcommand per
// study; every command takes --config and writes machine-readable outputs
// under --out (default: the config's output.dir).
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dunes/config.hpp"
#include "dunes/field_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dunes;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;       // overrides [output] dir when non-empty
  double eps_override = 0.0; // > 0 overrides [model] epsilon
  std::string ladder_override;
};

RunConfig load_with_overrides(const CommonArgs& args) {
  RunConfig cfg = load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.eps_override > 0.0) cfg.epsilon = args.eps_override;
  if (!args.ladder_override.empty()) {
    std::vector<double> ladder;
    std::istringstream ss(args.ladder_override);
    std::string tok;
    while (std::getline(ss, tok, ',')) ladder.push_back(std::stod(tok));
    if (ladder.empty()) throw ConfigError("--ladder: empty list");
    cfg.eps_ladder = ladder;
  }
  return cfg;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

void write_summary(const fs::path& dir, const json& j) {
  std::ofstream out(dir / "summary.json");
  out << j.dump(2) << "\n";
}

std::string field_file_name(const char* stem, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05zu.csv", stem, index);
  return buf;
}

int run_validate(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const fs::path dir = ensure_out_dir(cfg);
  const FluxLaw law = cfg.make_flux_law();
  const TidalForcing forcing = cfg.make_forcing();
  const ModelConstants consts = cfg.make_constants();
  const ValidationReport report =
      validate_hypotheses(law, forcing, consts, 64);
  write_text(dir / "validate.txt", report.summary());
  json j;
  j["command"] = "validate";
  j["violations"] = report.total_violations;
  j["samples"] = report.samples_checked;
  j["empirical_g_thr_tilde"] = report.empirical_g_thr_tilde;
  j["pass"] = report.pass();
  write_summary(dir, j);
  std::cout << report.summary();
  return report.pass() ? 0 : 1;
}

int run_solve(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const fs::path dir = ensure_out_dir(cfg);
  const EpsProblem problem = cfg.make_eps_problem();
  const SolveRun run = solve(problem);

  for (std::size_t n = 0; n < run.snapshots.size(); ++n)
    write_field_csv(run.snapshots[n], (dir / field_file_name("z", n)).string());

  std::ostringstream diag;
  diag << "t,l2,h1,mass,boundary_flux,identity_gap\n";
  for (const auto& d : run.diagnostics)
    diag << format_double(d.t) << "," << format_double(d.l2) << ","
         << format_double(d.h1) << "," << format_double(d.mass) << ","
         << format_double(d.boundary_flux) << ","
         << format_double(d.identity_gap) << "\n";
  write_text(dir / "diagnostics.csv", diag.str());

  double max_gap = 0.0, sup_l2 = 0.0;
  for (const auto& d : run.diagnostics) {
    max_gap = std::max(max_gap, d.identity_gap);
    sup_l2 = std::max(sup_l2, d.l2);
  }
  json j;
  j["command"] = "solve";
  j["steps"] = run.diagnostics.size();
  j["sup_l2"] = sup_l2;
  j["max_identity_gap"] = max_gap;
  write_summary(dir, j);
  std::cout << "solve: " << run.diagnostics.size()
            << " steps, sup l2 = " << sup_l2
            << ", max identity gap = " << max_gap << "\n";
  return 0;
}

void write_profile(const fs::path& dir, const PeriodicProfile& prof) {
  for (int m = 0; m < prof.steps(); ++m)
    write_field_csv(prof.nodes[m],
                    (dir / field_file_name("profile_theta", m)).string());
  std::ostringstream meta;
  meta << "theta,residual,threshold_flag,l2,h1\n";
  for (int m = 0; m < prof.steps(); ++m) {
    const bool flag =
        !prof.threshold_mask.empty() && prof.threshold_mask[m] != 0;
    meta << format_double(m * prof.dtheta) << ","
         << format_double(prof.periodic_residual) << "," << (flag ? 1 : 0)
         << "," << format_double(l2_norm(prof.nodes[m])) << ","
         << format_double(h1_seminorm(prof.nodes[m])) << "\n";
  }
  write_text(dir / "profile_meta.csv", meta.str());
}

json norms_json(const NormCertificates& n) {
  json j;
  j["l2_h1"] = n.l2_h1;
  j["linf_l2"] = n.linf_l2;
  j["linf_h1"] = n.linf_h1;
  j["dtheta_l2"] = n.dtheta_l2;
  j["laplacian_l2"] = n.laplacian_l2;
  j["sup_abs_mass"] = n.sup_abs_mass;
  if (n.has_dt_norm) j["dt_l2_h1"] = n.dt_l2_h1;
  return j;
}

int run_cell(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const fs::path dir = ensure_out_dir(cfg);
  CellProblem cell = cfg.make_cell_problem();

  json j;
  j["command"] = "cell";
  try {
    if (cfg.mu > 0.0 && cfg.nu > 0.0) {
      const PeriodicProfile prof = solve_mu_nu(cell);
      write_profile(dir, prof);
      j["periodic_residual"] = prof.periodic_residual;
      j["periods_used"] = prof.periods_used;
      j["norms"] = norms_json(norm_certificates(prof, cell.g));
    }
    // mu -> 0 at the configured nu (nu must be positive for this leg)
    CellProblem mu_leg = cell;
    if (!(mu_leg.consts.nu > 0.0)) mu_leg.consts.nu = cfg.nu_ladder.front();
    const ContinuationResult mu_res =
        continue_mu_to_zero(mu_leg, cfg.mu_ladder);
    j["mu_increments"] = mu_res.increments;
    j["mu_declared_converged"] = mu_res.declared_converged;
    // nu -> 0 with mu = 0
    const ContinuationResult nu_res = continue_nu_to_zero(cell, cfg.nu_ladder);
    j["nu_increments"] = nu_res.increments;
    j["nu_declared_converged"] = nu_res.declared_converged;
    write_profile(dir, nu_res.profile);
    j["periodic_residual_final"] = nu_res.profile.periodic_residual;
    j["norms_final"] = norms_json(norm_certificates(nu_res.profile, cell.g));
  } catch (const SolverError& e) {
    std::ostringstream hist;
    for (double r : e.residual_history()) hist << format_double(r) << "\n";
    write_text(dir / "residual_history.txt", hist.str());
    throw;
  }
  write_summary(dir, j);
  std::cout << "cell: wrote profiles to " << dir << "\n";
  return 0;
}

int run_homogenize(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  const fs::path dir = ensure_out_dir(cfg);
  const CellProblem cell = cfg.make_cell_problem();
  json j;
  j["command"] = "homogenize";
  try {
    if (cfg.regime == Regime::Long) {
      const ThresholdSet thr = compute_threshold_set(
          cell, cfg.effective_g_thr_tilde(), {cfg.t_frozen});
      const PeriodicProfile prof = solve_homogenized_long(cell, thr);
      write_profile(dir, prof);
      int masked = 0;
      for (auto m : prof.threshold_mask) masked += (m != 0);
      double max_res = 0.0;
      for (double r : prof.elliptic_residuals) max_res = std::max(max_res, r);
      j["g_thr_tilde"] = thr.g_thr_tilde;
      j["masked_nodes"] = masked;
      j["max_elliptic_residual"] = max_res;
      j["norms"] = norms_json(norm_certificates(prof, cell.g));
    } else {
      const PeriodicProfile prof = solve_homogenized_short(cell);
      write_profile(dir, prof);
      j["periodic_residual"] = prof.periodic_residual;
      j["periods_used"] = prof.periods_used;
      j["norms"] = norms_json(norm_certificates(prof, cell.g));
    }
  } catch (const SolverError& e) {
    std::ostringstream hist;
    for (double r : e.residual_history()) hist << format_double(r) << "\n";
    write_text(dir / "residual_history.txt", hist.str());
    throw;
  }
  write_summary(dir, j);
  std::cout << "homogenize: wrote profiles to " << dir << "\n";
  return 0;
}

int run_twoscale(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  if (cfg.eps_ladder.size() < 3)
    throw ConfigError("twoscale: eps_ladder must have at least 3 entries");
  const fs::path dir = ensure_out_dir(cfg);
  const StudySetup setup = cfg.make_study_setup();
  const TwoScaleReport report =
      convergence_study(setup, default_battery(), cfg.eps_ladder);

  std::ostringstream csv;
  csv << "psi_id,epsilon,pairing,limit_pairing,abs_error\n";
  for (const auto& r : report.rows)
    csv << r.psi_id << "," << format_double(r.epsilon) << ","
        << format_double(r.pairing) << "," << format_double(r.limit_pairing)
        << "," << format_double(r.abs_error) << "\n";
  write_text(dir / "twoscale_report.csv", csv.str());

  json j;
  j["command"] = "twoscale";
  j["monotone_decrease"] = report.monotone_decrease;
  j["failing_psi"] = report.failing_psi;
  write_summary(dir, j);
  std::cout << "twoscale: monotone_decrease = "
            << (report.monotone_decrease ? "true" : "false") << "\n";
  return 0;
}

int run_corrector(const CommonArgs& args) {
  const RunConfig cfg = load_with_overrides(args);
  if (cfg.eps_ladder.size() < 3)
    throw ConfigError("corrector: eps_ladder must have at least 3 entries");
  const fs::path dir = ensure_out_dir(cfg);
  const StudySetup setup = cfg.make_study_setup();
  const CorrectorReport report =
      corrector_study(setup, default_battery(), cfg.eps_ladder);

  std::ostringstream csv;
  csv << "epsilon,sup_corrector_l2,ladder_ratio\n";
  for (const auto& r : report.rows)
    csv << format_double(r.epsilon) << "," << format_double(r.sup_corrector_l2)
        << "," << format_double(r.ladder_ratio) << "\n";
  write_text(dir / "corrector_report.csv", csv.str());

  std::ostringstream pcsv;
  pcsv << "psi_id,epsilon,pairing\n";
  for (const auto& r : report.corrector_pairings)
    pcsv << r.psi_id << "," << format_double(r.epsilon) << ","
         << format_double(r.pairing) << "\n";
  write_text(dir / "corrector_pairings.csv", pcsv.str());

  json j;
  j["command"] = "corrector";
  j["corrector_bounded"] = report.bounded;
  json sup = json::array();
  for (const auto& r : report.rows) sup.push_back(r.sup_corrector_l2);
  j["sup_corrector_l2"] = sup;
  write_summary(dir, j);
  std::cout << "corrector: bounded = " << (report.bounded ? "true" : "false")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dunes: multiscale sand-transport solver"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* names[] = {"validate", "solve",    "cell",
                         "homogenize", "twoscale", "corrector"};
  const char* descs[] = {
      "check the flux-law and forcing hypotheses",
      "time-integrate the eps-dependent transport problem",
      "solve the regularized periodic cell problems (mu, nu ladders)",
      "solve the homogenized limit problem",
      "eps-ladder two-scale convergence study",
      "first-order corrector study"};
  for (int i = 0; i < 6; ++i) {
    auto* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", args.config_path, "config file (INI)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory override");
    sub->add_option("--eps", args.eps_override, "epsilon override");
    sub->add_option("--ladder", args.ladder_override,
                    "eps ladder override (comma-separated)");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "validate") return run_validate(args);
    if (cmd == "solve") return run_solve(args);
    if (cmd == "cell") return run_cell(args);
    if (cmd == "homogenize") return run_homogenize(args);
    if (cmd == "twoscale") return run_twoscale(args);
    if (cmd == "corrector") return run_corrector(args);
    std::cerr << "unknown command\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
