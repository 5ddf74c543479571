#include "dunes/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "dunes/field_io.hpp"

namespace dunes {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_double(trim(tok), where));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

Vec2 parse_vec2(const std::string& v, const std::string& where) {
  const auto list = parse_list(v, where);
  if (list.size() != 2) throw ConfigError(where + ": expected two components");
  return {list[0], list[1]};
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;

  auto where = [&](const std::string& key) {
    std::ostringstream os;
    os << origin << ":" << lineno << " [" << section << "] " << key;
    return os.str();
  };

  std::map<std::string, std::function<void(const std::string&, const std::string&)>>
      handlers;
  handlers["model.a"] = [&](const std::string& v, const std::string& w) { cfg.a = parse_double(v, w); };
  handlers["model.b"] = [&](const std::string& v, const std::string& w) { cfg.b = parse_double(v, w); };
  handlers["model.c"] = [&](const std::string& v, const std::string& w) { cfg.c = parse_double(v, w); };
  handlers["model.epsilon"] = [&](const std::string& v, const std::string& w) { cfg.epsilon = parse_double(v, w); };
  handlers["model.nu"] = [&](const std::string& v, const std::string& w) { cfg.nu = parse_double(v, w); };
  handlers["model.mu"] = [&](const std::string& v, const std::string& w) { cfg.mu = parse_double(v, w); };
  handlers["grid.nx"] = [&](const std::string& v, const std::string& w) { cfg.nx = static_cast<int>(parse_int(v, w)); };
  handlers["grid.ny"] = [&](const std::string& v, const std::string& w) { cfg.ny = static_cast<int>(parse_int(v, w)); };
  handlers["grid.lx"] = [&](const std::string& v, const std::string& w) { cfg.lx = parse_double(v, w); };
  handlers["grid.ly"] = [&](const std::string& v, const std::string& w) { cfg.ly = parse_double(v, w); };
  handlers["grid.boundary"] = [&](const std::string& v, const std::string& w) {
    if (v == "robin") cfg.boundary = BoundaryKind::Robin;
    else if (v == "dirichlet") cfg.boundary = BoundaryKind::Dirichlet;
    else throw ConfigError(w + ": expected robin|dirichlet");
  };
  handlers["flux.d"] = [&](const std::string& v, const std::string& w) { cfg.d = parse_double(v, w); };
  handlers["flux.u_thr"] = [&](const std::string& v, const std::string& w) { cfg.u_thr = parse_double(v, w); };
  handlers["flux.g_thr"] = [&](const std::string& v, const std::string& w) { cfg.g_thr = parse_double(v, w); };
  handlers["flux.ramp_width"] = [&](const std::string& v, const std::string& w) { cfg.ramp_width = parse_double(v, w); };
  handlers["forcing.regime"] = [&](const std::string& v, const std::string& w) {
    if (v == "short") cfg.regime = Regime::Short;
    else if (v == "mean") cfg.regime = Regime::Mean;
    else if (v == "long") cfg.regime = Regime::Long;
    else throw ConfigError(w + ": expected short|mean|long");
  };
  handlers["forcing.u_peak"] = [&](const std::string& v, const std::string& w) { cfg.u_peak = parse_double(v, w); };
  handlers["forcing.tau_peak"] = [&](const std::string& v, const std::string& w) { cfg.tau_peak = parse_double(v, w); };
  handlers["forcing.m_peak"] = [&](const std::string& v, const std::string& w) { cfg.m_peak = parse_double(v, w); };
  handlers["forcing.mean_flow"] = [&](const std::string& v, const std::string& w) { cfg.mean_flow = parse_vec2(v, w); };
  handlers["forcing.direction"] = [&](const std::string& v, const std::string& w) { cfg.direction = parse_vec2(v, w); };
  handlers["forcing.theta_alpha"] = [&](const std::string& v, const std::string& w) { cfg.theta_alpha = parse_double(v, w); };
  handlers["forcing.theta_omega"] = [&](const std::string& v, const std::string& w) { cfg.theta_omega = parse_double(v, w); };
  handlers["forcing.modulation"] = [&](const std::string& v, const std::string& w) { cfg.modulation = parse_double(v, w); };
  handlers["forcing.mutation"] = [&](const std::string& v, const std::string& w) {
    if (v == "none") cfg.mutation = TidalForcing::Mutation::None;
    else if (v == "unfrozen") cfg.mutation = TidalForcing::Mutation::Unfrozen;
    else if (v == "aperiodic") cfg.mutation = TidalForcing::Mutation::Aperiodic;
    else throw ConfigError(w + ": expected none|unfrozen|aperiodic");
  };
  handlers["problem.t_final"] = [&](const std::string& v, const std::string& w) { cfg.T_final = parse_double(v, w); };
  handlers["problem.dt"] = [&](const std::string& v, const std::string& w) {
    cfg.dt = (v == "auto") ? 0.0 : parse_double(v, w);
  };
  handlers["problem.z0"] = [&](const std::string& v, const std::string&) { cfg.z0_spec = v; };
  handlers["problem.g"] = [&](const std::string& v, const std::string&) { cfg.g_spec = v; };
  handlers["problem.theta_steps"] = [&](const std::string& v, const std::string& w) { cfg.theta_steps = static_cast<int>(parse_int(v, w)); };
  handlers["problem.tol_periodic"] = [&](const std::string& v, const std::string& w) { cfg.tol_periodic = parse_double(v, w); };
  handlers["problem.t_frozen"] = [&](const std::string& v, const std::string& w) { cfg.t_frozen = parse_double(v, w); };
  handlers["problem.tau_frozen"] = [&](const std::string& v, const std::string& w) { cfg.tau_frozen = parse_double(v, w); };
  handlers["problem.cell_i"] = [&](const std::string& v, const std::string& w) {
    cfg.cell_i = (v == "auto") ? -1 : static_cast<int>(parse_int(v, w));
  };
  handlers["problem.g_thr_tilde"] = [&](const std::string& v, const std::string& w) {
    cfg.g_thr_tilde = (v == "auto") ? -1.0 : parse_double(v, w);
  };
  handlers["problem.eps_ladder"] = [&](const std::string& v, const std::string& w) { cfg.eps_ladder = parse_list(v, w); };
  handlers["problem.mu_ladder"] = [&](const std::string& v, const std::string& w) { cfg.mu_ladder = parse_list(v, w); };
  handlers["problem.nu_ladder"] = [&](const std::string& v, const std::string& w) { cfg.nu_ladder = parse_list(v, w); };
  handlers["output.dir"] = [&](const std::string& v, const std::string&) { cfg.out_dir = v; };
  handlers["output.seed"] = [&](const std::string& v, const std::string& w) { cfg.seed = static_cast<unsigned long>(parse_int(v, w)); };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "grid" && section != "flux" &&
          section != "forcing" && section != "problem" && section != "output")
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key '" + key + "' outside any section");
    const std::string full = section + "." + key;
    const auto it = handlers.find(full);
    if (it == handlers.end())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": unknown key '" + key + "' in section [" + section +
                        "]");
    it->second(value, where(key));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[model]\n";
  os << "a = " << format_double(c.a) << "\n";
  os << "b = " << format_double(c.b) << "\n";
  os << "c = " << format_double(c.c) << "\n";
  os << "epsilon = " << format_double(c.epsilon) << "\n";
  os << "nu = " << format_double(c.nu) << "\n";
  os << "mu = " << format_double(c.mu) << "\n";
  os << "\n[grid]\n";
  os << "nx = " << c.nx << "\n";
  os << "ny = " << c.ny << "\n";
  os << "lx = " << format_double(c.lx) << "\n";
  os << "ly = " << format_double(c.ly) << "\n";
  os << "boundary = "
     << (c.boundary == BoundaryKind::Robin ? "robin" : "dirichlet") << "\n";
  os << "\n[flux]\n";
  os << "d = " << format_double(c.d) << "\n";
  os << "u_thr = " << format_double(c.u_thr) << "\n";
  os << "g_thr = " << format_double(c.g_thr) << "\n";
  os << "ramp_width = " << format_double(c.ramp_width) << "\n";
  os << "\n[forcing]\n";
  os << "regime = "
     << (c.regime == Regime::Short ? "short"
                                   : (c.regime == Regime::Mean ? "mean" : "long"))
     << "\n";
  os << "u_peak = " << format_double(c.u_peak) << "\n";
  os << "tau_peak = " << format_double(c.tau_peak) << "\n";
  os << "m_peak = " << format_double(c.m_peak) << "\n";
  os << "mean_flow = " << format_double(c.mean_flow.x) << ","
     << format_double(c.mean_flow.y) << "\n";
  os << "direction = " << format_double(c.direction.x) << ","
     << format_double(c.direction.y) << "\n";
  os << "theta_alpha = " << format_double(c.theta_alpha) << "\n";
  os << "theta_omega = " << format_double(c.theta_omega) << "\n";
  os << "modulation = " << format_double(c.modulation) << "\n";
  os << "mutation = "
     << (c.mutation == TidalForcing::Mutation::None
             ? "none"
             : (c.mutation == TidalForcing::Mutation::Unfrozen ? "unfrozen"
                                                               : "aperiodic"))
     << "\n";
  os << "\n[problem]\n";
  os << "t_final = " << format_double(c.T_final) << "\n";
  os << "dt = " << (c.dt > 0.0 ? format_double(c.dt) : std::string("auto"))
     << "\n";
  os << "z0 = " << c.z0_spec << "\n";
  os << "g = " << c.g_spec << "\n";
  os << "theta_steps = " << c.theta_steps << "\n";
  os << "tol_periodic = " << format_double(c.tol_periodic) << "\n";
  os << "t_frozen = " << format_double(c.t_frozen) << "\n";
  os << "tau_frozen = " << format_double(c.tau_frozen) << "\n";
  os << "cell_i = "
     << (c.cell_i < 0 ? std::string("auto") : std::to_string(c.cell_i)) << "\n";
  os << "g_thr_tilde = "
     << (c.g_thr_tilde < 0.0 ? std::string("auto")
                             : format_double(c.g_thr_tilde))
     << "\n";
  os << "eps_ladder = " << format_list(c.eps_ladder) << "\n";
  os << "mu_ladder = " << format_list(c.mu_ladder) << "\n";
  os << "nu_ladder = " << format_list(c.nu_ladder) << "\n";
  os << "\n[output]\n";
  os << "dir = " << c.out_dir << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

FluxLaw RunConfig::make_flux_law() const {
  return FluxLaw(d, u_thr, g_thr, ramp_width);
}

TidalForcing RunConfig::make_forcing() const {
  TidalForcing::Params p;
  p.regime = regime;
  p.u_thr = u_thr;
  p.u_peak = u_peak;
  p.tau_peak = tau_peak;
  p.m_peak = m_peak;
  p.mean_flow = mean_flow;
  p.direction = direction;
  p.theta_alpha = theta_alpha;
  p.theta_omega = theta_omega;
  p.modulation_amplitude = modulation;
  p.lx = lx;
  p.ly = ly;
  p.epsilon = epsilon;
  p.mutation = mutation;
  return TidalForcing(p);
}

ModelConstants RunConfig::make_constants() const {
  ModelConstants k{a, b, c, epsilon, nu, mu};
  k.validate();
  return k;
}

Grid RunConfig::make_grid() const { return Grid(nx, ny, lx, ly, boundary); }

ScalarField RunConfig::make_z0() const {
  const Grid g = make_grid();
  if (z0_spec == "zero") return ScalarField(g, 0.0);
  if (z0_spec.rfind("gaussian:", 0) == 0) {
    const auto v = parse_list(z0_spec.substr(9), "problem.z0");
    if (v.size() != 4)
      throw ConfigError("problem.z0: gaussian needs cx,cy,width,amplitude");
    const double cx = v[0], cy = v[1], w = v[2], amp = v[3];
    if (!(w > 0.0)) throw ConfigError("problem.z0: gaussian width must be > 0");
    ScalarField z(g);
    z.fill([&](Vec2 x) {
      const double r2 = (x.x - cx) * (x.x - cx) + (x.y - cy) * (x.y - cy);
      return amp * std::exp(-r2 / (2.0 * w * w));
    });
    return z;
  }
  if (z0_spec.rfind("file:", 0) == 0)
    return read_field_csv(z0_spec.substr(5), boundary);
  throw ConfigError("problem.z0: expected zero | gaussian:... | file:path, got '" +
                    z0_spec + "'");
}

BoundaryFunc RunConfig::make_g() const {
  if (g_spec == "zero") return zero_boundary();
  if (g_spec.rfind("constant:", 0) == 0) {
    const double k = parse_double(trim(g_spec.substr(9)), "problem.g");
    return constant_boundary(k);
  }
  if (g_spec.rfind("trace:", 0) == 0) {
    // trace:cospi_decay,<rate>: Robin trace of exp(-rate t) cos(pi x/lx) cos(pi y/ly)
    const std::string rest = g_spec.substr(6);
    const auto comma = rest.find(',');
    if (comma == std::string::npos || rest.substr(0, comma) != "cospi_decay")
      throw ConfigError("problem.g: unknown trace id in '" + g_spec + "'");
    const double rate = parse_double(trim(rest.substr(comma + 1)), "problem.g");
    const double pi = 3.1415926535897932384626433832795;
    const double lx_ = lx, ly_ = ly;
    return [rate, pi, lx_, ly_](double t, Vec2 x) {
      return std::exp(-rate * t) * std::cos(pi * x.x / lx_) *
             std::cos(pi * x.y / ly_);
    };
  }
  throw ConfigError(
      "problem.g: expected zero | constant:k | trace:cospi_decay,rate, got '" +
      g_spec + "'");
}

EpsProblem RunConfig::make_eps_problem() const {
  EpsProblem p{make_constants(), make_flux_law(), make_forcing(),
               eps_i_exponent(), make_z0(),       make_g(),
               T_final,          dt};
  p.validate();
  return p;
}

CellProblem RunConfig::make_cell_problem() const {
  CellProblem p{make_constants(), make_flux_law(), make_forcing(),
                make_grid(),      t_frozen,        tau_frozen,
                cell_i_exponent(), theta_steps,    make_g(),
                std::nullopt,     tol_periodic,    500};
  p.validate();
  return p;
}

StudySetup RunConfig::make_study_setup() const {
  return StudySetup{make_constants(), make_flux_law(), make_forcing(),
                    make_grid(),      make_z0(),       make_g(),
                    T_final,          theta_steps,     tol_periodic};
}

}  // namespace dunes
