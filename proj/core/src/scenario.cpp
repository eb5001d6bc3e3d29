#include "nlkpp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nlkpp/errors.hpp"
#include "nlkpp/svg.hpp"

namespace nlkpp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::set<std::string>& known_scenario_keys() {
  static const std::set<std::string> keys = {
      "name",
      "claims",
      "u_inf",
      "kernel.family",
      "kernel.chi",
      "kernel.d",
      "kernel.j_target",
      "kernel.support_radius",
      "kernel.amplitude",
      "kernel.alpha",
      "kernel.sign",
      "kernel.k_inf",
      "kernel.values",
      "kernel.spacing",
      "kernel.tail",
      "u0.kind",
      "u0.radius",
      "u0.height",
      "u0.values",
      "u0.spacing",
      "sim.dx",
      "sim.dt_max",
      "sim.t_end",
      "sim.cfl",
      "sim.edge_tol",
      "sim.extension_chunk",
      "sim.scheme",
      "sim.reaction",
      "sim.linf_cap",
      "sim.record_every",
      "sim.max_width",
      "diag.levels",
      "diag.eps",
      "diag.window_fraction",
      "diag.fit_window",
  };
  return keys;
}

void atomic_write(const std::filesystem::path& path, const std::string& body) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << body;
    if (!out) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

Kernel kernel_from_config(const ConfigMap& cfg, const std::string& prefix) {
  const std::string family = cfg.get_string(prefix + "family");
  if (family == "zero") return Kernel::zero();
  if (family == "keller_segel")
    return Kernel::keller_segel(cfg.get_double(prefix + "chi"),
                                cfg.get_double(prefix + "d"));
  if (family == "compact_bump")
    return Kernel::compact_bump(cfg.get_double(prefix + "j_target"),
                                cfg.get_double(prefix + "support_radius"));
  if (family == "power_law")
    return Kernel::power_law(cfg.get_double(prefix + "amplitude"),
                             cfg.get_double(prefix + "alpha"),
                             static_cast<int>(cfg.get_long(prefix + "sign", 1)));
  if (family == "step") return Kernel::step(cfg.get_double(prefix + "k_inf"));
  if (family == "tabulated") {
    const std::string tail = cfg.get_string(prefix + "tail", "zero");
    if (tail != "zero" && tail != "constant")
      throw ConfigError("kernel tail must be 'zero' or 'constant'");
    return Kernel::tabulated(cfg.get_doubles(prefix + "values"),
                             cfg.get_double(prefix + "spacing"),
                             tail == "zero" ? TailExtension::Zero
                                            : TailExtension::Constant);
  }
  throw ConfigError("unknown kernel family '" + family + "'");
}

Scenario scenario_from_config(const ConfigMap& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    (void)value;
    if (key.rfind("sweep.", 0) == 0) continue;  // sweep templates share maps
    if (!known_scenario_keys().count(key))
      throw ConfigError("unknown scenario key '" + key + "'");
  }

  Scenario sc;
  sc.name = cfg.get_string("name", "scenario");
  sc.kernel = kernel_from_config(cfg, "kernel.");

  const std::string kind = cfg.get_string("u0.kind", "indicator");
  if (kind == "indicator") {
    sc.u0 = InitialData::indicator(cfg.get_double("u0.radius", 1.0),
                                   cfg.get_double("u0.height", 1.0));
  } else if (kind == "bump") {
    sc.u0 = InitialData::bump(cfg.get_double("u0.radius", 1.0),
                              cfg.get_double("u0.height", 1.0));
  } else if (kind == "table") {
    sc.u0 = InitialData::tabulated(cfg.get_doubles("u0.values"),
                                   cfg.get_double("u0.spacing"));
  } else if (kind == "narrow_gaussian") {
    sc.u0 = InitialData::narrow_gaussian();
  } else {
    throw ConfigError("unknown u0.kind '" + kind + "'");
  }

  sc.sim.dx = cfg.get_double("sim.dx", 0.1);
  sc.sim.dt_max = cfg.get_double("sim.dt_max", 0.05);
  sc.sim.t_end = cfg.get_double("sim.t_end", 10.0);
  sc.sim.cfl_advection = cfg.get_double("sim.cfl", 0.4);
  sc.sim.edge_tol = cfg.get_double("sim.edge_tol", 1e-8);
  sc.sim.extension_chunk =
      cfg.get_double("sim.extension_chunk", 20.0 * sc.sim.dx);
  const std::string scheme = cfg.get_string("sim.scheme", "imex_cn");
  if (scheme == "imex_cn") {
    sc.sim.scheme = Scheme::ImexCrankNicolson;
  } else if (scheme == "imex_be") {
    sc.sim.scheme = Scheme::ImexBackwardEuler;
  } else {
    throw ConfigError("sim.scheme must be 'imex_cn' or 'imex_be'");
  }
  const std::string reaction = cfg.get_string("sim.reaction", "logistic");
  if (reaction == "logistic") {
    sc.sim.reaction = Reaction::Logistic;
  } else if (reaction == "linear_growth") {
    sc.sim.reaction = Reaction::LinearGrowth;
  } else if (reaction == "none") {
    sc.sim.reaction = Reaction::None;
  } else {
    throw ConfigError(
        "sim.reaction must be 'logistic', 'linear_growth' or 'none'");
  }
  sc.sim.linf_cap = cfg.get_double("sim.linf_cap", 10.0);
  sc.sim.record_every = cfg.get_double("sim.record_every", 0.5);
  sc.sim.max_width = cfg.get_double("sim.max_width", 2e5);
  sc.sim.validate();

  if (cfg.has("diag.levels")) sc.diag.levels = cfg.get_doubles("diag.levels");
  if (sc.diag.levels.empty())
    throw ConfigError("diag.levels must name at least one front level");
  for (double mu : sc.diag.levels)
    if (!(mu > 0.0) || !(mu < 1.0))
      throw ConfigError("diag.levels entries must lie in (0,1)");
  sc.diag.eps = cfg.get_double("diag.eps", 0.1);
  if (!(sc.diag.eps > 0.0) || !(sc.diag.eps < 0.5))
    throw ConfigError("diag.eps must lie in (0, 1/2)");
  sc.diag.window_fraction = cfg.get_double("diag.window_fraction", 0.5);
  if (cfg.has("diag.fit_window")) {
    const std::vector<double> w = cfg.get_doubles("diag.fit_window");
    if (w.size() != 2 || !(w[0] < w[1]))
      throw ConfigError("diag.fit_window must be two increasing times");
    sc.diag.fit_window = std::make_pair(w[0], w[1]);
  }

  if (cfg.has("claims")) sc.claims = cfg.get_strings("claims");
  for (const std::string& id : sc.claims) {
    const auto ids = claim_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      throw ConfigError("unknown claim id '" + id + "'");
  }
  if (cfg.has("u_inf")) sc.u_inf = cfg.get_double("u_inf");
  return sc;
}

std::vector<std::string> preset_names() {
  return {"kpp-local", "keller-segel", "ks-converge", "step", "power-law"};
}

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ConfigMap preset_config(const std::string& name) {
  // Presets are embedded flat configs so they diff and override like files.
  if (name == "kpp-local") {
    return ConfigMap::parse_string(R"(
name = kpp-local
kernel.family = zero
u0.kind = indicator
u0.radius = 1
sim.dx = 0.1
sim.dt_max = 0.05
sim.t_end = 40
sim.record_every = 0.5
claims = speed-two log-delay linf mass-identity
)");
  }
  if (name == "keller-segel") {
    return ConfigMap::parse_string(R"(
name = keller-segel
kernel.family = keller_segel
kernel.chi = 0.5
kernel.d = 1
u0.kind = indicator
u0.radius = 1
sim.dx = 0.1
sim.dt_max = 0.05
sim.t_end = 40
sim.record_every = 0.5
claims = speed-bracket linf mass-identity
)");
  }
  if (name == "ks-converge") {
    return ConfigMap::parse_string(R"(
name = ks-converge
kernel.family = keller_segel
kernel.chi = 0.4
kernel.d = 1
u0.kind = indicator
u0.radius = 1
sim.dx = 0.1
sim.dt_max = 0.05
sim.t_end = 30
sim.record_every = 0.5
claims = converge-one linf mass-identity
)");
  }
  if (name == "step") {
    return ConfigMap::parse_string(R"(
name = step
kernel.family = step
kernel.k_inf = 0.25
u0.kind = indicator
u0.radius = 0.5
u0.height = 1e-4
sim.dx = 0.1
sim.dt_max = 0.05
sim.t_end = 30
sim.cfl = 0.8
sim.record_every = 0.25
sim.extension_chunk = 20
sim.linf_cap = 2
claims = exp-mass plateau mass-identity
)");
  }
  if (name == "power-law") {
    return ConfigMap::parse_string(R"(
name = power-law
kernel.family = power_law
kernel.amplitude = 1
kernel.alpha = 0.5
u0.kind = indicator
u0.radius = 1
sim.dx = 1
sim.dt_max = 0.5
sim.t_end = 200
sim.cfl = 1
sim.record_every = 2
sim.extension_chunk = 200
sim.max_width = 400000
diag.fit_window = 50 200
claims = power-mass level-growth mass-identity
)");
  }
  throw ConfigError("unknown preset '" + name + "'");
}

Scenario load_scenario(const std::string& preset_or_path,
                       const std::vector<std::string>& overrides) {
  ConfigMap cfg = is_preset(preset_or_path)
                      ? preset_config(preset_or_path)
                      : ConfigMap::parse_file(preset_or_path);
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + ov + "' is not of the form key=value");
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  return scenario_from_config(cfg);
}

BoundReport bound_report(const KernelFacts& facts,
                         std::optional<double> u_inf_override) {
  double u_inf = kNaN;
  if (u_inf_override) {
    u_inf = *u_inf_override;
  } else if (facts.jump < 1.0) {
    u_inf = default_u_inf(facts);
  }

  BoundReport rep;
  rep.u_inf = u_inf;
  rep.linf_bound = sup_norm_bound(facts.jump);
  const PlateauBracket pb = plateau_bracket(facts);
  rep.plateau_upper = pb.upper;
  rep.plateau_lower = pb.lower;
  rep.cstar = kNaN;
  rep.eps_argmin = kNaN;
  rep.cstar_terms = {kNaN, kNaN, kNaN};
  if (std::isfinite(u_inf) && std::isfinite(facts.l1_norm)) {
    BoundInputs in;
    in.facts = facts;
    in.u_inf = u_inf;
    const BoundReport full = cstar(in);
    rep.cstar_terms = full.cstar_terms;
    rep.cstar = full.cstar;
    rep.eps_argmin = full.eps_argmin;
  }
  return rep;
}

ScenarioResult execute_scenario(const Scenario& sc) {
  ScenarioResult res;
  res.scenario = sc;

  const double dx = sc.sim.dx;
  StepMonitor monitor = [&](const StepInfo& info) {
    const double residual =
        std::fabs(info.mass_after - info.mass_before - info.dt * info.bulk_before);
    const double budget = info.dt * (info.dt + dx * dx);
    res.mass_residual_factor =
        std::max(res.mass_residual_factor, residual / budget);
    res.max_u = std::max(res.max_u, info.max_after);
  };
  const double mu0 = sc.diag.levels.front();
  RecordHook hook = [&](const Field& f) {
    const auto fp = front(f, mu0);
    if (!fp) {
      res.interior_max.push_back(kNaN);
      return;
    }
    const double reach = 0.5 * fp->right;
    double m = 0.0;
    for (int i = 0; i < f.size(); ++i)
      if (std::fabs(f.grid.node(i)) <= reach)
        m = std::max(m, f.values[i]);
    res.interior_max.push_back(m);
  };

  res.run = run(sc.kernel, sc.u0, sc.sim, sc.diag, monitor, hook);

  const KernelFacts facts = sc.kernel.facts();
  std::optional<double> u_inf = sc.u_inf;
  if (!u_inf && facts.jump >= 1.0) u_inf = res.max_u;  // measured fallback
  res.bounds = bound_report(facts, u_inf);

  res.claims = evaluate_claims(res);
  return res;
}

std::string bounds_text(const Kernel& k, const BoundReport& rep) {
  const KernelFacts f = k.facts();
  std::ostringstream os;
  os << "kernel = " << k.describe() << "\n";
  os << "jump = " << num(f.jump) << "\n";
  os << "l1_norm = " << num(f.l1_norm) << "\n";
  os << "kbar_l1 = " << (f.kbar_l1 ? num(*f.kbar_l1) : "undefined") << "\n";
  os << "k_inf = " << num(f.k_inf) << "\n";
  os << "lp_finite_for = " << f.lp_finite_for << "\n";
  if (f.power_alpha) os << "power_alpha = " << num(*f.power_alpha) << "\n";
  os << "u_inf = " << num(rep.u_inf) << "\n";
  os << "cstar_term1 = " << num(rep.cstar_terms[0]) << "\n";
  os << "cstar_term2 = " << num(rep.cstar_terms[1]) << "\n";
  os << "cstar_term3 = " << num(rep.cstar_terms[2]) << "\n";
  os << "cstar_eps_argmin = " << num(rep.eps_argmin) << "\n";
  os << "cstar = " << num(rep.cstar) << "\n";
  os << "linf_bound = " << num(rep.linf_bound) << "\n";
  os << "plateau_upper = "
     << (rep.plateau_upper ? num(*rep.plateau_upper) : "undefined") << "\n";
  os << "plateau_lower = "
     << (rep.plateau_lower ? num(*rep.plateau_lower) : "undefined") << "\n";
  return os.str();
}

std::string bounds_csv(const Kernel& k, const BoundReport& rep) {
  const KernelFacts f = k.facts();
  std::ostringstream os;
  os << "kernel,jump,l1_norm,kbar_l1,k_inf,u_inf,cstar_term1,cstar_term2,"
        "cstar_term3,eps_argmin,cstar,linf_bound,plateau_upper,plateau_lower\n";
  os << '"' << k.describe() << '"';
  os << ',' << num(f.jump) << ',' << num(f.l1_norm) << ','
     << (f.kbar_l1 ? num(*f.kbar_l1) : "nan") << ',' << num(f.k_inf) << ','
     << num(rep.u_inf) << ',' << num(rep.cstar_terms[0]) << ','
     << num(rep.cstar_terms[1]) << ',' << num(rep.cstar_terms[2]) << ','
     << num(rep.eps_argmin) << ',' << num(rep.cstar) << ','
     << num(rep.linf_bound) << ','
     << (rep.plateau_upper ? num(*rep.plateau_upper) : "nan") << ','
     << (rep.plateau_lower ? num(*rep.plateau_lower) : "nan") << "\n";
  return os.str();
}

void write_artifacts(const ScenarioResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path base = fs::path(out_dir) / r.scenario.name;

  {
    std::ostringstream os;
    write_csv(r.run.series, os);
    atomic_write(base.string() + ".csv", os.str());
  }
  atomic_write(base.string() + ".bounds.txt",
               bounds_text(r.scenario.kernel, r.bounds));

  {
    std::ostringstream os;
    int failures = 0;
    for (const ClaimResult& c : r.claims) {
      os << (c.pass ? "PASS" : "FAIL") << ' ' << c.id
         << " observed=" << num(c.observed) << " : " << c.detail << "\n";
      if (!c.pass) ++failures;
    }
    if (r.run.status == RunStatus::ResourceLimit)
      os << "NOTE run truncated: " << r.run.message << "\n";
    os << (failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failures))
       << "\n";
    atomic_write(base.string() + ".claims.txt", os.str());
  }

  {
    SvgChart chart;
    chart.title = r.scenario.name;
    chart.y_label = "P, front";
    SvgSeries mass_series;
    mass_series.label = "P(t)";
    mass_series.color = "#1f6fb2";
    SvgSeries front_series;
    front_series.label = "front_right";
    front_series.color = "#b23a1f";
    for (const Record& rec : r.run.series.records) {
      mass_series.x.push_back(rec.t);
      mass_series.y.push_back(rec.mass);
      front_series.x.push_back(rec.t);
      front_series.y.push_back(
          rec.fronts.front() ? rec.fronts.front()->right
                             : std::numeric_limits<double>::quiet_NaN());
    }
    chart.series.push_back(std::move(mass_series));
    chart.series.push_back(std::move(front_series));
    atomic_write(base.string() + ".svg", render_svg(chart));
  }
}

}  // namespace nlkpp
