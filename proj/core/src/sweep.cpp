#include "nlkpp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nlkpp/errors.hpp"
#include "nlkpp/scenario.hpp"

namespace nlkpp {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_int(const std::string& s, long* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

std::vector<double> build_grid(const ConfigMap& cfg) {
  const std::vector<std::string> spec = cfg.get_strings("sweep.grid");
  if (spec.empty()) throw ConfigError("sweep.grid is empty");
  const std::string& kind = spec[0];
  std::vector<double> grid;
  if (kind == "values") {
    for (size_t i = 1; i < spec.size(); ++i) {
      double v;
      if (!parse_number(spec[i], &v))
        throw ConfigError("sweep.grid: bad value '" + spec[i] + "'");
      grid.push_back(v);
    }
  } else if (kind == "linspace" || kind == "logspace") {
    if (spec.size() != 4)
      throw ConfigError("sweep.grid: " + kind + " needs 'lo hi n'");
    double lo, hi;
    long n;
    if (!parse_number(spec[1], &lo) || !parse_number(spec[2], &hi) ||
        !parse_int(spec[3], &n))
      throw ConfigError("sweep.grid: bad " + kind + " arguments");
    if (n < 0) throw ConfigError("sweep.grid: negative point count");
    if (kind == "logspace" && (!(lo > 0.0) || !(hi > 0.0)))
      throw ConfigError("sweep.grid: logspace endpoints must be positive");
    for (long i = 0; i < n; ++i) {
      const double s = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
      grid.push_back(kind == "linspace"
                         ? lo + s * (hi - lo)
                         : std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo))));
    }
  } else {
    throw ConfigError("sweep.grid must start with values|linspace|logspace");
  }
  if (grid.size() > 10000)
    throw ConfigError("sweep.grid exceeds 10^4 points");
  return grid;
}

int thread_count(bool deterministic, size_t rows) {
  if (deterministic || rows <= 1) return 1;
  const char* env = std::getenv("NLKPP_THREADS");
  if (!env) return 1;
  const long n = std::strtol(env, nullptr, 10);
  if (n <= 1) return 1;
  return static_cast<int>(std::min<long>({n, static_cast<long>(rows), 64}));
}

}  // namespace

double sweep_expr_eval(const std::string& expr, const std::string& var,
                       double value) {
  // Grammar: NUMBER | VAR | 1/VAR | VAR^INT | NUMBER*VAR | NUMBER/VAR |
  //          NUMBER*VAR^INT. Whitespace is not allowed inside expressions
  // (the config list splitter already consumed it).
  double plain;
  if (parse_number(expr, &plain)) return plain;

  double factor = 1.0;
  bool divide = false;
  std::string rest = expr;
  const auto star = expr.find('*');
  const auto slash = expr.find('/');
  if (star != std::string::npos) {
    if (!parse_number(expr.substr(0, star), &factor))
      throw ConfigError("sweep expression '" + expr + "': bad coefficient");
    rest = expr.substr(star + 1);
  } else if (slash != std::string::npos) {
    if (!parse_number(expr.substr(0, slash), &factor))
      throw ConfigError("sweep expression '" + expr + "': bad coefficient");
    rest = expr.substr(slash + 1);
    divide = true;
  }

  long power = 1;
  const auto caret = rest.find('^');
  if (caret != std::string::npos) {
    if (divide)
      throw ConfigError("sweep expression '" + expr +
                        "': NUMBER/VAR^INT is not supported");
    if (!parse_int(rest.substr(caret + 1), &power))
      throw ConfigError("sweep expression '" + expr + "': bad exponent");
    rest = rest.substr(0, caret);
  }
  if (rest != var)
    throw ConfigError("sweep expression '" + expr +
                      "' does not reference the sweep variable '" + var + "'");
  const double powed = std::pow(value, static_cast<double>(power));
  return divide ? factor / powed : factor * powed;
}

SweepSpec SweepSpec::parse_file(const std::string& path) {
  SweepSpec spec;
  spec.cfg = ConfigMap::parse_file(path);
  return spec;
}

std::string run_sweep(const SweepSpec& spec, bool deterministic) {
  const ConfigMap& cfg = spec.cfg;
  const std::string var = cfg.get_string("sweep.variable");
  const std::string mode = cfg.get_string("sweep.mode", "bounds");
  if (mode != "bounds" && mode != "run")
    throw ConfigError("sweep.mode must be 'bounds' or 'run'");
  const bool run_mode = mode == "run";
  const std::vector<double> grid = build_grid(cfg);

  std::optional<double> u_inf_override;
  if (cfg.has("sweep.u_inf")) u_inf_override = cfg.get_double("sweep.u_inf");

  // Substitute the variable into every kernel.* value that parses as an
  // expression referencing it; all other keys pass through untouched.
  const auto instantiate = [&](double value) {
    ConfigMap row = cfg;
    for (const std::string& key : cfg.keys_with_prefix("kernel.")) {
      const std::string raw = cfg.get_string(key);
      if (key == "kernel.family" || key == "kernel.tail" ||
          key == "kernel.values")
        continue;
      row.set(key, num(sweep_expr_eval(raw, var, value)));
    }
    if (!row.has("name")) row.set("name", "sweep-row");
    return row;
  };

  std::ostringstream header;
  header << var
         << ",jump,l1_norm,kbar_l1,k_inf,u_inf,cstar_term1,cstar_term2,"
            "cstar_term3,eps_argmin,cstar,linf_bound,plateau_upper,"
            "plateau_lower";
  if (run_mode) header << ",front_speed,front_r2";
  header << "\n";

  const auto evaluate_row = [&](double value) {
    const ConfigMap row_cfg = instantiate(value);
    std::ostringstream os;
    os << num(value);
    const Kernel k = kernel_from_config(row_cfg, "kernel.");
    const KernelFacts f = k.facts();

    double speed = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> u_inf = u_inf_override;
    if (run_mode) {
      Scenario sc = scenario_from_config(row_cfg);
      sc.kernel = k;
      sc.claims.clear();  // sweeps report numbers; claims run one-off
      ScenarioResult res = execute_scenario(sc);
      if (!u_inf && f.jump >= 1.0) u_inf = res.max_u;
      try {
        const RateFit fit = fit_rate(res.run.series, Observable::FrontRight, 0,
                                     RateModel::Linear, sc.diag);
        speed = fit.coefficient;
        r2 = fit.r_squared;
      } catch (const DataError&) {
        // leave NaN: the row is still useful for its bound columns
      }
    }

    const BoundReport rep = bound_report(f, u_inf);
    os << ',' << num(f.jump) << ',' << num(f.l1_norm) << ','
       << (f.kbar_l1 ? num(*f.kbar_l1) : "nan") << ',' << num(f.k_inf) << ','
       << num(rep.u_inf) << ',' << num(rep.cstar_terms[0]) << ','
       << num(rep.cstar_terms[1]) << ',' << num(rep.cstar_terms[2]) << ','
       << num(rep.eps_argmin) << ',' << num(rep.cstar) << ','
       << num(rep.linf_bound) << ','
       << (rep.plateau_upper ? num(*rep.plateau_upper) : "nan") << ','
       << (rep.plateau_lower ? num(*rep.plateau_lower) : "nan");
    if (run_mode) os << ',' << num(speed) << ',' << num(r2);
    os << "\n";
    return os.str();
  };

  std::vector<std::string> rows(grid.size());
  const int threads = thread_count(deterministic, grid.size());
  if (threads <= 1) {
    for (size_t i = 0; i < grid.size(); ++i) rows[i] = evaluate_row(grid[i]);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::string> errors(grid.size());
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const size_t i = next.fetch_add(1);
          if (i >= grid.size()) return;
          try {
            rows[i] = evaluate_row(grid[i]);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (size_t i = 0; i < grid.size(); ++i)
      if (!errors[i].empty())
        throw ConfigError("sweep row " + std::to_string(i) + " (" + var + "=" +
                          num(grid[i]) + "): " + errors[i]);
  }

  std::string csv = header.str();
  for (const std::string& row : rows) csv += row;
  return csv;
}

}  // namespace nlkpp
