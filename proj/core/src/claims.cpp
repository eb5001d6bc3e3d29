#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "nlkpp/errors.hpp"
#include "nlkpp/scenario.hpp"

// Claim registry. Every claim is a falsifiable statement about one finished
// run, with its tolerance pinned here next to the reasoning that produced it.
// Tolerances are chosen once from refinement studies and error budgets; they
// are not tuned per run.

namespace nlkpp {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string bracket(double lo, double hi) {
  return "[" + num(lo) + ", " + num(hi) + "]";
}

ClaimResult make(const std::string& id, bool pass, double observed,
                 const std::string& detail) {
  ClaimResult c;
  c.id = id;
  c.pass = pass;
  c.observed = observed;
  c.detail = detail;
  return c;
}

ClaimResult fit_failure(const std::string& id, const DataError& err) {
  return make(id, false, std::numeric_limits<double>::quiet_NaN(),
              std::string("fit unavailable: ") + err.what());
}

std::string fit_info(const RateFit& f) {
  return "window " + bracket(f.t_lo, f.t_hi) + ", r2=" + num(f.r_squared);
}

// --- individual claims ------------------------------------------------------

// Front speed of the plain logistic equation. The continuum value is exactly
// 2; at dx=0.1, dt<=0.05 the first-order upwind advection is inactive (zero
// kernel) and the fitted speed lands within ~0.03 of 2 once the transient is
// windowed away. +/-0.15 · 2 would be sloppy; +/-0.075 (=[1.85, 2.05]) holds
// with a factor >2 margin at the shipped resolution and still fails if the
// scheme, the front finder, or the fit window regresses.
ClaimResult claim_speed_two(const ScenarioResult& r) {
  try {
    const RateFit f = fit_rate(r.run.series, Observable::FrontRight, 0,
                               RateModel::Linear, r.scenario.diag);
    const bool pass = f.coefficient >= 1.85 && f.coefficient <= 2.05;
    return make("speed-two", pass, f.coefficient,
                "front speed " + num(f.coefficient) + " vs " +
                    bracket(1.85, 2.05) + " (" + fit_info(f) + ")");
  } catch (const DataError& e) {
    return fit_failure("speed-two", e);
  }
}

// The front of the plain logistic equation lags the ray 2t by (3/2) log t.
// A fit that adds the log correction must explain the data at least as well
// as the uncorrected line; equality is allowed (both models share the linear
// term, so r2 can tie to rounding on short windows).
ClaimResult claim_log_delay(const ScenarioResult& r) {
  try {
    const RateFit lin = fit_rate(r.run.series, Observable::FrontRight, 0,
                                 RateModel::Linear, r.scenario.diag);
    const RateFit log = fit_rate(r.run.series, Observable::FrontRight, 0,
                                 RateModel::LogCorrected, r.scenario.diag);
    const double gain = log.r_squared - lin.r_squared;
    return make("log-delay", gain >= 0.0, gain,
                "r2(log-corrected) - r2(linear) = " + num(gain) +
                    " must be >= 0 (" + fit_info(log) + ")");
  } catch (const DataError& e) {
    return fit_failure("log-delay", e);
  }
}

// Measured front speed against the explicit upper bound c*. The lower edge
// 1.9 asserts the advection term cannot stall a front that spreads at >= 2
// in the local case (0.1 of discretization slack); the upper edge gives the
// bound 0.1 of slack for the same reason.
ClaimResult claim_speed_bracket(const ScenarioResult& r) {
  if (!std::isfinite(r.bounds.cstar))
    return make("speed-bracket", false,
                std::numeric_limits<double>::quiet_NaN(),
                "speed bound unavailable for this kernel");
  try {
    const RateFit f = fit_rate(r.run.series, Observable::FrontRight, 0,
                               RateModel::Linear, r.scenario.diag);
    const double lo = 1.9;
    const double hi = r.bounds.cstar + 0.1;
    const bool pass = f.coefficient >= lo && f.coefficient <= hi;
    return make("speed-bracket", pass, f.coefficient,
                "front speed " + num(f.coefficient) + " vs " +
                    bracket(lo, hi) + " with c*=" + num(r.bounds.cstar) +
                    " (" + fit_info(f) + ")");
  } catch (const DataError& e) {
    return fit_failure("speed-bracket", e);
  }
}

// Sup-norm bound max{1, (1-J)^{-1}}. The factor 1.01 absorbs the O(dx)
// overshoot of the explicit upwind advection at steep fronts; a genuine
// violation of the comparison bound grows with time and clears the factor
// immediately.
ClaimResult claim_linf(const ScenarioResult& r) {
  const double bound = r.bounds.linf_bound;
  if (!std::isfinite(bound))
    return make("linf", false, r.max_u,
                "no sup-norm bound available (jump >= 1)");
  const double cap = bound * 1.01;
  return make("linf", r.max_u <= cap, r.max_u,
              "max u over all steps " + num(r.max_u) + " vs bound " +
                  num(bound) + " * 1.01 = " + num(cap));
}

// Exact identity dP/dt = V of the continuum flow. One IMEX step commits an
// O(dt(dt+dx^2)) error against it (operator splitting + upwind flux bias),
// so the per-step residual |dP - dt V| divided by dt(dt+dx^2) is a scheme
// constant. Refinement studies put it near 0.4 for the shipped presets;
// 10 leaves an order of magnitude while still catching a conservation bug
// (a dropped flux term shows up as O(dt) residual and blows past 10).
ClaimResult claim_mass_identity(const ScenarioResult& r) {
  const double worst = r.mass_residual_factor;
  return make("mass-identity", worst <= 10.0, worst,
              "max over steps of |dP - dt V| / (dt (dt + dx^2)) = " +
                  num(worst) + " vs 10");
}

// With a repulsive saturating kernel the total mass grows exponentially with
// rate at most 1 (the reaction alone); the fitted rate must be positive and
// may exceed 1 only by fit noise. r2 > 0.99 insists the growth really is
// exponential on the trailing half, not a power law in disguise.
ClaimResult claim_exp_mass(const ScenarioResult& r) {
  try {
    const RateFit f = fit_rate(r.run.series, Observable::MassP,
                               0, RateModel::Exponential, r.scenario.diag);
    const bool pass =
        f.coefficient > 0.0 && f.coefficient <= 1.02 && f.r_squared > 0.99;
    return make("exp-mass", pass, f.coefficient,
                "mass growth rate " + num(f.coefficient) +
                    " must lie in (0, 1.02] with r2 > 0.99 (" + fit_info(f) +
                    ")");
  } catch (const DataError& e) {
    return fit_failure("exp-mass", e);
  }
}

// Fat-tailed repulsion accelerates the front to x ~ t^{1/(2 alpha)} = t^2 at
// alpha = 1/2, so the mass grows like t^2. The bracket [1.7, 2.4] allows the
// slow logarithmic drift of the measured exponent on finite windows while
// excluding both linear spreading (q=1, bounded speed) and the q >= 3
// signature of a blow-up.
ClaimResult claim_power_mass(const ScenarioResult& r) {
  try {
    const RateFit f = fit_rate(r.run.series, Observable::MassP, 0,
                               RateModel::Power, r.scenario.diag);
    const bool pass = f.coefficient >= 1.7 && f.coefficient <= 2.4;
    return make("power-mass", pass, f.coefficient,
                "mass exponent " + num(f.coefficient) + " vs " +
                    bracket(1.7, 2.4) + " (" + fit_info(f) + ")");
  } catch (const DataError& e) {
    return fit_failure("power-mass", e);
  }
}

// Saturating repulsive kernels flatten the invaded region onto a plateau
// inside [1/(2(1+|J|)), 1/(1+2 k_inf)]. The claim time-averages the interior
// maximum (|x| <= half the front position) over the fit window; 0.05 of
// slack on each edge covers the residual ripple of the discrete plateau.
ClaimResult claim_plateau(const ScenarioResult& r) {
  if (!r.bounds.plateau_upper || !r.bounds.plateau_lower)
    return make("plateau", false, std::numeric_limits<double>::quiet_NaN(),
                "plateau bracket unavailable for this kernel");
  const auto [t_lo, t_hi] = fit_window(r.run.series, r.scenario.diag);
  double sum = 0.0;
  int count = 0;
  const auto& records = r.run.series.records;
  for (size_t i = 0; i < records.size() && i < r.interior_max.size(); ++i) {
    if (records[i].t < t_lo - 1e-12 || records[i].t > t_hi + 1e-12) continue;
    if (!std::isfinite(r.interior_max[i])) continue;
    sum += r.interior_max[i];
    ++count;
  }
  if (count == 0)
    return make("plateau", false, std::numeric_limits<double>::quiet_NaN(),
                "no records with a resolved front inside the window");
  const double avg = sum / count;
  const double lo = *r.bounds.plateau_lower - 0.05;
  const double hi = *r.bounds.plateau_upper + 0.05;
  return make("plateau", avg >= lo && avg <= hi, avg,
              "time-averaged interior max " + num(avg) + " vs " +
                  bracket(lo, hi) + " over window " + bracket(t_lo, t_hi));
}

// Behind the front the solution locks onto the stable state 1. The window
// |x| <= 1.5 t stays strictly inside the invaded region (spreading speed
// >= 2 - o(1) for this preset), and 0.05 is the observed approach level at
// t=30 with a factor ~3 margin at the shipped resolution.
ClaimResult claim_converge_one(const ScenarioResult& r) {
  const Field& f = r.run.final_field;
  const double reach = 1.5 * r.scenario.sim.t_end;
  double sup = 0.0;
  for (int i = 0; i < f.size(); ++i)
    if (std::fabs(f.grid.node(i)) <= reach)
      sup = std::max(sup, std::fabs(f.values[i] - 1.0));
  if (f.grid.right() < reach) sup = std::max(sup, 1.0);  // uncovered => u=0
  return make("converge-one", sup < 0.05, sup,
              "sup |u - 1| over |x| <= " + num(reach) + " at t=" +
                  num(f.time) + " is " + num(sup) + " vs 0.05");
}

// For fat tails the burned+transition measure G+B grows like the front
// position ~ t^{1/alpha}, and the running time-average (1/t)∫(G+B) shares
// that exponent. Factors 0.75 and 1.3 on the target absorb the early
// transient that the running average drags into the fit window.
ClaimResult claim_level_growth(const ScenarioResult& r) {
  const KernelFacts facts = r.scenario.kernel.facts();
  if (!facts.power_alpha)
    return make("level-growth", false,
                std::numeric_limits<double>::quiet_NaN(),
                "claim requires a power-law kernel");
  const double target = 1.0 / *facts.power_alpha;
  const auto [t_lo, t_hi] = fit_window(r.run.series, r.scenario.diag);
  // Running average A(t_k) = (1/t_k) ∫_0^{t_k} (G+B) ds, trapezoid on records.
  std::vector<std::pair<double, double>> pts;
  const auto& records = r.run.series.records;
  double integral = 0.0;
  for (size_t i = 1; i < records.size(); ++i) {
    const double m_prev = records[i - 1].levels.good + records[i - 1].levels.bad;
    const double m_here = records[i].levels.good + records[i].levels.bad;
    integral += 0.5 * (m_prev + m_here) * (records[i].t - records[i - 1].t);
    const double t = records[i].t;
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12 || !(t > 0.0)) continue;
    pts.emplace_back(t, integral / t);
  }
  try {
    const RateFit f = fit_points(pts, RateModel::Power);
    const double lo = 0.75 * target;
    const double hi = 1.3 * target;
    const bool pass = f.coefficient >= lo && f.coefficient <= hi;
    return make("level-growth", pass, f.coefficient,
                "running-average growth exponent " + num(f.coefficient) +
                    " vs " + bracket(lo, hi) + " (target " + num(target) +
                    ", window " + bracket(t_lo, t_hi) + ")");
  } catch (const DataError& e) {
    return fit_failure("level-growth", e);
  }
}

using Evaluator = std::function<ClaimResult(const ScenarioResult&)>;

const std::vector<std::pair<std::string, Evaluator>>& registry() {
  static const std::vector<std::pair<std::string, Evaluator>> table = {
      {"speed-two", claim_speed_two},
      {"log-delay", claim_log_delay},
      {"speed-bracket", claim_speed_bracket},
      {"linf", claim_linf},
      {"mass-identity", claim_mass_identity},
      {"exp-mass", claim_exp_mass},
      {"power-mass", claim_power_mass},
      {"plateau", claim_plateau},
      {"converge-one", claim_converge_one},
      {"level-growth", claim_level_growth},
  };
  return table;
}

}  // namespace

std::vector<std::string> claim_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : registry()) {
    (void)fn;
    ids.push_back(id);
  }
  return ids;
}

std::vector<ClaimResult> evaluate_claims(const ScenarioResult& r) {
  std::vector<ClaimResult> out;
  for (const std::string& id : r.scenario.claims) {
    const auto& table = registry();
    const auto it =
        std::find_if(table.begin(), table.end(),
                     [&](const auto& row) { return row.first == id; });
    if (it == table.end()) throw ConfigError("unknown claim id '" + id + "'");
    out.push_back(it->second(r));
  }
  return out;
}

}  // namespace nlkpp
