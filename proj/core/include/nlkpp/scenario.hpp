#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlkpp/bounds.hpp"
#include "nlkpp/config.hpp"
#include "nlkpp/diagnostics.hpp"
#include "nlkpp/kernel.hpp"
#include "nlkpp/solver.hpp"

namespace nlkpp {

// Kernel from dotted config keys, e.g. with prefix "kernel.":
//   kernel.family  = zero | keller_segel | compact_bump | power_law | step |
//                    tabulated
//   keller_segel:  kernel.chi, kernel.d
//   compact_bump:  kernel.j_target, kernel.support_radius
//   power_law:     kernel.amplitude, kernel.alpha, kernel.sign (default +1)
//   step:          kernel.k_inf
//   tabulated:     kernel.values (list), kernel.spacing,
//                  kernel.tail = zero | constant
Kernel kernel_from_config(const ConfigMap& cfg, const std::string& prefix);

// Full scenario: what to run and which claims to evaluate afterwards.
struct Scenario {
  std::string name = "scenario";
  Kernel kernel = Kernel::zero();
  InitialData u0;
  SimConfig sim;
  DiagnosticsConfig diag;
  std::vector<std::string> claims;
  std::optional<double> u_inf;  // override for the speed-bound input
};

Scenario scenario_from_config(const ConfigMap& cfg);

// Built-in presets (embedded configs, overridable like any other key):
//   kpp-local, keller-segel, ks-converge, step, power-law
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
ConfigMap preset_config(const std::string& name);  // throws ConfigError

// Resolve a preset name or a config-file path, apply key=value overrides in
// order, and parse.
Scenario load_scenario(const std::string& preset_or_path,
                       const std::vector<std::string>& overrides = {});

struct ClaimResult {
  std::string id;
  bool pass = false;
  double observed = 0.0;
  std::string detail;  // "observed ... vs [lo, hi]" style explanation
};

// Everything a claim evaluator may need, produced by a single run.
struct ScenarioResult {
  Scenario scenario;
  RunResult run;
  BoundReport bounds;  // NaN branches when the kernel has no integrable part
  std::vector<ClaimResult> claims;
  // Fused per-step monitors:
  //   worst over steps of |dP - dt V| / (dt (dt + dx^2))
  double mass_residual_factor = 0.0;
  double max_u = 0.0;  // over all steps, after the implicit stage
  // Per-record max of u over the front interior |x| <= 0.5 * front_right(mu0)
  // (mu0 = first configured level); NaN while the front is absent.
  std::vector<double> interior_max;
};

// The claim registry ids, in registry order.
std::vector<std::string> claim_ids();

// Evaluate the scenario's claim list (tolerances live in claims.cpp, next to
// their rationale). Unknown ids throw ConfigError.
std::vector<ClaimResult> evaluate_claims(const ScenarioResult& r);

// Run + bounds + claims. Throws on config/hypothesis errors; numerical
// failures propagate as NumericalError.
ScenarioResult execute_scenario(const Scenario& sc);

// Write <name>.csv, <name>.bounds.txt, <name>.claims.txt, <name>.svg into
// out_dir (created if absent). Files are written to a temp name and renamed.
void write_artifacts(const ScenarioResult& r, const std::string& out_dir);

// Flat key=value rendering of a bound report (also used by the bounds
// subcommand), plus a one-line CSV form with header.
std::string bounds_text(const Kernel& k, const BoundReport& rep);
std::string bounds_csv(const Kernel& k, const BoundReport& rep);

// Tolerant report builder: fills every branch that is defined for the
// kernel's facts (cstar only when ||K||_1 < inf; plateau pair always).
BoundReport bound_report(const KernelFacts& facts,
                         std::optional<double> u_inf_override);

}  // namespace nlkpp
