#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlkpp/diagnostics.hpp"
#include "nlkpp/grid.hpp"
#include "nlkpp/kernel.hpp"

namespace nlkpp {

enum class Scheme { ImexBackwardEuler, ImexCrankNicolson };
enum class Reaction { Logistic, LinearGrowth, None };

struct SimConfig {
  double dx = 0.1;
  double dt_max = 0.1;        // must be <= 0.5
  double t_end = 10.0;
  double cfl_advection = 0.4; // dt <= cfl * dx / max|K*u|
  double edge_tol = 1e-8;     // domain-extension trigger level
  double extension_chunk = 2.0;  // symmetric growth per extension, length units
  Scheme scheme = Scheme::ImexCrankNicolson;
  Reaction reaction = Reaction::Logistic;
  double linf_cap = 10.0;     // blow-up guard
  double record_every = 0.5;
  double max_width = 2.0e5;   // resource cap on the domain, length units

  void validate() const;  // throws ConfigError
};

struct SimState {
  Field field;
  long step_count = 0;
  double last_dt = 0.0;
  int extensions = 0;
};

// Initial data. Indicator and bump are centered; the solver grid is staggered
// about the origin (no node at 0), so indicator edges never land on a node.
struct InitialData {
  enum class Kind { Indicator, Bump, Table, NarrowGaussian };
  Kind kind = Kind::Indicator;
  double radius = 1.0;  // a: support is [-a, a]
  double height = 1.0;  // indicator height / bump amplitude C (cos^2 profile)
  std::vector<double> table;  // full even-length profile at spacing table_dx
  double table_dx = 0.0;

  static InitialData indicator(double a, double height = 1.0);
  static InitialData bump(double a, double height);
  static InitialData tabulated(std::vector<double> values, double spacing);
  // Mass-1 Gaussian of width 3*dx; only valid for the linear drift runs.
  static InitialData narrow_gaussian();
};

// Analytic drift b(x) for the linear drift-diffusion runs u_t + (b u)_x = u_xx.
//   Constant:  b = value (a transport velocity; tail bounds use A = |value|)
//   SinePotential: b = v_x for v(x) = a0 sin(a1 x / a0), so
//                  ||v|| = a0, ||b|| = a1, ||b_x|| = a1^2/a0
struct DriftSpec {
  enum class Kind { Zero, Constant, SinePotential };
  Kind kind = Kind::Zero;
  double value = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;

  static DriftSpec none();
  static DriftSpec constant(double value);
  static DriftSpec sine_potential(double a0, double a1);

  double at(double x) const;
  double max_abs() const;
  double a2() const;  // ||v_xx|| for the sine potential
};

// Per-step observations, for invariant monitors and claim accumulators.
// mass_* and bulk use the trapezoid rule on the pre/post step fields.
struct StepInfo {
  double t_before = 0.0;
  double dt = 0.0;
  double mass_before = 0.0;
  double bulk_before = 0.0;
  double mass_after = 0.0;
  double min_before_clamp = 0.0;
  double max_after = 0.0;
};
using StepMonitor = std::function<void(const StepInfo&)>;
using RecordHook = std::function<void(const Field&)>;

enum class RunStatus { Complete, ResourceLimit };

struct RunResult {
  TimeSeries series;
  Field final_field;
  SimState state;
  RunStatus status = RunStatus::Complete;
  std::string message;
};

// Build the initial state on a symmetric staggered grid with margin
// extension_chunk on each side. Validates 0 < max u0 <= 1 unless
// allow_unnormalized (the linear drift runs take near-Dirac data).
SimState init(const InitialData& u0, const SimConfig& cfg,
              bool allow_unnormalized = false);

// One IMEX step: convolution -> explicit conservative upwind advection ->
// explicit reaction -> implicit diffusion (tridiagonal, homogeneous
// Dirichlet) -> clamp of [-1e-13, 0) values. Convenience form that rebuilds
// kernel samples every call; the run loops below cache them.
void step(SimState& state, const Kernel& k, const SimConfig& cfg);

// Full nonlocal run from fresh initial data.
RunResult run(const Kernel& k, const InitialData& u0, const SimConfig& cfg,
              const DiagnosticsConfig& diag, StepMonitor monitor = {},
              RecordHook hook = {});

// Continue a run from a saved state (same kernel/config). Stepping is fully
// sequential and state-determined, so a resumed run reproduces the
// uninterrupted one bit for bit.
RunResult run_from(SimState state, const Kernel& k, const SimConfig& cfg,
                   const DiagnosticsConfig& diag, StepMonitor monitor = {},
                   RecordHook hook = {});

// Linear drift-diffusion u_t + (b u)_x = u_xx with optional linear growth;
// used by the envelope / tail certifications. cfg.reaction must be None or
// LinearGrowth.
RunResult run_drift_diffusion(const DriftSpec& drift, const InitialData& u0,
                              const SimConfig& cfg,
                              const DiagnosticsConfig& diag,
                              StepMonitor monitor = {}, RecordHook hook = {});

// Flat binary checkpoint: magic, grid, time, counters, raw values.
// Byte layout is documented in the README; resuming in sequential mode is
// bit-identical to the uninterrupted run.
void save_checkpoint(const SimState& state, const std::string& path);
SimState load_checkpoint(const std::string& path);

}  // namespace nlkpp
