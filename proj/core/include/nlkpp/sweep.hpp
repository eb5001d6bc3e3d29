#pragma once

#include <string>
#include <vector>

#include "nlkpp/config.hpp"

namespace nlkpp {

// Parameter sweep over a single grid variable. Config schema:
//
//   sweep.variable = d
//   sweep.grid     = logspace 1e-4 1e-2 25   # or: linspace lo hi n
//                                            # or: values v1 v2 ...
//   sweep.mode     = bounds | run            # default bounds
//   sweep.u_inf    = <number>                # optional, bounds mode
//   kernel.family  = keller_segel
//   kernel.chi     = d^2                     # params may reference the
//   kernel.d       = d                       # variable via an expression
//
// Expressions are deliberately tiny: NUMBER, VAR, NUMBER*VAR, NUMBER/VAR,
// 1/VAR, VAR^INT, NUMBER*VAR^INT. In run mode the non-kernel keys form the
// scenario template and each row also reports the fitted front speed.
//
// Rows are independent; with NLKPP_THREADS > 1 they run on a thread pool,
// but results are assembled in grid order so the CSV is identical for any
// thread count. `deterministic` forces the sequential path outright.
struct SweepSpec {
  ConfigMap cfg;
  static SweepSpec parse_file(const std::string& path);
};

// Evaluate the sweep and return the CSV table (header + one row per grid
// point; empty grid -> header only). Grid size is capped at 10^4 points.
std::string run_sweep(const SweepSpec& spec, bool deterministic);

// Micro-expression evaluator used for per-row parameter substitution
// (exposed for tests).
double sweep_expr_eval(const std::string& expr, const std::string& var,
                       double value);

}  // namespace nlkpp
