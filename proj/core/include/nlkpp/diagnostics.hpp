#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "nlkpp/grid.hpp"

namespace nlkpp {

struct DiagnosticsConfig {
  std::vector<double> levels = {0.1, 0.5};  // front levels mu
  double eps = 0.1;                         // level-set split parameter
  double window_fraction = 0.5;             // default fit window: last half
  std::optional<std::pair<double, double>> fit_window;  // explicit [t_lo, t_hi]
};

// Total mass P = ∫ u (trapezoid).
double mass(const Field& u);

// Bulk burning rate V = ∫ u (1 - u) (trapezoid). Equals dP/dt along the flow.
double bulk_burning(const Field& u);

// Outermost crossings of level mu (linear interpolation between nodes).
// Absent when max u < mu.
struct FrontPair {
  double left = 0.0;
  double right = 0.0;
};
std::optional<FrontPair> front(const Field& u, double mu);

// Lebesgue measure of {u > level} with linearly interpolated cell fractions.
double superlevel_measure(const Field& u, double level);

// Measures of the burned / transition / unburned sets for eps in (0, 1/2):
//   good = |{u > 1-eps}|, bad = |{eps < u < 1-eps}|,
//   tail = |{u <= eps} ∩ domain|.
struct LevelMeasures {
  double good = 0.0;
  double bad = 0.0;
  double tail = 0.0;
};
LevelMeasures level_measures(const Field& u, double eps);

struct Record {
  double t = 0.0;
  double mass = 0.0;
  double bulk = 0.0;
  double u_max = 0.0;
  std::vector<std::optional<FrontPair>> fronts;  // one per configured level
  LevelMeasures levels;
  double domain_width = 0.0;
};

struct TimeSeries {
  std::vector<double> levels;
  double eps = 0.1;
  std::vector<Record> records;
};

// All per-snapshot observables in one pass over the field.
Record observe(const Field& u, const DiagnosticsConfig& diag);

// CSV with header
//   t,P,V,u_max,front_left_<mu>,front_right_<mu>,...,G_eps,B_eps,T_eps,domain_width
// one front column pair per configured level; absent fronts print nan.
// Doubles are printed with 17 significant digits so re-runs are byte-stable.
void write_csv(const TimeSeries& ts, std::ostream& os);

enum class RateModel { Linear, LogCorrected, Power, Exponential };

// Least-squares fit in linearizing coordinates:
//   Linear        x = c t + b
//   LogCorrected  x = c t - (3/2) log t + b
//   Power         y = C t^q         (log-log)
//   Exponential   y = C e^{r t}     (t vs log y)
// coefficient = c | c | q | r; r_squared is computed in the fit coordinates.
struct RateFit {
  RateModel model = RateModel::Linear;
  double coefficient = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// Fit over explicit points (t, y); throws DataError with fewer than 10 points
// or non-positive values where a log is taken.
RateFit fit_points(const std::vector<std::pair<double, double>>& pts,
                   RateModel model);

enum class Observable { MassP, FrontRight };

// Pull (t, y) points out of a series (front level chosen by index into
// ts.levels), restrict to the configured window, and fit. Records where the
// observable is absent are skipped; fewer than 10 surviving records is a
// DataError.
RateFit fit_rate(const TimeSeries& ts, Observable obs, int level_index,
                 RateModel model, const DiagnosticsConfig& diag);

// The window [t_lo, t_hi] that fit_rate uses: the explicit one if configured,
// otherwise the trailing window_fraction of the recorded time span.
std::pair<double, double> fit_window(const TimeSeries& ts,
                                     const DiagnosticsConfig& diag);

}  // namespace nlkpp
