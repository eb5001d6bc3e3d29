#include "nlkpp/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nlkpp/errors.hpp"

namespace nlkpp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

double mass(const Field& u) { return trapezoid(u); }

double bulk_burning(const Field& u) {
  Field g = u;
  for (double& v : g.values) v = v * (1.0 - v);
  return trapezoid(g);
}

std::optional<FrontPair> front(const Field& u, double mu) {
  if (!(mu > 0.0) || !(mu < 1.0))
    throw std::invalid_argument("front: level must lie in (0,1)");
  const int n = u.size();
  const std::vector<double>& a = u.values;
  int first = -1, last = -1;
  for (int i = 0; i < n; ++i) {
    if (a[i] >= mu) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return std::nullopt;
  FrontPair fp;
  if (first == 0) {
    fp.left = u.grid.node(0);
  } else {
    const double frac = (mu - a[first - 1]) / (a[first] - a[first - 1]);
    fp.left = u.grid.node(first - 1) + frac * u.grid.dx;
  }
  if (last == n - 1) {
    fp.right = u.grid.node(n - 1);
  } else {
    const double frac = (a[last] - mu) / (a[last] - a[last + 1]);
    fp.right = u.grid.node(last) + frac * u.grid.dx;
  }
  return fp;
}

double superlevel_measure(const Field& u, double level) {
  const int n = u.size();
  const double dx = u.grid.dx;
  const std::vector<double>& a = u.values;
  double m = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const bool lo = a[i] > level, hi = a[i + 1] > level;
    if (lo && hi) {
      m += dx;
    } else if (lo != hi) {
      const double frac = (level - a[i]) / (a[i + 1] - a[i]);
      m += lo ? frac * dx : (1.0 - frac) * dx;
    }
  }
  return m;
}

LevelMeasures level_measures(const Field& u, double eps) {
  if (!(eps > 0.0) || !(eps < 0.5))
    throw std::invalid_argument("level_measures: eps must lie in (0, 1/2)");
  LevelMeasures lm;
  const double above_eps = superlevel_measure(u, eps);
  lm.good = superlevel_measure(u, 1.0 - eps);
  lm.bad = above_eps - lm.good;
  lm.tail = u.grid.width() - above_eps;
  return lm;
}

Record observe(const Field& u, const DiagnosticsConfig& diag) {
  Record r;
  r.t = u.time;
  r.mass = mass(u);
  r.bulk = bulk_burning(u);
  r.u_max = field_max(u);
  r.fronts.reserve(diag.levels.size());
  for (double mu : diag.levels) r.fronts.push_back(front(u, mu));
  r.levels = level_measures(u, diag.eps);
  r.domain_width = u.grid.width();
  return r;
}

void write_csv(const TimeSeries& ts, std::ostream& os) {
  os << "t,P,V,u_max";
  char buf[64];
  for (double mu : ts.levels) {
    std::snprintf(buf, sizeof(buf), ",front_left_%g,front_right_%g", mu, mu);
    os << buf;
  }
  os << ",G_eps,B_eps,T_eps,domain_width\n";
  for (const Record& r : ts.records) {
    put(os, r.t);
    os << ',';
    put(os, r.mass);
    os << ',';
    put(os, r.bulk);
    os << ',';
    put(os, r.u_max);
    for (const auto& fp : r.fronts) {
      os << ',';
      put(os, fp ? fp->left : kNaN);
      os << ',';
      put(os, fp ? fp->right : kNaN);
    }
    os << ',';
    put(os, r.levels.good);
    os << ',';
    put(os, r.levels.bad);
    os << ',';
    put(os, r.levels.tail);
    os << ',';
    put(os, r.domain_width);
    os << '\n';
  }
}

RateFit fit_points(const std::vector<std::pair<double, double>>& pts,
                   RateModel model) {
  if (pts.size() < 10)
    throw DataError("fit needs at least 10 points");
  std::vector<double> xs, ys;
  xs.reserve(pts.size());
  ys.reserve(pts.size());
  for (const auto& [t, y] : pts) {
    double x = t, v = y;
    switch (model) {
      case RateModel::Linear:
        break;
      case RateModel::LogCorrected:
        if (!(t > 0.0)) throw DataError("log-corrected fit needs t > 0");
        v = y + 1.5 * std::log(t);
        break;
      case RateModel::Power:
        if (!(t > 0.0) || !(y > 0.0))
          throw DataError("power fit needs t > 0 and positive values");
        x = std::log(t);
        v = std::log(y);
        break;
      case RateModel::Exponential:
        if (!(y > 0.0)) throw DataError("exponential fit needs positive values");
        v = std::log(y);
        break;
    }
    xs.push_back(x);
    ys.push_back(v);
  }
  const size_t n = xs.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw DataError("fit abscissae are degenerate");
  RateFit fit;
  fit.model = model;
  fit.coefficient = sxy / sxx;
  fit.intercept = my - fit.coefficient * mx;
  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.coefficient * xs[i]);
    ss_res += e * e;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot)
                               : (ss_res <= 0.0 ? 1.0 : 0.0);
  fit.t_lo = pts.front().first;
  fit.t_hi = pts.back().first;
  return fit;
}

std::pair<double, double> fit_window(const TimeSeries& ts,
                                     const DiagnosticsConfig& diag) {
  if (diag.fit_window) return *diag.fit_window;
  if (ts.records.empty()) throw DataError("fit window: empty series");
  const double t0 = ts.records.front().t;
  const double t1 = ts.records.back().t;
  return {t1 - diag.window_fraction * (t1 - t0), t1};
}

RateFit fit_rate(const TimeSeries& ts, Observable obs, int level_index,
                 RateModel model, const DiagnosticsConfig& diag) {
  const auto [lo, hi] = fit_window(ts, diag);
  std::vector<std::pair<double, double>> pts;
  for (const Record& r : ts.records) {
    if (r.t < lo - 1e-12 || r.t > hi + 1e-12) continue;
    if (obs == Observable::MassP) {
      pts.emplace_back(r.t, r.mass);
    } else {
      if (level_index < 0 || level_index >= static_cast<int>(r.fronts.size()))
        throw DataError("fit_rate: level index out of range");
      if (!r.fronts[level_index]) continue;
      pts.emplace_back(r.t, r.fronts[level_index]->right);
    }
  }
  if (pts.size() < 10)
    throw DataError("fit_rate: fewer than 10 usable records in the window");
  RateFit fit = fit_points(pts, model);
  fit.t_lo = lo;
  fit.t_hi = hi;
  return fit;
}

}  // namespace nlkpp
