#include "nlkpp/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "nlkpp/bounds.hpp"
#include "nlkpp/convolve.hpp"
#include "nlkpp/diagnostics.hpp"
#include "nlkpp/errors.hpp"
#include "nlkpp/solver.hpp"

// Certification suites: each one checks a family of a-priori bounds against
// an independent computation (randomized brute force, an analytic solution,
// or a full simulation). All randomness is fixed-seeded so the suites are
// reproducible runs, not statistical tests.

namespace nlkpp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void add_case(VerifyReport* rep, const std::string& label, double margin,
              bool pass) {
  VerifyCase c;
  c.label = label;
  c.margin = margin;
  c.pass = pass;
  rep->cases.push_back(c);
}

void finish(VerifyReport* rep) {
  rep->pass = true;
  double worst = kInf;
  std::string worst_label = "none";
  for (const VerifyCase& c : rep->cases) {
    if (!c.pass) rep->pass = false;
    if (c.margin < worst) {
      worst = c.margin;
      worst_label = c.label;
    }
  }
  std::ostringstream os;
  os << rep->target << ": " << (rep->pass ? "PASS" : "FAIL") << " ("
     << rep->cases.size() << " cases, tightest margin " << num(worst) << " at '"
     << worst_label << "')";
  rep->summary = os.str();
}

// --- conv-bounds -------------------------------------------------------------

// Random smooth non-negative field: a short trigonometric sum lifted by the
// sum of its amplitudes (so positivity is analytic, not clipped) and sampled
// at both resolutions from the same continuum function.
struct TrigField {
  std::array<double, 6> amp{};
  std::array<double, 6> phase{};
  double scale = 1.0;
  double length = 12.0;

  double operator()(double x) const {
    double f = 0.0, lift = 0.0;
    for (int k = 0; k < 6; ++k) {
      f += amp[k] * std::cos(2.0 * kPi * (k + 1) * x / length + phase[k]);
      lift += std::fabs(amp[k]);
    }
    return scale * (f + lift);
  }
};

struct ConvExcess {
  double conv = 0.0;   // worst max|K*u| - (||K||_1 / 2) max u
  double deriv = 0.0;  // worst max|(K*u)_x| - |J| max u
};

ConvExcess conv_excess(const Kernel& k, double dx, int fields, unsigned seed) {
  const double half = 6.0;
  const int per_side = static_cast<int>(std::floor(half / dx + 0.5));
  Grid g;
  g.dx = dx;
  g.n = 2 * per_side;
  g.x0 = -(per_side - 0.5) * dx;

  const KernelFacts facts = k.facts();
  ConvExcess worst;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);

  ConvolutionEngine engine(k, g, 2.0 * g.width());
  std::vector<double> v(g.n);
  for (int f = 0; f < fields; ++f) {
    TrigField tf;
    for (int j = 0; j < 6; ++j) {
      tf.amp[j] = unit(rng);
      tf.phase[j] = kPi * (unit(rng) + 1.0);
    }
    tf.scale = mag(rng);

    Field u;
    u.grid = g;
    u.values.resize(g.n);
    double umax = 0.0;
    for (int i = 0; i < g.n; ++i) {
      u.values[i] = tf(g.node(i));
      umax = std::max(umax, u.values[i]);
    }

    engine.apply(u.values, v);
    Field vf;
    vf.grid = g;
    vf.values = v;
    const Field vx = differentiate(vf);

    double vmax = 0.0, dmax = 0.0;
    for (int i = 0; i < g.n; ++i) {
      vmax = std::max(vmax, std::fabs(vf.values[i]));
      dmax = std::max(dmax, std::fabs(vx.values[i]));
    }
    if (std::isfinite(facts.l1_norm))
      worst.conv = std::max(worst.conv, vmax - 0.5 * facts.l1_norm * umax);
    worst.deriv = std::max(worst.deriv, dmax - std::fabs(facts.jump) * umax);
  }
  return worst;
}

}  // namespace

VerifyReport verify_conv_bounds() {
  VerifyReport rep;
  rep.target = "conv-bounds";

  struct Fam {
    std::string label;
    Kernel kernel;
  };
  std::vector<double> ks_profile;
  for (int i = 0; i < 40; ++i)
    ks_profile.push_back(-0.25 * std::exp(-(i + 0.5) * 0.1));
  const std::vector<Fam> families = {
      {"zero", Kernel::zero()},
      {"keller_segel(0.5,1)", Kernel::keller_segel(0.5, 1.0)},
      {"compact_bump(-0.6,2)", Kernel::compact_bump(-0.6, 2.0)},
      {"power_law(1,0.5)", Kernel::power_law(1.0, 0.5, +1)},
      {"step(0.25)", Kernel::step(0.25)},
      {"tabulated(40 pts)", Kernel::tabulated(ks_profile, 0.1,
                                              TailExtension::Zero)},
  };

  int fam_index = 0;
  for (const Fam& fam : families) {
    const KernelFacts facts = fam.kernel.facts();
    const unsigned seed = 9000u + 17u * fam_index++;
    const ConvExcess coarse = conv_excess(fam.kernel, 0.04, 200, seed);
    const ConvExcess fine = conv_excess(fam.kernel, 0.02, 200, seed);

    const double umax_scale = 4.0;  // fields are built with max u <= ~4
    if (std::isfinite(facts.l1_norm) && facts.l1_norm > 0.0) {
      const double scale = 0.5 * facts.l1_norm * umax_scale;
      add_case(&rep, fam.label + " conv excess, dx=0.04",
               0.02 * scale - coarse.conv, coarse.conv <= 0.02 * scale);
      const double allowed =
          std::max(coarse.conv / 3.0, 1e-12 * std::max(scale, 1.0));
      add_case(&rep, fam.label + " conv excess shrink 3x", allowed - fine.conv,
               fine.conv <= allowed);
    }
    if (std::fabs(facts.jump) > 0.0) {
      const double scale = std::fabs(facts.jump) * umax_scale;
      add_case(&rep, fam.label + " deriv excess, dx=0.04",
               0.02 * scale - coarse.deriv, coarse.deriv <= 0.02 * scale);
      const double allowed =
          std::max(coarse.deriv / 3.0, 1e-12 * std::max(scale, 1.0));
      add_case(&rep, fam.label + " deriv excess shrink 3x",
               allowed - fine.deriv, fine.deriv <= allowed);
    } else {
      add_case(&rep, fam.label + " conv/deriv identically zero",
               -std::max(coarse.conv, coarse.deriv),
               std::max({coarse.conv, coarse.deriv, fine.conv, fine.deriv}) <=
                   1e-14);
    }
  }
  finish(&rep);
  return rep;
}

// --- hill --------------------------------------------------------------------

VerifyReport verify_hill() {
  VerifyReport rep;
  rep.target = "hill";

  for (const double A : {0.25, 1.0}) {
    double min_uniform = kInf, min_tail = kInf, min_lower = kInf;
    int uniform_n = 0, tail_n = 0, lower_n = 0;
    bool ok_uniform = true, ok_tail = true, ok_lower = true;

    for (int it = 0; it < 25; ++it) {
      const double t =
          0.1 * std::pow(5.0 / 0.1, it / 24.0);  // log-spaced in [0.1, 5]
      for (int ix = 0; ix < 20; ++ix) {
        // Signed positions out to A t + 8 sqrt(t): both gates get exercised.
        const double span = A * t + 8.0 * std::sqrt(t);
        const double x = -span + 2.0 * span * ix / 19.0;
        const double exact =
            std::exp(-(x - A * t) * (x - A * t) / (4.0 * t)) /
            std::sqrt(4.0 * kPi * t);
        const double dist = std::fabs(x);

        const double uniform = gaussian_upper_uniform(A, 1, t);
        ++uniform_n;
        min_uniform = std::min(min_uniform, uniform - exact);
        if (!(exact <= uniform * (1.0 + 1e-12))) ok_uniform = false;

        if (const auto tail = gaussian_upper_tail(A, t, dist)) {
          ++tail_n;
          min_tail = std::min(min_tail, *tail - exact);
          if (!(exact <= *tail * (1.0 + 1e-12))) ok_tail = false;
        }
        if (const auto lower = gaussian_lower_tail(A, 1, t, dist)) {
          ++lower_n;
          min_lower = std::min(min_lower, exact - *lower);
          if (!(*lower <= exact * (1.0 + 1e-12))) ok_lower = false;
        }
      }
    }
    const std::string tag = "A=" + num(A);
    add_case(&rep, tag + " uniform upper (" + std::to_string(uniform_n) +
                 " pts)", min_uniform, ok_uniform && uniform_n >= 500);
    add_case(&rep, tag + " tail upper (" + std::to_string(tail_n) + " pts)",
             min_tail, ok_tail && tail_n >= 100);
    add_case(&rep, tag + " lower (" + std::to_string(lower_n) + " pts)",
             min_lower, ok_lower && lower_n >= 100);
  }
  finish(&rep);
  return rep;
}

// --- fp-tail -------------------------------------------------------------------

VerifyReport verify_fp_tail() {
  VerifyReport rep;
  rep.target = "fp-tail";

  const double A = 0.5, T = 4.0, a = 1.0;
  SimConfig cfg;
  cfg.dx = 0.05;
  cfg.dt_max = 0.01;
  cfg.t_end = T;
  cfg.cfl_advection = 0.4;
  cfg.edge_tol = 1e-12;
  cfg.extension_chunk = 2.0;
  cfg.reaction = Reaction::None;
  cfg.record_every = 1.0;
  DiagnosticsConfig diag;

  const RunResult rr = run_drift_diffusion(DriftSpec::constant(A),
                                           InitialData::indicator(a, 1.0), cfg,
                                           diag);
  const Field& u = rr.final_field;
  int checked = 0, violations = 0;
  double min_margin = kInf;
  for (int i = 0; i < u.size(); ++i) {
    const double x = u.grid.node(i);
    const auto bound = drift_tail_bound(A, T, a, x);
    if (!bound) continue;
    ++checked;
    min_margin = std::min(min_margin, *bound - u.values[i]);
    if (!(u.values[i] <= *bound * (1.0 + 1e-9))) ++violations;
  }
  add_case(&rep, "tail bound at " + std::to_string(checked) +
               " nodes with |x| >= " + num(A * T + a + 1.0),
           min_margin, violations == 0 && checked >= 50);
  finish(&rep);
  return rep;
}

// --- gamma-envelope ------------------------------------------------------------

VerifyReport verify_gamma_envelope() {
  VerifyReport rep;
  rep.target = "gamma-envelope";

  const double a0 = 0.5, a1 = 0.25, delta = 0.1;
  const DriftSpec drift = DriftSpec::sine_potential(a0, a1);
  const double a2 = drift.a2();

  SimConfig cfg;
  cfg.dx = 0.05;
  cfg.dt_max = 0.01;
  cfg.t_end = 4.0;
  cfg.cfl_advection = 0.4;
  cfg.edge_tol = 1e-12;
  cfg.extension_chunk = 2.0;
  cfg.reaction = Reaction::None;
  cfg.record_every = 0.25;
  DiagnosticsConfig diag;

  std::vector<std::pair<double, double>> sup_curve;
  bool all_finite = true;
  RecordHook hook = [&](const Field& f) {
    if (f.time < 0.5 - 1e-9) return;  // early-time snapshots: delta blur
    double s = -kInf;
    for (int i = 0; i < f.size(); ++i) {
      if (!(f.values[i] > 0.0)) continue;
      const double env =
          envelope_exponent(a0, a1, a2, delta, f.time, f.grid.node(i)).value;
      s = std::max(s,
                   std::log(f.values[i]) + 0.5 * std::log(f.time) - env);
    }
    if (!std::isfinite(s)) all_finite = false;
    sup_curve.emplace_back(f.time, s);
  };

  run_drift_diffusion(drift, InitialData::narrow_gaussian(), cfg, diag, {},
                      hook);

  add_case(&rep, "sup finite on " + std::to_string(sup_curve.size()) +
               " snapshots in [0.5, 4]",
           all_finite ? 1.0 : -1.0, all_finite && sup_curve.size() >= 10);
  try {
    const RateFit fit = fit_points(sup_curve, RateModel::Linear);
    add_case(&rep, "sup growth slope <= 0.01", 0.01 - fit.coefficient,
             fit.coefficient <= 0.01);
  } catch (const DataError&) {
    add_case(&rep, "sup growth slope <= 0.01 (fit unavailable)", -1.0, false);
  }
  finish(&rep);
  return rep;
}

// --- phi-max -------------------------------------------------------------------

namespace {

// Trapezoid-per-cell integral of the tabulated phi against a cell-constant w.
double cell_integral(const std::vector<double>& phi, double h,
                     const std::vector<double>& w) {
  double s = 0.0;
  for (size_t k = 0; k + 1 < phi.size() && k < w.size(); ++k)
    s += w[k] * 0.5 * (phi[k] + phi[k + 1]) * h;
  return s;
}

// Fine Simpson quadrature of the piecewise-linear interpolant of phi over
// [0, b] — an independent evaluation of the extremal integral.
double fine_integral(const std::vector<double>& phi, double h, double b) {
  const double span = (phi.size() - 1) * h;
  b = std::min(b, span);
  if (b <= 0.0) return 0.0;
  const int n = 200000;  // even
  const auto at = [&](double x) {
    const double s = x / h;
    const size_t k = std::min(static_cast<size_t>(s), phi.size() - 2);
    const double f = s - k;
    return phi[k] * (1.0 - f) + phi[k + 1] * f;
  };
  const double dz = b / n;
  double acc = at(0.0) + at(b);
  for (int i = 1; i < n; ++i) acc += at(i * dz) * (i % 2 ? 4.0 : 2.0);
  return acc * dz / 3.0;
}

}  // namespace

VerifyReport verify_phi_max() {
  VerifyReport rep;
  rep.target = "phi-max";

  std::mt19937 rng(77u);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (int cs = 0; cs < 20; ++cs) {
    const int len = 50 + static_cast<int>(u01(rng) * 150);
    const double h = 0.02 + 0.08 * u01(rng);
    std::vector<double> phi(len);
    phi[0] = 0.5 + 1.5 * u01(rng);
    for (int i = 1; i < len; ++i) {
      const double factor = (u01(rng) < 0.2) ? 1.0 : (0.75 + 0.25 * u01(rng));
      phi[i] = phi[i - 1] * factor;
    }
    const double span = (len - 1) * h;
    const double M = (0.1 + 1.1 * u01(rng)) * span;

    const double closed = monotone_rearrangement_max(phi, h, M);

    // Randomized brute force over admissible cell-constant candidates.
    double best = -kInf;
    const int cells = len - 1;
    std::vector<double> w(cells);
    for (int trial = 0; trial < 10000; ++trial) {
      double mass = 0.0;
      if (trial % 4 == 3) {
        // Near-extremal candidates: full height up front, noisy shoulder.
        const double front = M / 2.0 * (0.9 + 0.2 * u01(rng));
        for (int k = 0; k < cells; ++k) {
          const double cell_lo = k * h;
          double val = 0.0;
          if (cell_lo + h <= front) val = 2.0;
          else if (cell_lo < front) val = 2.0 * (front - cell_lo) / h;
          if (val > 0.0 && u01(rng) < 0.1) val *= u01(rng);
          w[k] = val;
          mass += val * h;
        }
      } else {
        const double p = 0.1 + 0.8 * u01(rng);
        for (int k = 0; k < cells; ++k) {
          w[k] = (u01(rng) < p) ? 2.0 * u01(rng) : 0.0;
          mass += w[k] * h;
        }
      }
      if (mass > M) {
        const double shrink = M / mass;
        for (double& v : w) v *= shrink;
      }
      best = std::max(best, cell_integral(phi, h, w));
    }

    add_case(&rep, "case " + std::to_string(cs) + " brute force below max",
             closed - best, best <= closed + 1e-9);

    const double extremal = 2.0 * fine_integral(phi, h, M / 2.0);
    add_case(&rep, "case " + std::to_string(cs) + " extremal attains max",
             1e-6 - std::fabs(extremal - closed),
             std::fabs(extremal - closed) <= 1e-6);
  }
  finish(&rep);
  return rep;
}

// --- dispatch ------------------------------------------------------------------

std::vector<std::string> verify_targets() {
  return {"gamma-envelope", "hill", "fp-tail", "conv-bounds", "phi-max"};
}

VerifyReport run_verify(const std::string& target) {
  if (target == "gamma-envelope") return verify_gamma_envelope();
  if (target == "hill") return verify_hill();
  if (target == "fp-tail") return verify_fp_tail();
  if (target == "conv-bounds") return verify_conv_bounds();
  if (target == "phi-max") return verify_phi_max();
  throw ConfigError("unknown verify target '" + target + "'");
}

std::string verify_text(const VerifyReport& rep) {
  std::ostringstream os;
  os << rep.summary << "\n";
  for (const VerifyCase& c : rep.cases)
    os << "  " << (c.pass ? "ok  " : "FAIL") << " margin=" << num(c.margin)
       << "  " << c.label << "\n";
  return os.str();
}

}  // namespace nlkpp
