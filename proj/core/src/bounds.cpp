#include "nlkpp/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlkpp/errors.hpp"

namespace nlkpp {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double sup_norm_bound(double jump) {
  if (jump >= 1.0) return kInf;
  return std::max(1.0, 1.0 / (1.0 - jump));
}

double default_u_inf(const KernelFacts& facts) {
  if (facts.jump >= 1.0)
    throw HypothesisError(
        "no a-priori sup-norm bound for jump >= 1; supply u_inf explicitly");
  return sup_norm_bound(facts.jump);
}

MinResult golden_section_min(const std::function<double(double)>& f, double lo,
                             double hi, double xtol, int prescan_points) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_min: bad bracket");
  // Bracketing pre-scan on interior points (the objectives may diverge at
  // the endpoints), then golden-section inside the best neighbouring pair.
  const int p = std::max(prescan_points, 3);
  double best_x = 0.0, best_v = kInf;
  int best_i = 1;
  auto at = [&](int i) { return lo + (hi - lo) * i / (p + 1.0); };
  for (int i = 1; i <= p; ++i) {
    const double v = f(at(i));
    if (v < best_v) {
      best_v = v;
      best_x = at(i);
      best_i = i;
    }
  }
  double a = at(best_i - 1), b = at(best_i + 1);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 400 && (b - a) > xtol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  const double vm = f(xm);
  if (vm <= best_v) return {xm, vm};
  return {best_x, best_v};
}

BoundReport cstar(const BoundInputs& in) {
  if (!(in.u_inf > 0.0))
    throw std::invalid_argument("cstar: u_inf must be positive");
  if (!(in.facts.l1_norm < kInf))
    throw std::invalid_argument("cstar: kernel is not integrable");

  const double u = in.u_inf;
  const double l1 = in.facts.l1_norm;
  const double aj = std::fabs(in.facts.jump);

  BoundReport rep;
  rep.u_inf = u;
  rep.linf_bound = sup_norm_bound(in.facts.jump);
  const PlateauBracket pb = plateau_bracket(in.facts);
  rep.plateau_upper = pb.upper;
  rep.plateau_lower = pb.lower;

  rep.cstar_terms[0] = 2.0 + l1 * u / 2.0;
  if (!in.facts.kbar_l1.has_value()) {
    rep.cstar_terms[1] = kNaN;
    rep.cstar_terms[2] = kNaN;
    rep.eps_argmin = kNaN;
    rep.cstar = rep.cstar_terms[0];
    return rep;
  }

  const double kb = *in.facts.kbar_l1;
  rep.cstar_terms[1] =
      2.0 * std::sqrt((1.0 + aj * u / 2.0) * (1.0 + kb * kb * u * u));

  const double A = l1 * l1 * u * u;
  const double B = kb * kb * u * u;
  auto objective = [&](double eps) {
    return 2.0 * std::sqrt((1.0 + A / (16.0 * eps)) * (1.0 + B / (1.0 - eps)));
  };
  const MinResult m = golden_section_min(objective, 0.0, 1.0, 1e-12, 64);
  rep.cstar_terms[2] = m.value;
  rep.eps_argmin = m.x;

  rep.cstar = std::min({rep.cstar_terms[0], rep.cstar_terms[1], rep.cstar_terms[2]});
  return rep;
}

PlateauBracket plateau_bracket(const KernelFacts& facts) {
  PlateauBracket pb;
  pb.upper = 1.0 / (1.0 + 2.0 * facts.k_inf);
  pb.lower = 1.0 / (2.0 * (1.0 + std::fabs(facts.jump)));
  return pb;
}

EnvelopeExponent envelope_exponent(double a0, double a1, double a2,
                                   double delta, double dt, double dz) {
  if (!(dt > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("envelope_exponent: need dt > 0 and delta > 0");
  const double z2 = dz * dz;
  const double branch1 = a2 * dt / 2.0 - z2 / (4.0 * (1.0 + delta + a0 * a0) * dt);
  EnvelopeExponent out;
  if (a1 == 0.0) {
    out.value = delta * dt + branch1;
    out.eps_argmin = kNaN;
    return out;
  }
  auto objective = [&](double eps) {
    return a1 * a1 * dt / (4.0 * eps) -
           z2 / (4.0 * (1.0 + delta + a0 * a0 / (1.0 - eps)) * dt);
  };
  const MinResult m = golden_section_min(objective, 0.0, 1.0, 1e-12, 64);
  out.value = delta * dt + std::min(branch1, m.value);
  out.eps_argmin = m.x;
  return out;
}

double gaussian_upper_uniform(double A, int n, double dt) {
  if (!(dt > 0.0) || n < 1)
    throw std::invalid_argument("gaussian_upper_uniform: need dt > 0, n >= 1");
  return std::pow(1.0 / std::sqrt(4.0 * kPi * dt) + A / 2.0, n);
}

std::optional<double> gaussian_upper_tail(double A, double dt, double dist) {
  if (!(dt > 0.0))
    throw std::invalid_argument("gaussian_upper_tail: need dt > 0");
  if (!(dist > A * dt)) return std::nullopt;
  const double shifted = dist - A * dt;
  const double pref = 1.0 / std::sqrt(4.0 * kPi * dt) +
                      A * std::sqrt(dt) / (std::sqrt(4.0 * kPi) * shifted);
  return pref * std::exp(-shifted * shifted / (4.0 * dt));
}

std::optional<double> gaussian_lower_tail(double A, int n, double dt,
                                          double dist) {
  if (!(dt > 0.0) || n < 1)
    throw std::invalid_argument("gaussian_lower_tail: need dt > 0, n >= 1");
  if (!(dist > A * std::sqrt(static_cast<double>(n)) * dt))
    return std::nullopt;
  const double shifted = dist + A * std::sqrt(static_cast<double>(n)) * dt;
  return std::exp(-shifted * shifted / (4.0 * dt)) /
         std::pow(16.0 * kPi * dt, n / 2.0);
}

std::optional<double> drift_tail_bound(double A, double T, double a, double x) {
  if (!(T > 0.0) || !(a > 0.0))
    throw std::invalid_argument("drift_tail_bound: need T > 0 and a > 0");
  const double r = std::fabs(x);
  if (r < A * T + a + 1.0) return std::nullopt;
  const double s = r - A * T - a;
  const double pref =
      (a / std::sqrt(kPi)) * (1.0 / std::sqrt(T) + A * std::sqrt(T) / s);
  return pref * std::exp(-s * s / (4.0 * T));
}

double monotone_rearrangement_max(const std::vector<double>& phi, double h,
                                  double M) {
  if (phi.empty() || !(h > 0.0) || !(M > 0.0))
    throw std::invalid_argument(
        "monotone_rearrangement_max: need samples, h > 0, M > 0");
  for (size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] < 0.0)
      throw HypothesisError("phi must be non-negative");
    if (i > 0 && phi[i] > phi[i - 1])
      throw HypothesisError("phi must be non-increasing");
  }
  // 2 * integral over [0, M/2] of the piecewise-linear interpolant,
  // taken as 0 beyond the table.
  const double half = M / 2.0;
  double integral = 0.0;
  for (size_t i = 0; i + 1 < phi.size(); ++i) {
    const double x0 = i * h, x1 = (i + 1) * h;
    if (x0 >= half) break;
    if (x1 <= half) {
      integral += 0.5 * (phi[i] + phi[i + 1]) * h;
    } else {
      const double w = (half - x0) / h;
      const double phi_half = phi[i] * (1.0 - w) + phi[i + 1] * w;
      integral += 0.5 * (phi[i] + phi_half) * (half - x0);
    }
  }
  return 2.0 * integral;
}

}  // namespace nlkpp
