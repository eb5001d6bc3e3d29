#include "nlkpp/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "nlkpp/errors.hpp"

namespace nlkpp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// Exact integrals of a linear segment over [x0, x1] (w0 at x0, w1 at x1).
double seg_int_abs(double x0, double x1, double w0, double w1) {
  // The tabulated interpolant is sign-clamped, so w0 and w1 never straddle 0.
  return 0.5 * (std::fabs(w0) + std::fabs(w1)) * (x1 - x0);
}

double seg_int_x_abs(double x0, double x1, double w0, double w1) {
  // integral of x*|w(x)|, w linear: Simpson is exact for the quadratic.
  const double xm = 0.5 * (x0 + x1);
  const double wm = 0.5 * (std::fabs(w0) + std::fabs(w1));
  return (x1 - x0) / 6.0 *
         (x0 * std::fabs(w0) + 4.0 * xm * wm + x1 * std::fabs(w1));
}

}  // namespace

Kernel Kernel::zero() {
  Kernel k;
  k.family_ = KernelFamily::Zero;
  return k;
}

Kernel Kernel::keller_segel(double chi, double d) {
  if (!(chi > 0.0) || !(d > 0.0))
    throw HypothesisError("keller_segel kernel needs chi > 0 and d > 0");
  Kernel k;
  k.family_ = KernelFamily::KellerSegel;
  k.p1_ = chi;
  k.p2_ = d;
  return k;
}

Kernel Kernel::compact_bump(double j_target, double support_radius) {
  if (j_target == 0.0 || !(support_radius > 0.0))
    throw HypothesisError(
        "compact_bump kernel needs a nonzero jump and a positive radius");
  Kernel k;
  k.family_ = KernelFamily::CompactBump;
  k.p1_ = j_target;
  k.p2_ = support_radius;
  return k;
}

Kernel Kernel::power_law(double amplitude, double alpha, int sign) {
  if (!(amplitude > 0.0) || !(alpha > 0.0) || !(alpha < 1.0) ||
      (sign != 1 && sign != -1))
    throw HypothesisError(
        "power_law kernel needs amplitude > 0, alpha in (0,1), sign = +-1");
  Kernel k;
  k.family_ = KernelFamily::PowerLaw;
  k.p1_ = amplitude;
  k.p2_ = alpha;
  k.sign_ = sign;
  return k;
}

Kernel Kernel::step(double k_inf) {
  if (!(k_inf > 0.0)) throw HypothesisError("step kernel needs k_inf > 0");
  Kernel k;
  k.family_ = KernelFamily::Step;
  k.p1_ = k_inf;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> half_profile, double spacing,
                         TailExtension tail) {
  if (half_profile.empty() || !(spacing > 0.0))
    throw HypothesisError("tabulated kernel needs samples and spacing > 0");
  bool nonneg = true, nonpos = true, nondec = true, noninc = true;
  for (size_t i = 0; i < half_profile.size(); ++i) {
    if (!std::isfinite(half_profile[i]))
      throw HypothesisError("tabulated kernel sample is not finite");
    nonneg = nonneg && half_profile[i] >= 0.0;
    nonpos = nonpos && half_profile[i] <= 0.0;
    if (i > 0) {
      nondec = nondec && half_profile[i] >= half_profile[i - 1];
      noninc = noninc && half_profile[i] <= half_profile[i - 1];
    }
  }
  if (!nonneg && !nonpos)
    throw HypothesisError("tabulated kernel changes sign on (0,inf)");
  if (!nondec && !noninc)
    throw HypothesisError("tabulated kernel is not monotone on (0,inf)");
  Kernel k;
  k.family_ = KernelFamily::Tabulated;
  k.table_ = std::move(half_profile);
  k.table_dx_ = spacing;
  k.tail_ = tail;
  return k;
}

double Kernel::eval(double x) const {
  if (x == 0.0) return 0.0;
  const double r = std::fabs(x);
  double half = 0.0;  // K(r) for r > 0
  switch (family_) {
    case KernelFamily::Zero:
      half = 0.0;
      break;
    case KernelFamily::KellerSegel:
      half = -p1_ * std::exp(-r / std::sqrt(p2_)) / (2.0 * p2_);
      break;
    case KernelFamily::CompactBump:
      half = r >= p2_ ? 0.0 : -(p1_ / 2.0) * (1.0 - r / p2_);
      break;
    case KernelFamily::PowerLaw:
      half = sign_ * p1_ * std::pow(1.0 + r, -p2_);
      break;
    case KernelFamily::Step:
      half = p1_;
      break;
    case KernelFamily::Tabulated: {
      const double h = table_dx_;
      const size_t m = table_.size();
      const double first = 0.5 * h, last = (m - 0.5) * h;
      if (r >= last) {
        half = tail_ == TailExtension::Constant ? table_.back() : 0.0;
      } else if (r <= first || m == 1) {
        // continue the first segment's slope down to 0+, clamped to the
        // table's sign so the sign-constancy invariant survives
        const double slope = m > 1 ? (table_[1] - table_[0]) / h : 0.0;
        half = table_[0] + (r - first) * slope;
        if (table_[0] >= 0.0)
          half = std::max(half, 0.0);
        else
          half = std::min(half, 0.0);
      } else {
        const double s = (r - first) / h;
        const size_t i = std::min(static_cast<size_t>(s), m - 2);
        const double w = s - static_cast<double>(i);
        half = table_[i] * (1.0 - w) + table_[i + 1] * w;
      }
      break;
    }
  }
  return x > 0 ? half : -half;
}

KernelFacts Kernel::facts() const {
  KernelFacts f;
  switch (family_) {
    case KernelFamily::Zero:
      f.lp_finite_for = "all p in [1, inf]";
      f.kbar_l1 = 0.0;
      break;
    case KernelFamily::KellerSegel:
      f.jump = p1_ / p2_;
      f.l1_norm = p1_ / std::sqrt(p2_);
      f.lp_finite_for = "all p in [1, inf]";
      f.kbar_l1 = p1_;
      break;
    case KernelFamily::CompactBump:
      f.jump = p1_;
      f.l1_norm = std::fabs(p1_) * p2_ / 2.0;
      f.lp_finite_for = "all p in [1, inf]";
      f.kbar_l1 = std::fabs(p1_) * p2_ * p2_ / 6.0;
      break;
    case KernelFamily::PowerLaw:
      f.jump = -2.0 * sign_ * p1_;
      f.l1_norm = kInf;
      f.lp_finite_for = fmt("p in (%g, inf]", 1.0 / p2_);
      f.power_alpha = p2_;
      break;
    case KernelFamily::Step:
      f.jump = -2.0 * p1_;
      f.l1_norm = kInf;
      f.lp_finite_for = "p = inf only";
      f.k_inf = p1_;
      break;
    case KernelFamily::Tabulated: {
      const double h = table_dx_;
      const size_t m = table_.size();
      const double k0p =
          m > 1 ? 1.5 * table_[0] - 0.5 * table_[1] : table_[0];
      f.jump = -2.0 * k0p;
      f.k_inf =
          tail_ == TailExtension::Constant ? std::fabs(table_.back()) : 0.0;
      if (f.k_inf > 0.0) {
        f.l1_norm = kInf;
        f.lp_finite_for = "p = inf only";
      } else {
        // Exact integrals of the piecewise-linear interpolant (the same
        // function eval() returns, including the sign-clamped stub at 0).
        double l1 = 0.0, moment = 0.0;
        // stub over (0, h/2]: linear with the first segment's slope, clamped
        // to the table sign; the clamp can add one kink, so split once
        double x_prev, w_prev;
        {
          const double slope = m > 1 ? (table_[1] - table_[0]) / h : 0.0;
          double w0 = table_[0] - 0.5 * h * slope;
          if (table_[0] >= 0.0)
            w0 = std::max(w0, 0.0);
          else
            w0 = std::min(w0, 0.0);
          const double x_mid = 0.25 * h, x_end = 0.5 * h;
          const double w_mid = eval(x_mid), w_end = table_[0];
          l1 += seg_int_abs(0.0, x_mid, w0, w_mid) +
                seg_int_abs(x_mid, x_end, w_mid, w_end);
          moment += seg_int_x_abs(0.0, x_mid, w0, w_mid) +
                    seg_int_x_abs(x_mid, x_end, w_mid, w_end);
          x_prev = x_end;
          w_prev = w_end;
        }
        for (size_t i = 1; i < m; ++i) {
          const double x = (i + 0.5) * h;
          l1 += seg_int_abs(x_prev, x, w_prev, table_[i]);
          moment += seg_int_x_abs(x_prev, x, w_prev, table_[i]);
          x_prev = x;
          w_prev = table_[i];
        }
        f.l1_norm = 2.0 * l1;
        // ||Kbar||_1 = 2 * integral of y |K(y)| dy for sign-constant K
        f.kbar_l1 = 2.0 * moment;
        f.lp_finite_for = "all p in [1, inf]";
      }
      break;
    }
  }
  return f;
}

std::vector<double> Kernel::sample(double dx, double half_width) const {
  if (!(dx > 0.0)) throw std::invalid_argument("sample: dx must be positive");
  if (half_width < dx)
    throw std::invalid_argument("sample: half_width must be >= dx");
  const int per_side = static_cast<int>(std::floor(half_width / dx + 0.5));
  std::vector<double> out(2 * per_side);
  for (int k = 0; k < per_side; ++k) {
    const double v = eval((k + 0.5) * dx);
    out[per_side + k] = v;       // +( k+1/2) dx
    out[per_side - 1 - k] = -v;  // -( k+1/2) dx
  }
  return out;
}

std::string Kernel::describe() const {
  switch (family_) {
    case KernelFamily::Zero:
      return "zero";
    case KernelFamily::KellerSegel:
      return fmt("keller_segel(chi=%g, d=%g)", p1_, p2_);
    case KernelFamily::CompactBump:
      return fmt("compact_bump(j_target=%g, support_radius=%g)", p1_, p2_);
    case KernelFamily::PowerLaw:
      return fmt("power_law(amplitude=%g, alpha=%g)", p1_, p2_) +
             (sign_ < 0 ? " sign=-1" : "");
    case KernelFamily::Step:
      return fmt("step(k_inf=%g)", p1_);
    case KernelFamily::Tabulated:
      return fmt("tabulated(%g samples, spacing=%g)",
                 static_cast<double>(table_.size()), table_dx_) +
             (tail_ == TailExtension::Constant ? " tail=constant"
                                               : " tail=zero");
  }
  return "unknown";
}

}  // namespace nlkpp
