#pragma once

#include <optional>
#include <string>
#include <vector>

namespace nlkpp {

enum class KernelFamily { Zero, KellerSegel, CompactBump, PowerLaw, Step, Tabulated };

// How a tabulated half-profile continues past its last sample.
enum class TailExtension { Zero, Constant };

// Summary quantities of an advection kernel, as used by the a-priori bounds.
//
//   jump      J = lim_{x->0^-} 2 K(x)   (the size of the distributional atom
//             of dK at the origin; positive for attractive kernels)
//   l1_norm   ||K||_1, +inf when K is not integrable
//   kbar_l1   ||Kbar||_1 where Kbar' = K and Kbar vanishes at infinity;
//             absent when no such integrable antiderivative exists
//   k_inf     lim_{x->+inf} |K(x)|
//   power_alpha  decay exponent for the algebraic-tail family
struct KernelFacts {
  double jump = 0.0;
  double l1_norm = 0.0;
  std::string lp_finite_for;
  std::optional<double> kbar_l1;
  double k_inf = 0.0;
  std::optional<double> power_alpha;
};

// Odd advection kernel K, sign-constant and monotone on each half-line.
// eval(0) is 0 by convention (the principal value of an odd function).
class Kernel {
public:
  static Kernel zero();
  // K(x) = -chi sign(x) e^{-|x|/sqrt(d)} / (2d); attractive for chi > 0.
  static Kernel keller_segel(double chi, double d);
  // Triangular profile with jump j_target and support radius R:
  // K(x) = -(j_target/2) sign(x) (1 - |x|/R)_+.
  static Kernel compact_bump(double j_target, double support_radius);
  // K(x) = sign * amplitude * (1+|x|)^{-alpha} * sgn(x), alpha in (0,1).
  static Kernel power_law(double amplitude, double alpha, int sign = +1);
  // Constant-halves kernel K(x) = k_inf * sgn(x).
  static Kernel step(double k_inf);
  // Half-profile sampled at (k+1/2)*spacing, k = 0..m-1; extended oddly.
  static Kernel tabulated(std::vector<double> half_profile, double spacing,
                          TailExtension tail);

  KernelFamily family() const { return family_; }
  double eval(double x) const;
  KernelFacts facts() const;

  // Staggered samples at ±(k+1/2)*dx for (k+1/2)*dx <= half_width,
  // ordered left to right; exactly odd-symmetric by construction.
  // The offset avoids ever sampling the jump at the origin.
  std::vector<double> sample(double dx, double half_width) const;

  // True when dK is a single atom at the origin (constant halves), in which
  // case convolution against it reduces to running sums.
  bool pure_jump() const { return family_ == KernelFamily::Step; }

  // One-line parameter description for reports.
  std::string describe() const;

private:
  Kernel() = default;

  KernelFamily family_ = KernelFamily::Zero;
  double p1_ = 0.0;  // chi | j_target | amplitude | k_inf
  double p2_ = 0.0;  // d   | radius   | alpha
  int sign_ = +1;
  std::vector<double> table_;
  double table_dx_ = 0.0;
  TailExtension tail_ = TailExtension::Zero;
};

}  // namespace nlkpp
