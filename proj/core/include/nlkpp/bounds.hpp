#pragma once

#include <array>
#include <functional>
#include <optional>

#include "nlkpp/kernel.hpp"

namespace nlkpp {

// Inputs for the explicit a-priori bounds.
struct BoundInputs {
  KernelFacts facts;
  // Sup-norm budget ||u||_inf fed into the speed formulas. Helper
  // `default_u_inf` supplies max{1, (1-J)^{-1}} for J < 1.
  double u_inf = 1.0;
};

double default_u_inf(const KernelFacts& facts);

// Explicit spreading-speed bound: minimum of three admissible branches,
// each of which degenerates to the classical value 2 for the zero kernel.
//   term1 = 2 + ||K||_1 u/2
//   term2 = 2 sqrt((1 + |J| u/2)(1 + ||Kbar||_1^2 u^2))
//   term3 = 2 inf_{eps in (0,1)} sqrt((1 + ||K||_1^2 u^2 / (16 eps))
//                                     (1 + ||Kbar||_1^2 u^2 / (1 - eps)))
// When no integrable antiderivative exists, only term1 applies and the other
// entries are quiet NaN.
struct BoundReport {
  std::array<double, 3> cstar_terms{};  // NaN marks an inapplicable branch
  double cstar = 0.0;
  double eps_argmin = 0.0;              // NaN when term3 is inapplicable
  double linf_bound = 0.0;              // +inf when jump >= 1
  std::optional<double> plateau_upper;
  std::optional<double> plateau_lower;
  double u_inf = 0.0;
};

// Requires facts.l1_norm < inf (throws std::invalid_argument otherwise).
BoundReport cstar(const BoundInputs& in);

// Sup-norm bound from the comparison principle: max{1, (1-J)^{-1}} for J < 1,
// +inf for J >= 1 (no bound available on that side).
double sup_norm_bound(double jump);

// Long-time plateau bracket for kernels with a positive limit at infinity:
//   upper = 1/(1 + 2 k_inf)   (degenerates to 1 when k_inf = 0)
//   lower = 1/(2 (1 + |J|))
struct PlateauBracket {
  double upper = 1.0;
  double lower = 0.5;
};
PlateauBracket plateau_bracket(const KernelFacts& facts);

// Gaussian-in-space envelope exponent for the fundamental solution of
// drift-diffusion with velocity field v_x, where ||v|| <= a0, ||v_x|| <= a1,
// ||v_xx|| <= a2:
//
//   exponent = delta*dt + min( a2*dt/2 - dz^2 / (4 (1+delta+a0^2) dt),
//                              inf_eps [ a1^2 dt/(4 eps)
//                                        - dz^2 / (4 (1+delta+a0^2/(1-eps)) dt) ] )
//
// The multiplicative prefactor is a non-explicit constant times dt^{-1/2};
// callers compare exponents only (log Gamma + log(dt)/2 vs exponent + C).
struct EnvelopeExponent {
  double value = 0.0;
  double eps_argmin = 0.0;  // NaN when the inner infimum is inapplicable
};
EnvelopeExponent envelope_exponent(double a0, double a1, double a2,
                                   double delta, double dt, double dz);

// Gaussian sandwich for the n-fold drift-diffusion kernel with drift bound A.
// uniform upper:  (1/sqrt(4 pi dt) + A/2)^n
// tail upper (n = 1, dist > A dt):
//   (1/sqrt(4 pi dt) + A sqrt(dt) / (sqrt(4 pi) (dist - A dt)))
//     * exp(-(dist - A dt)^2 / (4 dt))
// lower (dist > A sqrt(n) dt):
//   exp(-(dist + A sqrt(n) dt)^2 / (4 dt)) / (16 pi dt)^{n/2}
// The tail forms return nullopt outside their range of validity.
double gaussian_upper_uniform(double A, int n, double dt);
std::optional<double> gaussian_upper_tail(double A, double dt, double dist);
std::optional<double> gaussian_lower_tail(double A, int n, double dt, double dist);

// Tail bound for drift-diffusion from an indicator of [-a, a] with
// ||v||_inf <= A, valid for |x| >= A T + a + 1:
//   u(T,x) <= (a/sqrt(pi)) (1/sqrt(T) + A sqrt(T)/(|x| - A T - a))
//               * exp(-(|x| - A T - a)^2 / (4 T))
// Returns nullopt when |x| < A T + a + 1.
std::optional<double> drift_tail_bound(double A, double T, double a, double x);

// Maximum of ∫ phi w over {0 <= w <= 2, ||w||_1 <= M} for non-increasing
// integrable phi: the mass piles at the origin, so the value is
// 2 ∫_0^{M/2} phi. phi is tabulated at 0, h, 2h, ... and integrated by
// composite trapezoid with an interpolated partial cell at M/2; beyond the
// table phi is taken to be 0. Throws HypothesisError if phi increases.
double monotone_rearrangement_max(const std::vector<double>& phi, double h,
                                  double M);

// Golden-section minimizer with a uniform bracketing pre-scan (the speed and
// envelope objectives are smooth but not certified unimodal).
struct MinResult {
  double x = 0.0;
  double value = 0.0;
};
MinResult golden_section_min(const std::function<double(double)>& f, double lo,
                             double hi, double xtol, int prescan_points = 64);

}  // namespace nlkpp
