#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nlkpp/bounds.hpp"
#include "nlkpp/errors.hpp"
#include "nlkpp/kernel.hpp"

using namespace nlkpp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr double kPiLocal() { return 3.14159265358979323846; }

// Dense-grid minimizer oracle, independent of golden_section_min.
template <typename F>
double grid_min(F f, double lo, double hi, int n, double* argmin = nullptr) {
  double best = kInf, bx = lo;
  for (int i = 1; i < n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = f(x);
    if (v < best) {
      best = v;
      bx = x;
    }
  }
  if (argmin) *argmin = bx;
  return best;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("speed bound terms for the exponential kernel, u budget 2") {
  // chi = 0.5, d = 1: J = 0.5, ||K||_1 = 0.5, ||Kbar||_1 = 0.5, u = 2.
  const Kernel k = Kernel::keller_segel(0.5, 1.0);
  BoundInputs in{k.facts(), 2.0};
  const BoundReport rep = cstar(in);

  // Closed forms evaluated by hand:
  //   term1 = 2 + 0.5*2/2           = 2.5
  //   term2 = 2 sqrt((1+0.5)(1+1))  = 2 sqrt(3)
  CHECK(rep.cstar_terms[0] == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(rep.cstar_terms[1] ==
        doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));

  // term3 = 2 inf_eps sqrt((1 + 1/(16 eps))(1 + 1/(1 - eps))).
  // Oracle: dense scan with 1e5 points; golden section must match it.
  auto obj = [](double e) {
    return 2.0 * std::sqrt((1.0 + 1.0 / (16.0 * e)) * (1.0 + 1.0 / (1.0 - e)));
  };
  double eps_oracle = 0.0;
  const double t3_oracle = grid_min(obj, 0.0, 1.0, 100000, &eps_oracle);
  CHECK(rep.cstar_terms[2] <= t3_oracle + 1e-10);
  CHECK(rep.cstar_terms[2] >= t3_oracle - 1e-8);
  CHECK(std::fabs(rep.eps_argmin - eps_oracle) <= 2e-5);
  // Reported argmin reproduces the reported minimum.
  CHECK(obj(rep.eps_argmin) == doctest::Approx(rep.cstar_terms[2]).epsilon(1e-12));

  // Frozen values (measured once from the formulas above, kept as a
  // regression pin):
  CHECK(rep.cstar_terms[2] ==
        doctest::Approx(3.4154759474226499).epsilon(1e-12));
  CHECK(rep.eps_argmin == doctest::Approx(0.25539678913112179).epsilon(1e-6));

  CHECK(rep.cstar == doctest::Approx(2.5).epsilon(1e-15));  // term1 wins
  CHECK(rep.u_inf == 2.0);
  CHECK(rep.linf_bound == doctest::Approx(2.0).epsilon(1e-15));
  REQUIRE(rep.plateau_upper.has_value());
  REQUIRE(rep.plateau_lower.has_value());
  CHECK(*rep.plateau_upper == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*rep.plateau_lower == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("zero kernel degenerates every branch to the classical speed 2") {
  BoundInputs in{Kernel::zero().facts(), default_u_inf(Kernel::zero().facts())};
  CHECK(in.u_inf == 1.0);
  const BoundReport rep = cstar(in);
  for (double t : rep.cstar_terms) CHECK(t == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rep.cstar == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rep.linf_bound == 1.0);
  CHECK(*rep.plateau_upper == 1.0);
  CHECK(*rep.plateau_lower == 0.5);
}

TEST_CASE("term2 closed form for the compact bump") {
  const Kernel k = Kernel::compact_bump(-0.6, 2.0);
  BoundInputs in{k.facts(), 1.0};
  const BoundReport rep = cstar(in);
  CHECK(rep.cstar_terms[0] == doctest::Approx(2.0 + 0.6 / 2.0).epsilon(1e-15));
  const double expect2 =
      2.0 * std::sqrt((1.0 + 0.6 / 2.0) * (1.0 + 0.4 * 0.4));
  CHECK(rep.cstar_terms[1] == doctest::Approx(expect2).epsilon(1e-14));
  CHECK(rep.cstar <= rep.cstar_terms[0] + 1e-15);
  CHECK(rep.cstar <= rep.cstar_terms[1] + 1e-15);
  CHECK(rep.cstar <= rep.cstar_terms[2] + 1e-15);
}

TEST_CASE("kernels without an integrable antiderivative use term1 only") {
  KernelFacts facts;
  facts.jump = -0.5;
  facts.l1_norm = 1.0;
  facts.kbar_l1 = std::nullopt;
  const BoundReport rep = cstar({facts, 1.0});
  CHECK(rep.cstar_terms[0] == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(std::isnan(rep.cstar_terms[1]));
  CHECK(std::isnan(rep.cstar_terms[2]));
  CHECK(std::isnan(rep.eps_argmin));
  CHECK(rep.cstar == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(rep.linf_bound == 1.0);  // repulsive: max(1, 1/(1+0.5))
}

TEST_CASE("non-integrable kernels and bad budgets are rejected") {
  CHECK_THROWS_AS(cstar({Kernel::step(0.25).facts(), 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cstar({Kernel::power_law(1.0, 0.5).facts(), 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cstar({Kernel::zero().facts(), 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(cstar({Kernel::zero().facts(), -1.0}), std::invalid_argument);
}

TEST_CASE("sup-norm budget helpers") {
  CHECK(sup_norm_bound(0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sup_norm_bound(-1.0) == 1.0);
  CHECK(sup_norm_bound(0.0) == 1.0);
  CHECK(sup_norm_bound(1.0) == kInf);
  CHECK(sup_norm_bound(2.0) == kInf);

  KernelFacts f;
  f.jump = 0.9;
  CHECK(default_u_inf(f) == doctest::Approx(10.0).epsilon(1e-14));
  f.jump = -3.0;
  CHECK(default_u_inf(f) == 1.0);
  f.jump = 1.0;
  CHECK_THROWS_AS(default_u_inf(f), HypothesisError);
  f.jump = 1.5;
  CHECK_THROWS_AS(default_u_inf(f), HypothesisError);
}

TEST_CASE("plateau bracket for a constant-halves kernel") {
  const PlateauBracket pb = plateau_bracket(Kernel::step(0.25).facts());
  CHECK(pb.upper == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(pb.lower == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const PlateauBracket ks = plateau_bracket(Kernel::keller_segel(0.5, 1.0).facts());
  CHECK(ks.upper == 1.0);  // k_inf = 0
  CHECK(ks.lower == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("envelope exponent: branch1 closed form and inner infimum oracle") {
  const double a0 = 0.5, a1 = 0.25, a2 = 0.125, delta = 0.1, dt = 1.0, dz = 4.0;
  const EnvelopeExponent e = envelope_exponent(a0, a1, a2, delta, dt, dz);

  const double branch1 =
      a2 * dt / 2.0 - dz * dz / (4.0 * (1.0 + delta + a0 * a0) * dt);
  auto obj = [&](double eps) {
    return a1 * a1 * dt / (4.0 * eps) -
           dz * dz / (4.0 * (1.0 + delta + a0 * a0 / (1.0 - eps)) * dt);
  };
  const double branch2 = grid_min(obj, 0.0, 1.0, 100000);
  // For these parameters branch1 is the smaller one; confirm and pin.
  CHECK(branch1 < branch2);
  CHECK(e.value == doctest::Approx(delta * dt + branch1).epsilon(1e-14));
  CHECK(e.value == doctest::Approx(-2.800462962962963).epsilon(1e-12));
  CHECK(std::isfinite(e.eps_argmin));
  CHECK(e.eps_argmin > 0.0);
  CHECK(e.eps_argmin < 1.0);
  CHECK(obj(e.eps_argmin) <= branch2 + 1e-10);
}

TEST_CASE("envelope exponent with no velocity-gradient budget") {
  const EnvelopeExponent e = envelope_exponent(0.3, 0.0, 0.2, 0.05, 2.0, 3.0);
  const double branch1 = 0.2 - 9.0 / (4.0 * (1.05 + 0.09) * 2.0);
  CHECK(e.value == doctest::Approx(0.1 + branch1).epsilon(1e-14));
  CHECK(std::isnan(e.eps_argmin));

  CHECK_THROWS_AS(envelope_exponent(0.3, 0.1, 0.2, 0.05, 0.0, 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(envelope_exponent(0.3, 0.1, 0.2, 0.0, 2.0, 3.0),
                  std::invalid_argument);
}

TEST_CASE("gaussian sandwich formulas and validity gates") {
  // Uniform upper: closed-form recompute.
  CHECK(gaussian_upper_uniform(0.5, 2, 0.25) ==
        doctest::Approx(std::pow(1.0 / std::sqrt(kPiLocal()) + 0.25, 2))
            .epsilon(1e-14));

  // Tail upper: gate at dist > A dt.
  CHECK_FALSE(gaussian_upper_tail(1.0, 0.5, 0.4).has_value());
  const auto up = gaussian_upper_tail(1.0, 0.5, 2.0);
  REQUIRE(up.has_value());
  const double s = 2.0 - 0.5;
  const double expect_up =
      (1.0 / std::sqrt(2.0 * kPiLocal()) +
       std::sqrt(0.5) / (std::sqrt(4.0 * kPiLocal()) * s)) *
      std::exp(-s * s / 2.0);
  CHECK(*up == doctest::Approx(expect_up).epsilon(1e-14));

  // Lower tail: gate at dist > A sqrt(n) dt.
  CHECK_FALSE(gaussian_lower_tail(0.5, 4, 0.3, 0.2).has_value());
  const auto lo = gaussian_lower_tail(0.5, 4, 0.3, 1.0);
  REQUIRE(lo.has_value());
  const double sh = 1.0 + 0.5 * 2.0 * 0.3;
  const double expect_lo = std::exp(-sh * sh / 1.2) /
                           std::pow(16.0 * kPiLocal() * 0.3, 2.0);
  CHECK(*lo == doctest::Approx(expect_lo).epsilon(1e-14));

  CHECK_THROWS_AS(gaussian_upper_uniform(0.5, 0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_upper_tail(0.5, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_lower_tail(0.5, 1, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("indicator tail bound: gate and closed form") {
  CHECK_FALSE(drift_tail_bound(0.5, 4.0, 1.0, 3.9).has_value());
  const auto b = drift_tail_bound(0.5, 4.0, 1.0, -5.0);
  REQUIRE(b.has_value());
  const double s = 5.0 - 0.5 * 4.0 - 1.0;  // = 2
  const double expect = (1.0 / std::sqrt(kPiLocal())) *
                        (0.5 + 0.5 * 2.0 / s) * std::exp(-s * s / 16.0);
  CHECK(*b == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(drift_tail_bound(0.5, 0.0, 1.0, 9.0), std::invalid_argument);
  CHECK_THROWS_AS(drift_tail_bound(0.5, 4.0, 0.0, 9.0), std::invalid_argument);
}

TEST_CASE("rearrangement maximum against the analytic exponential integral") {
  // phi = e^{-x} on a fine table: max over admissible w is 2 int_0^{M/2} phi
  //                             = 2 (1 - e^{-M/2}).
  const double h = 0.001;
  std::vector<double> phi;
  for (int i = 0; i <= 10000; ++i) phi.push_back(std::exp(-i * h));
  const double got = monotone_rearrangement_max(phi, h, 2.0);
  CHECK(got == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-6));

  // Mass cap far beyond the table: integral saturates at the table content.
  std::vector<double> short_phi(phi.begin(), phi.begin() + 1001);  // [0, 1]
  const double sat = monotone_rearrangement_max(short_phi, h, 50.0);
  CHECK(sat == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-6));

  // Constant profile: exactly M (partial-cell handling is exact).
  std::vector<double> ones(200, 1.0);
  CHECK(monotone_rearrangement_max(ones, 0.1, 3.0) ==
        doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(monotone_rearrangement_max({1.0, 2.0}, 0.1, 1.0),
                  HypothesisError);  // increasing
  CHECK_THROWS_AS(monotone_rearrangement_max({1.0, -0.1}, 0.1, 1.0),
                  HypothesisError);  // negative
  CHECK_THROWS_AS(monotone_rearrangement_max({}, 0.1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(monotone_rearrangement_max({1.0}, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(monotone_rearrangement_max({1.0}, 0.1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("golden section: quadratic, multimodal prescan, bad bracket") {
  const MinResult q = golden_section_min(
      [](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-10);
  CHECK(std::fabs(q.x - 0.3) <= 1e-7);
  CHECK(q.value <= 1e-14);

  // Two local minima; the prescan must land in the global basin at 0.3.
  auto f = [](double x) { return std::sin(5.0 * kPiLocal() * x) + 0.5 * x; };
  const MinResult m = golden_section_min(f, 0.0, 1.0, 1e-10);
  double gx = 0.0;
  const double gv = grid_min(f, 0.0, 1.0, 100000, &gx);
  CHECK(m.value <= gv + 1e-9);
  CHECK(std::fabs(m.x - gx) <= 1e-4);
  // Global basin is the one near 0.3 (the tilt shifts the argmin slightly).
  CHECK(std::fabs(m.x - 0.3) <= 0.01);

  CHECK_THROWS_AS(golden_section_min([](double x) { return x; }, 1.0, 1.0, 1e-8),
                  std::invalid_argument);
}

}  // TEST_SUITE
