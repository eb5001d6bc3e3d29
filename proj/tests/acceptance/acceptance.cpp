// Acceptance suite: twelve end-to-end criteria covering the shipped presets,
// the five certification suites, and the two asymptotic sweeps. Each preset
// runs exactly once; every criterion prints one PASS/FAIL line; the exit code
// is the number of failures.
//
// Tolerances are pinned here on purpose. They come from refinement studies
// and the a-priori bounds, not from tuning against any particular run.

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlkpp/errors.hpp"
#include "nlkpp/scenario.hpp"
#include "nlkpp/sweep.hpp"
#include "nlkpp/verify.hpp"

using namespace nlkpp;

namespace {

int g_failures = 0;
int g_index = 0;

void report(bool pass, const std::string& description,
            const std::string& detail) {
  ++g_index;
  if (!pass) ++g_failures;
  std::printf("%s criterion-%02d %s — %s\n", pass ? "PASS" : "FAIL", g_index,
              description.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Preset results, each computed once. A preset that throws stores the error
// text instead; criteria that depend on it fail with that explanation.
struct PresetOutcome {
  std::optional<ScenarioResult> result;
  std::string error;
};

const ClaimResult* find_claim(const ScenarioResult& r, const std::string& id) {
  for (const ClaimResult& c : r.claims)
    if (c.id == id) return &c;
  return nullptr;
}

// AND of the named claims on one preset, with a detail string that quotes
// each claim's own explanation.
void claim_criterion(const std::map<std::string, PresetOutcome>& runs,
                     const std::string& preset,
                     const std::vector<std::string>& ids,
                     const std::string& description,
                     const std::string& extra_detail = "",
                     bool extra_pass = true) {
  const PresetOutcome& out = runs.at(preset);
  if (!out.result) {
    report(false, description, "preset '" + preset + "' failed: " + out.error);
    return;
  }
  bool pass = extra_pass;
  std::ostringstream detail;
  if (!extra_detail.empty()) detail << extra_detail;
  bool first = extra_detail.empty();
  for (const std::string& id : ids) {
    const ClaimResult* c = find_claim(*out.result, id);
    if (!c) {
      pass = false;
      detail << (first ? "" : "; ") << id << ": not evaluated";
      first = false;
      continue;
    }
    pass = pass && c->pass;
    detail << (first ? "" : "; ") << id << ": " << c->detail;
    first = false;
  }
  report(pass, description, detail.str());
}

void verify_criterion(const std::string& target,
                      const std::string& description) {
  try {
    const VerifyReport rep = run_verify(target);
    int failed = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const VerifyCase& c : rep.cases) {
      if (!c.pass) ++failed;
      worst = std::min(worst, c.margin);
    }
    std::ostringstream detail;
    detail << rep.cases.size() << " cases, " << failed
           << " failed, worst margin " << num(worst);
    report(rep.pass && failed == 0, description, detail.str());
  } catch (const std::exception& e) {
    report(false, description, std::string("suite threw: ") + e.what());
  }
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    cells.push_back(cur);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

int main() {
  std::map<std::string, PresetOutcome> runs;
  for (const std::string& name : preset_names()) {
    std::fprintf(stderr, "[acceptance] running preset %s...\n", name.c_str());
    PresetOutcome out;
    try {
      out.result = execute_scenario(load_scenario(name));
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    runs.emplace(name, std::move(out));
  }

  // 1. Local equation: fitted front speed in [1.85, 2.05] and the
  //    log-corrected front model explains the data at least as well.
  claim_criterion(runs, "kpp-local", {"speed-two", "log-delay"},
                  "local-front-speed-two-with-log-delay");

  // 2. Integrable repulsion: measured speed within [1.9, cstar + 0.1] where
  //    the explicit bound evaluates to 2.5, and sup u respects the
  //    comparison bound 2 with 1% slack.
  {
    const PresetOutcome& out = runs.at("keller-segel");
    bool cstar_ok = false;
    std::string extra = "preset unavailable";
    if (out.result) {
      const double cstar = out.result->bounds.cstar;
      cstar_ok = std::fabs(cstar - 2.5) <= 1e-12;
      extra = "explicit bound cstar = " + num(cstar) + " (expected 2.5)";
    }
    claim_criterion(runs, "keller-segel", {"speed-bracket", "linf"},
                    "integrable-kernel-speed-bracket-and-sup-bound", extra,
                    cstar_ok);
  }

  // 3. Weak coupling: behind the front the profile converges to 1 uniformly
  //    on |x| <= 1.5 t within 0.05 by t = 30.
  claim_criterion(runs, "ks-converge", {"converge-one"},
                  "invaded-region-converges-to-one");

  // 4. Saturating kernel: total mass grows exponentially at rate <= 1 with a
  //    clean fit, and the interior settles onto the plateau bracket
  //    [1/3 - 0.05, 2/3 + 0.05].
  claim_criterion(runs, "step", {"exp-mass", "plateau"},
                  "saturating-kernel-exponential-mass-and-plateau");

  // 5. Fat-tailed repulsion at alpha = 1/2: log-log slope of the mass lies
  //    in [1.7, 2.4] on t in [50, 200] (exponent-only check; constants in
  //    the bound are non-explicit).
  claim_criterion(runs, "power-law", {"power-mass"},
                  "fat-tail-mass-grows-like-t-squared");

  // 6. Mass identity everywhere: on every step of every preset the residual
  //    |dP - dt V| stays within 10 dt (dt + dx^2).
  {
    bool pass = true;
    std::ostringstream detail;
    bool first = true;
    for (const std::string& name : preset_names()) {
      const PresetOutcome& out = runs.at(name);
      if (!out.result) {
        pass = false;
        detail << (first ? "" : "; ") << name << ": run failed";
        first = false;
        continue;
      }
      const ClaimResult* c = find_claim(*out.result, "mass-identity");
      if (!c) {
        pass = false;
        detail << (first ? "" : "; ") << name << ": claim missing";
        first = false;
        continue;
      }
      pass = pass && c->pass;
      detail << (first ? "" : "; ") << name << ": factor "
             << num(c->observed);
      first = false;
    }
    report(pass, "mass-identity-residual-on-all-presets", detail.str());
  }

  // 7-11. Certification suites: each checks an a-priori estimate against an
  // independent numerical oracle with deterministic seeding.
  verify_criterion("conv-bounds",
                   "convolution-norm-bounds-hold-and-refine");
  verify_criterion("hill", "constant-drift-kernel-sandwich-holds");
  verify_criterion("fp-tail", "drift-diffusion-far-field-bound-holds");
  verify_criterion("gamma-envelope",
                   "fundamental-solution-envelope-rate-holds");
  verify_criterion("phi-max", "rearrangement-maximum-is-extremal");

  // 12. Asymptotic regimes of the explicit speed bound: the excess over the
  // local speed 2 follows the predicted small-parameter rates.
  {
    bool pass = true;
    std::ostringstream detail;
    try {
      SweepSpec chi_spec;
      chi_spec.cfg = ConfigMap::parse_string(R"(
sweep.variable = chi
sweep.grid = logspace 1e-3 1e-1 9
kernel.family = keller_segel
kernel.chi = chi
kernel.d = 1/chi
)");
      const auto rows_a = csv_rows(run_sweep(chi_spec, true));
      double worst_a = -std::numeric_limits<double>::infinity();
      for (size_t i = 1; i < rows_a.size(); ++i) {
        const double chi = std::strtod(rows_a[i][0].c_str(), nullptr);
        const double cstar = std::strtod(rows_a[i][10].c_str(), nullptr);
        worst_a = std::max(worst_a, (cstar - 2.0) / (chi * chi));
      }
      // Predicted excess ~ (3/2) chi^2 as chi -> 0 with d = 1/chi
      // (measured 1.186 over this grid); 1.51 = 3/2 + 0.01.
      const bool a_ok = worst_a <= 1.51;

      SweepSpec d_spec;
      d_spec.cfg = ConfigMap::parse_string(R"(
sweep.variable = d
sweep.grid = logspace 1e-4 1e-2 9
kernel.family = keller_segel
kernel.chi = d^2
kernel.d = d
)");
      const auto rows_b = csv_rows(run_sweep(d_spec, true));
      const double d0 = std::strtod(rows_b[1][0].c_str(), nullptr);
      const double cstar0 = std::strtod(rows_b[1][10].c_str(), nullptr);
      const double ratio_b = (cstar0 - 2.0) / (d0 * d0 * d0);
      // Predicted excess ~ d^3/16 as d -> 0 with chi = d^2 (measured
      // 0.0675 at d = 1e-4); 0.0725 = 1/16 + 0.01.
      const bool b_ok = ratio_b <= 0.0725;

      pass = a_ok && b_ok;
      detail << "max (cstar-2)/chi^2 = " << num(worst_a)
             << " vs 1.51; (cstar-2)/d^3 at d=" << num(d0) << " is "
             << num(ratio_b) << " vs 0.0725";
    } catch (const std::exception& e) {
      pass = false;
      detail << "sweep threw: " << e.what();
    }
    report(pass, "speed-bound-asymptotic-rates", detail.str());
  }

  std::printf("%d of 12 criteria passed\n", 12 - g_failures);
  return g_failures;
}
