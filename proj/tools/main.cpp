// nlkpp command line: run scenarios, print bounds, run certification suites,
// evaluate parameter sweeps.
//
// Exit codes: 0 success / all claims pass, 1 claim or certification failure,
// 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlkpp/errors.hpp"
#include "nlkpp/scenario.hpp"
#include "nlkpp/sweep.hpp"
#include "nlkpp/verify.hpp"

namespace {

// "family:key=val,key=val" -> kernel, e.g. "keller_segel:chi=0.5,d=1".
nlkpp::Kernel parse_kernel_spec(const std::string& spec) {
  nlkpp::ConfigMap cfg;
  const auto colon = spec.find(':');
  cfg.set("kernel.family", spec.substr(0, colon));
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    size_t pos = 0;
    while (pos < rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string item =
          rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw nlkpp::ConfigError("kernel spec item '" + item +
                                 "' is not key=value");
      cfg.set("kernel." + item.substr(0, eq), item.substr(eq + 1));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return nlkpp::kernel_from_config(cfg, "kernel.");
}

int cmd_run(const std::string& target, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
  const nlkpp::Scenario sc = nlkpp::load_scenario(target, overrides);
  const nlkpp::ScenarioResult res = nlkpp::execute_scenario(sc);
  nlkpp::write_artifacts(res, out_dir);

  bool all_pass = true;
  for (const nlkpp::ClaimResult& c : res.claims) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << ": " << c.detail
              << "\n";
    all_pass = all_pass && c.pass;
  }
  if (res.run.status == nlkpp::RunStatus::ResourceLimit)
    std::cout << "NOTE run truncated: " << res.run.message << "\n";
  std::cout << "artifacts: " << out_dir << "/" << sc.name << ".{csv,bounds.txt,claims.txt,svg}"
            << "\n";
  return all_pass ? 0 : 1;
}

int cmd_bounds(const std::string& spec, const std::optional<double>& u_inf,
               bool csv) {
  const nlkpp::Kernel k = parse_kernel_spec(spec);
  const nlkpp::BoundReport rep = nlkpp::bound_report(k.facts(), u_inf);
  std::cout << (csv ? nlkpp::bounds_csv(k, rep) : nlkpp::bounds_text(k, rep));
  return 0;
}

int cmd_verify(const std::string& target) {
  const nlkpp::VerifyReport rep = nlkpp::run_verify(target);
  std::cout << nlkpp::verify_text(rep);
  return rep.pass ? 0 : 1;
}

int cmd_sweep(const std::string& path, const std::string& out,
              bool deterministic) {
  const nlkpp::SweepSpec spec = nlkpp::SweepSpec::parse_file(path);
  const std::string csv = nlkpp::run_sweep(spec, deterministic);
  if (out.empty()) {
    std::cout << csv;
  } else {
    const std::string tmp = out + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw nlkpp::ConfigError("cannot write '" + tmp + "'");
      f << csv;
    }
    std::filesystem::rename(tmp, out);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Fisher-KPP fronts with non-local advection"};
  app.require_subcommand(1);

  std::string run_target, run_out_dir = "artifacts";
  std::vector<std::string> run_overrides;
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "force sequential evaluation (byte-stable output)");

  CLI::App* run = app.add_subcommand("run", "run a scenario and evaluate its claims");
  run->add_option("target", run_target, "preset name or scenario file")->required();
  run->add_option("--override", run_overrides, "key=value config override (repeatable)");
  run->add_option("--out-dir", run_out_dir, "artifact directory (default: artifacts)");

  std::string bounds_spec;
  double bounds_u_inf = 0.0;
  bool bounds_csv_flag = false;
  CLI::App* bounds = app.add_subcommand("bounds", "print the a-priori bound report for a kernel");
  bounds->add_option("kernel", bounds_spec,
                     "kernel spec, e.g. keller_segel:chi=0.5,d=1 | zero | step:k_inf=0.25")
      ->required();
  CLI::Option* u_inf_opt =
      bounds->add_option("--u-inf", bounds_u_inf, "sup-norm budget override");
  bounds->add_flag("--csv", bounds_csv_flag, "emit one CSV row instead of text");

  std::string verify_target;
  CLI::App* verify = app.add_subcommand("verify", "run a bounds-vs-simulation certification suite");
  verify->add_option("target", verify_target,
                     "gamma-envelope | hill | fp-tail | conv-bounds | phi-max")
      ->required();

  std::string sweep_path, sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate a parameter sweep to CSV");
  sweep->add_option("file", sweep_path, "sweep config file")->required();
  sweep->add_option("--out", sweep_out, "output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_target, run_overrides, run_out_dir);
    if (bounds->parsed()) {
      std::optional<double> u_inf;
      if (u_inf_opt->count() > 0) u_inf = bounds_u_inf;
      return cmd_bounds(bounds_spec, u_inf, bounds_csv_flag);
    }
    if (verify->parsed()) return cmd_verify(verify_target);
    if (sweep->parsed()) return cmd_sweep(sweep_path, sweep_out, deterministic);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly; parse errors are config errors
  } catch (const nlkpp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const nlkpp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlkpp::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {  // includes HypothesisError
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
