// zakharov: simulate, verify and study convergence of free-surface potential flow.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zakharov/driver.hpp"
#include "zakharov/errors.hpp"

using namespace zakharov;

namespace {

void print_error(const WaveError& e) {
  std::cerr << "error [" << e.kind() << "]: " << e.what() << '\n';
}

int simulate(const std::string& config_path) {
  const RunConfig cfg = parse_config(config_path);
  const SimulationSummary s = run_simulate(cfg);
  std::printf("steps %llu  snapshots %zu  max |dH|/H %.3e  max |dM| %.3e  wall %.2fs\n",
              static_cast<unsigned long long>(s.steps), s.snapshots, s.max_hamiltonian_drift,
              s.max_mass_drift, s.wall_time_s);
  return kExitOk;
}

int verify(const std::string& input, const std::string& config_path, const std::string& report) {
  const RunConfig cfg = parse_config(config_path);
  const VerifyOutcome out =
      run_verify(input, cfg, report.empty() ? std::nullopt : std::optional<std::filesystem::path>(report));
  std::cout << out.document["report"].dump(2) << '\n';
  for (const auto& f : out.failures) std::cerr << "FAILED " << f << '\n';
  return out.failures.empty() ? kExitOk : kExitCheckFailure;
}

int converge(const std::string& config_path, std::size_t levels, const std::string& vary) {
  const RunConfig cfg = parse_config(config_path);
  const ConvergenceTable t =
      run_converge(cfg, levels, vary == "dt" ? ConvergeAxis::dt : ConvergeAxis::nz);
  std::cout << to_json(t).dump() << '\n';
  return kExitOk;
}

int selftest(double cg_tol, std::uint64_t seed) {
  const auto checks = run_selftest(cg_tol, seed);
  bool ok = true;
  std::printf("%-28s %12s %12s  %s\n", "check", "value", "tolerance", "result");
  for (const auto& c : checks) {
    std::printf("%-28s %12.3e %12.3e  %s\n", c.name.c_str(), c.value, c.tolerance,
                c.pass ? "PASS" : "FAIL");
    ok = ok && c.pass;
  }
  return ok ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-surface potential flow: Zakharov/Craig-Sulem solver and bulk Euler verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input_path;
  std::string report_path;
  std::size_t levels = 3;
  std::string vary = "nz";
  double cg_tol = 1e-10;
  std::uint64_t seed = 0;

  auto* sim = app.add_subcommand("simulate", "Integrate a configuration and write the snapshot stream");
  sim->add_option("--config", config_path, "Configuration file")->required();

  auto* ver = app.add_subcommand("verify", "Reconstruct the bulk flow of a stream and check it");
  ver->add_option("--input", input_path, "Snapshot stream")->required();
  ver->add_option("--config", config_path, "Configuration file")->required();
  ver->add_option("--report", report_path, "Report destination (default: <input>.report.json)");

  auto* conv = app.add_subcommand("converge", "Refinement study with fitted orders");
  conv->add_option("--config", config_path, "Configuration file")->required();
  conv->add_option("--levels", levels, "Number of refinement levels")->required();
  conv->add_option("--vary", vary, "Refined quantity")->check(CLI::IsMember({"nz", "dt"}));

  auto* self = app.add_subcommand("selftest", "Run the invariant suite");
  self->add_option("--cg-tol", cg_tol, "Solver tolerance used for the elliptic solves");
  self->add_option("--seed", seed, "Seed for the random test fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (*sim) return simulate(config_path);
    if (*ver) return verify(input_path, config_path, report_path);
    if (*conv) return converge(config_path, levels, vary);
    if (*self) return selftest(cg_tol, seed);
  } catch (const WaveError& e) {
    print_error(e);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalAbort;
  }
  return kExitConfigError;
}
