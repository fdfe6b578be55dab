#pragma once

// Orchestration behind the command-line subcommands.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zakharov/config.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/reconstruction.hpp"

namespace zakharov {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailure = 1,
  kExitConfigError = 2,
  kExitNumericalAbort = 3,
};

/// Configuration and input problems map to 2, solver and geometry aborts to 3.
int exit_code_for(const WaveError& e) noexcept;

/// Number of steps needed to reach t_end with step dt (t_end is rounded to the step grid).
std::uint64_t step_count(double t_end, double dt);

/// Advances `steps` RK4 steps; t is set to t0 + n dt exactly. `on_step(n, state)` runs after
/// every accepted step.
SurfaceState integrate(SurfaceState state, const EvolutionParams& p, std::uint64_t steps,
                       const std::function<void(std::uint64_t, const SurfaceState&)>& on_step = {});

struct SimulationSummary {
  std::uint64_t steps = 0;
  std::size_t snapshots = 0;
  double wall_time_s = 0.0;
  double max_hamiltonian_drift = 0.0;
  double max_mass_drift = 0.0;
};

/// Writes the snapshot stream to cfg.output_path. On a typed failure the last
/// good state and an error record are written, then the exception is rethrown.
SimulationSummary run_simulate(const RunConfig& cfg);

struct VerifyOutcome {
  VerificationReport report;
  /// Named check failures; empty means the trajectory passed.
  std::vector<std::string> failures;
  nlohmann::ordered_json document;
};

/// Reconstructs every snapshot of a stream and aggregates the residuals. Triples at
/// spacing D and 2D give the observed dt-orders. The report is written to
/// `report_path` (default: input + ".report.json").
VerifyOutcome run_verify(const std::filesystem::path& input, const RunConfig& cfg,
                         const std::optional<std::filesystem::path>& report_path = std::nullopt);

enum class ConvergeAxis { nz, dt };

struct ConvergenceRow {
  std::size_t n_z = 0;
  double dt = 0.0;
  std::map<std::string, double> values;
};

struct ConvergenceTable {
  ConvergeAxis axis = ConvergeAxis::nz;
  std::vector<ConvergenceRow> rows;
  /// Positive orders: -d log(err) / d log(dz) or d log(err) / d log(dt).
  std::map<std::string, double> orders;
};

/// nz: n_z = n_z0/2 * 2^j, reporting the flat-DNO oracle error and, after
/// integrating to t_end, div, curl and surface trace errors.
/// dt: dt = dt0 / 2^j, reporting the Bernoulli and momentum residuals at t_end.
/// Throws ValidationError when levels < 2.
ConvergenceTable run_converge(const RunConfig& cfg, std::size_t levels, ConvergeAxis axis);

nlohmann::ordered_json to_json(const ConvergenceTable& table);

struct SelfTestCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Invariant suite on a small grid. Tolerances are fixed; `cg_tol` only
/// changes how accurately the elliptic solves are carried out.
std::vector<SelfTestCheck> run_selftest(double cg_tol, std::uint64_t seed);

}  // namespace zakharov
