#pragma once

// Run configuration: flat `key = value` text, `#` starts a comment.
//
//   n_x, n_z, length, g, h_b, delta (number | auto), dt (number | auto),
//   t_end, snapshot_stride, dealias, cg_tol, cg_max_iter,
//   ic_kind (standing_wave | traveling_wave_linear | custom_file),
//   ic_amplitude, ic_wavenumber, ic_file, taylor_threshold (number | auto),
//   output_path, bulk_output (none | text | binary), seed
//
// Every key is optional; unknown or repeated keys are errors.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "zakharov/evolution.hpp"
#include "zakharov/spectral.hpp"

namespace zakharov {

enum class InitialKind { standing_wave, traveling_wave_linear, custom_file };
enum class BulkOutput { none, text, binary };

std::string_view to_string(InitialKind k) noexcept;
std::string_view to_string(BulkOutput b) noexcept;

struct RunConfig {
  std::size_t n_x = 128;
  double length = 2.0 * std::numbers::pi;
  /// delta and dt here are only meaningful when the matching *_auto flag is false.
  EvolutionParams evolution;
  bool delta_auto = true;
  bool dt_auto = true;
  std::size_t snapshot_stride = 1;

  InitialKind ic_kind = InitialKind::standing_wave;
  double ic_amplitude = 1e-3;
  double ic_wavenumber = 2.0;
  std::filesystem::path ic_file;

  /// Empty selects g / 2.
  std::optional<double> taylor_threshold;
  std::filesystem::path output_path = "snapshots.jsonl";
  BulkOutput bulk_output = BulkOutput::none;
  std::uint64_t seed = 0;

  Grid grid() const { return Grid(n_x, length); }
  double effective_taylor_threshold() const noexcept {
    return taylor_threshold ? *taylor_threshold : 0.5 * evolution.g;
  }

  /// Throws ValidationError naming the offending key.
  void validate() const;
};

RunConfig parse_config_text(std::string_view text);
/// Relative ic_file entries are resolved against the config file's directory.
RunConfig parse_config(const std::filesystem::path& path);

/// Initial surface state described by the config (t = 0).
SurfaceState initial_state(const RunConfig& cfg);

/// Evolution parameters with delta and dt resolved for the given initial elevation.
EvolutionParams effective_params(const RunConfig& cfg, const RealField& eta0);

/// Full effective configuration, after defaults, as a flat object.
nlohmann::ordered_json config_echo(const RunConfig& cfg, const EvolutionParams& effective);

}  // namespace zakharov
