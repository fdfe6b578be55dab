#pragma once

// Line-delimited JSON record stream written by `simulate`.
//
// Every line is one object whose first field is "schema". The "record" field
// selects the layout:
//
//   header    config echo
//   snapshot  step, t, eta[], psi[], hamiltonian, mass, optional bulk_file
//   summary   steps, wall_time_s, max_hamiltonian_drift, max_mass_drift
//   error     kind, message, step, t (the last good state precedes it)

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zakharov/config.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/reconstruction.hpp"

namespace zakharov {

inline constexpr const char* kSnapshotSchema = "zakharov.snapshot/1";

struct SnapshotRecord {
  std::uint64_t step = 0;
  double t = 0.0;
  std::vector<double> eta;
  std::vector<double> psi;
  double hamiltonian = 0.0;
  double mass = 0.0;
  std::optional<std::string> bulk_file;
};

nlohmann::ordered_json to_json(const SnapshotRecord& r);
/// Throws ParseError on missing fields or non-finite values.
SnapshotRecord snapshot_from_json(const nlohmann::json& j, std::size_t line);

/// Owns the output file; each record is formatted in full before it is written.
class SnapshotWriter {
 public:
  explicit SnapshotWriter(const std::filesystem::path& path);

  void header(const nlohmann::ordered_json& config);
  void snapshot(const SnapshotRecord& r);
  void summary(std::uint64_t steps, double wall_time_s, double max_h_drift, double max_mass_drift);
  void error(const WaveError& e, std::uint64_t step, double t);

 private:
  void emit(const nlohmann::ordered_json& record);
  std::ofstream out_;
};

struct SnapshotStream {
  nlohmann::json config;  ///< header echo, null if absent
  std::vector<SnapshotRecord> snapshots;
  std::optional<nlohmann::json> summary;
  std::optional<nlohmann::json> error;
};

SnapshotStream read_snapshot_stream(const std::filesystem::path& path);

SurfaceState to_state(const SnapshotRecord& r, const Grid& grid);

/// Row-major dump of phi, q, p, vx, vy. Text: a "# fields ..." line, then one
/// line per z level per field (bottom first). Binary: the same doubles, native
/// byte order, after a 32-byte header "ZKBULK1\0" + n_x + n_z + t.
void write_bulk_file(const std::filesystem::path& path, const BulkSnapshot& snap, BulkOutput format);

}  // namespace zakharov
