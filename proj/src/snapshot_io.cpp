#include "zakharov/snapshot_io.hpp"

#include <cmath>
#include <cstring>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

std::vector<double> finite_array(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParseError(line, key, "missing array");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ParseError(line, key, "non-numeric entry");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(line, key, "non-finite entry");
    out.push_back(d);
  }
  return out;
}

double finite_number(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ParseError(line, key, "missing number");
  const double d = j.at(key).get<double>();
  if (!std::isfinite(d)) throw ParseError(line, key, "non-finite value");
  return d;
}

nlohmann::ordered_json record(const char* kind) {
  nlohmann::ordered_json j;
  j["schema"] = kSnapshotSchema;
  j["record"] = kind;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const SnapshotRecord& r) {
  auto j = record("snapshot");
  j["step"] = r.step;
  j["t"] = r.t;
  j["hamiltonian"] = r.hamiltonian;
  j["mass"] = r.mass;
  if (r.bulk_file) j["bulk_file"] = *r.bulk_file;
  j["eta"] = r.eta;
  j["psi"] = r.psi;
  return j;
}

SnapshotRecord snapshot_from_json(const nlohmann::json& j, std::size_t line) {
  SnapshotRecord r;
  if (!j.contains("step") || !j.at("step").is_number_unsigned()) {
    throw ParseError(line, "step", "missing step counter");
  }
  r.step = j.at("step").get<std::uint64_t>();
  r.t = finite_number(j, "t", line);
  r.hamiltonian = finite_number(j, "hamiltonian", line);
  r.mass = finite_number(j, "mass", line);
  r.eta = finite_array(j, "eta", line);
  r.psi = finite_array(j, "psi", line);
  if (r.eta.size() != r.psi.size()) throw ParseError(line, "psi", "length differs from eta");
  if (j.contains("bulk_file")) r.bulk_file = j.at("bulk_file").get<std::string>();
  return r;
}

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw ValidationError("output_path", "cannot write " + path.string());
}

void SnapshotWriter::emit(const nlohmann::ordered_json& rec) {
  const std::string line = rec.dump() + '\n';
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
}

void SnapshotWriter::header(const nlohmann::ordered_json& config) {
  auto j = record("header");
  j["config"] = config;
  emit(j);
}

void SnapshotWriter::snapshot(const SnapshotRecord& r) { emit(to_json(r)); }

void SnapshotWriter::summary(std::uint64_t steps, double wall_time_s, double max_h_drift,
                             double max_mass_drift) {
  auto j = record("summary");
  j["steps"] = steps;
  j["max_hamiltonian_drift"] = max_h_drift;
  j["max_mass_drift"] = max_mass_drift;
  j["wall_time_s"] = wall_time_s;
  emit(j);
}

void SnapshotWriter::error(const WaveError& e, std::uint64_t step, double t) {
  auto j = record("error");
  j["kind"] = e.kind();
  j["message"] = e.what();
  j["step"] = step;
  j["t"] = t;
  emit(j);
}

SnapshotStream read_snapshot_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "input", "cannot open " + path.string());
  SnapshotStream s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, "record", e.what());
    }
    if (!j.is_object() || j.value("schema", "") != kSnapshotSchema) {
      throw ParseError(line_no, "schema", "expected " + std::string(kSnapshotSchema));
    }
    const std::string kind = j.value("record", "");
    if (kind == "header") {
      s.config = j.value("config", nlohmann::json());
    } else if (kind == "snapshot") {
      s.snapshots.push_back(snapshot_from_json(j, line_no));
    } else if (kind == "summary") {
      s.summary = j;
    } else if (kind == "error") {
      s.error = j;
    } else {
      throw ParseError(line_no, "record", "unknown record type '" + kind + "'");
    }
  }
  return s;
}

SurfaceState to_state(const SnapshotRecord& r, const Grid& grid) {
  if (r.eta.size() != grid.n_x()) {
    throw GridMismatch("snapshot at step " + std::to_string(r.step) + " has " +
                       std::to_string(r.eta.size()) + " samples, grid has " +
                       std::to_string(grid.n_x()));
  }
  return SurfaceState{r.t, RealField(grid, r.eta), RealField(grid, r.psi)};
}

void write_bulk_file(const std::filesystem::path& path, const BulkSnapshot& snap,
                     BulkOutput format) {
  const BulkField* fields[] = {&snap.phi, &snap.q, &snap.p, &snap.vx, &snap.vy};
  if (format == BulkOutput::none) return;
  if (format == BulkOutput::text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("output_path", "cannot write " + path.string());
    out.precision(17);
    out << "# fields phi q p vx vy n_x " << snap.phi.n_x() << " n_z " << snap.phi.n_z()
        << " t " << snap.t << '\n';
    for (const BulkField* f : fields) {
      for (std::size_t j = 0; j < f->n_z(); ++j) {
        const auto row = f->row(j);
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << '\n';
      }
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("output_path", "cannot write " + path.string());
  char magic[8] = {};
  std::memcpy(magic, "ZKBULK1", 7);
  const std::uint64_t dims[2] = {snap.phi.n_x(), snap.phi.n_z()};
  out.write(magic, sizeof magic);
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(&snap.t), sizeof snap.t);
  for (const BulkField* f : fields) {
    const auto v = f->values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
}

}  // namespace zakharov
