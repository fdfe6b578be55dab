#include "zakharov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "zakharov/errors.hpp"
#include "zakharov/geometry.hpp"

namespace zakharov {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, std::size_t line, const std::string& key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ParseError(line, key, "expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_unsigned(std::string_view v, std::size_t line, const std::string& key) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, key, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v, std::size_t line, const std::string& key) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ParseError(line, key, "expected true or false, got '" + std::string(v) + "'");
}

using Setter = void (*)(RunConfig&, std::string_view, std::size_t, const std::string&);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n_x", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.n_x = to_unsigned(v, l, k);
       }},
      {"n_z", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.n_z = to_unsigned(v, l, k);
       }},
      {"length", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.length = to_double(v, l, k);
       }},
      {"g", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.g = to_double(v, l, k);
       }},
      {"h_b", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.h_b = to_double(v, l, k);
       }},
      {"delta", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.delta_auto = v == "auto";
         if (!c.delta_auto) c.evolution.delta = to_double(v, l, k);
       }},
      {"dt", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.dt_auto = v == "auto";
         if (!c.dt_auto) c.evolution.dt = to_double(v, l, k);
       }},
      {"t_end", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.t_end = to_double(v, l, k);
       }},
      {"snapshot_stride",
       [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.snapshot_stride = to_unsigned(v, l, k);
       }},
      {"dealias", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.dealias_on = to_bool(v, l, k);
       }},
      {"cg_tol", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.cg_tol = to_double(v, l, k);
       }},
      {"cg_max_iter",
       [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.evolution.cg_max_iter = to_unsigned(v, l, k);
       }},
      {"ic_kind", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         if (v == "standing_wave") {
           c.ic_kind = InitialKind::standing_wave;
         } else if (v == "traveling_wave_linear") {
           c.ic_kind = InitialKind::traveling_wave_linear;
         } else if (v == "custom_file") {
           c.ic_kind = InitialKind::custom_file;
         } else {
           throw ParseError(l, k, "unknown initial condition '" + std::string(v) + "'");
         }
       }},
      {"ic_amplitude",
       [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.ic_amplitude = to_double(v, l, k);
       }},
      {"ic_wavenumber",
       [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.ic_wavenumber = to_double(v, l, k);
       }},
      {"ic_file", [](RunConfig& c, std::string_view v, std::size_t, const std::string&) {
         c.ic_file = std::string(v);
       }},
      {"taylor_threshold",
       [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         if (v == "auto") {
           c.taylor_threshold.reset();
         } else {
           c.taylor_threshold = to_double(v, l, k);
         }
       }},
      {"output_path", [](RunConfig& c, std::string_view v, std::size_t, const std::string&) {
         c.output_path = std::string(v);
       }},
      {"bulk_output", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         if (v == "none") {
           c.bulk_output = BulkOutput::none;
         } else if (v == "text") {
           c.bulk_output = BulkOutput::text;
         } else if (v == "binary") {
           c.bulk_output = BulkOutput::binary;
         } else {
           throw ParseError(l, k, "expected none, text or binary");
         }
       }},
      {"seed", [](RunConfig& c, std::string_view v, std::size_t l, const std::string& k) {
         c.seed = to_unsigned(v, l, k);
       }},
  };
  return table;
}

}  // namespace

std::string_view to_string(InitialKind k) noexcept {
  switch (k) {
    case InitialKind::standing_wave: return "standing_wave";
    case InitialKind::traveling_wave_linear: return "traveling_wave_linear";
    case InitialKind::custom_file: return "custom_file";
  }
  return "?";
}

std::string_view to_string(BulkOutput b) noexcept {
  switch (b) {
    case BulkOutput::none: return "none";
    case BulkOutput::text: return "text";
    case BulkOutput::binary: return "binary";
  }
  return "?";
}

void RunConfig::validate() const {
  if (n_x < 8 || n_x % 2 != 0) throw ValidationError("n_x", "must be even and at least 8");
  if (!(length > 0.0)) throw ValidationError("length", "must be positive");
  if (evolution.n_z < 8) throw ValidationError("n_z", "must be at least 8");
  if (!(evolution.g > 0.0)) throw ValidationError("g", "must be positive");
  if (!(evolution.h_b > 0.0)) throw ValidationError("h_b", "must be positive");
  if (!delta_auto && !(evolution.delta >= 0.0)) throw ValidationError("delta", "must be >= 0");
  if (!dt_auto && !(evolution.dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (!(evolution.t_end >= 0.0)) throw ValidationError("t_end", "must be >= 0");
  if (snapshot_stride == 0) throw ValidationError("snapshot_stride", "must be at least 1");
  evolution.solver().validate();

  if (ic_kind == InitialKind::custom_file) {
    if (ic_file.empty()) throw ValidationError("ic_file", "required when ic_kind = custom_file");
  } else {
    const double modes = ic_wavenumber * length / (2.0 * std::numbers::pi);
    if (!(ic_wavenumber > 0.0) || std::abs(modes - std::round(modes)) > 1e-9) {
      throw ValidationError("ic_wavenumber", "must be a positive multiple of 2 pi / length");
    }
    if (std::round(modes) >= static_cast<double>(n_x / 2)) {
      throw ValidationError("ic_wavenumber", "not resolved by n_x");
    }
  }
  if (taylor_threshold && !(*taylor_threshold >= 0.0)) {
    throw ValidationError("taylor_threshold", "must be >= 0");
  }
  if (output_path.empty()) throw ValidationError("output_path", "must not be empty");
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, std::string(line), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, key, "missing key");

    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(line_no, key, "unknown key");
    if (auto [prev, fresh] = seen.emplace(key, line_no); !fresh) {
      throw ParseError(line_no, key, "repeated (first set on line " + std::to_string(prev->second) + ")");
    }
    if (value.empty()) throw ParseError(line_no, key, "missing value");
    it->second(cfg, value, line_no, key);
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "config", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config_text(buf.str());
  if (!cfg.ic_file.empty() && cfg.ic_file.is_relative()) {
    cfg.ic_file = path.parent_path() / cfg.ic_file;
  }
  return cfg;
}

namespace {

SurfaceState read_custom_state(const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  std::ifstream in(cfg.ic_file);
  if (!in) throw ValidationError("ic_file", "cannot open " + cfg.ic_file.string());
  std::vector<double> eta;
  std::vector<double> psi;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    double e = 0.0;
    double p = 0.0;
    if (!(row >> e)) continue;
    std::string extra;
    if (!(row >> p) || (row >> extra) || !std::isfinite(e) || !std::isfinite(p)) {
      throw ParseError(line_no, "ic_file", "expected two finite numbers 'eta psi'");
    }
    eta.push_back(e);
    psi.push_back(p);
  }
  if (eta.size() != grid.n_x()) {
    throw ParseError(0, "ic_file", "holds " + std::to_string(eta.size()) + " samples, n_x is " +
                                       std::to_string(grid.n_x()));
  }
  return SurfaceState{0.0, RealField(grid, std::move(eta)), RealField(grid, std::move(psi))};
}

}  // namespace

SurfaceState initial_state(const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const double a = cfg.ic_amplitude;
  const double k = cfg.ic_wavenumber;
  switch (cfg.ic_kind) {
    case InitialKind::standing_wave:
      return SurfaceState{0.0, RealField::from_function(grid, [=](double x) { return a * std::cos(k * x); }),
                          RealField(grid)};
    case InitialKind::traveling_wave_linear: {
      const double omega = linear_frequency(k, cfg.evolution.g, cfg.evolution.h_b);
      const double amp_psi = a * cfg.evolution.g / omega;
      return SurfaceState{0.0, RealField::from_function(grid, [=](double x) { return a * std::cos(k * x); }),
                          RealField::from_function(grid, [=](double x) { return amp_psi * std::sin(k * x); })};
    }
    case InitialKind::custom_file:
      return read_custom_state(cfg);
  }
  throw ValidationError("ic_kind", "unhandled");
}

EvolutionParams effective_params(const RunConfig& cfg, const RealField& eta0) {
  EvolutionParams p = cfg.evolution;
  if (cfg.delta_auto) p.delta = default_delta(eta0);
  if (cfg.dt_auto) p.dt = default_dt(cfg.grid(), p.g, p.h_b);
  p.validate();
  return p;
}

nlohmann::ordered_json config_echo(const RunConfig& cfg, const EvolutionParams& p) {
  nlohmann::ordered_json j;
  j["n_x"] = cfg.n_x;
  j["n_z"] = p.n_z;
  j["length"] = cfg.length;
  j["g"] = p.g;
  j["h_b"] = p.h_b;
  j["delta"] = p.delta;
  j["dt"] = p.dt;
  j["t_end"] = p.t_end;
  j["snapshot_stride"] = cfg.snapshot_stride;
  j["dealias"] = p.dealias_on;
  j["cg_tol"] = p.cg_tol;
  j["cg_max_iter"] = p.solver().iteration_cap(cfg.n_x, p.n_z);
  j["ic_kind"] = to_string(cfg.ic_kind);
  j["ic_amplitude"] = cfg.ic_amplitude;
  j["ic_wavenumber"] = cfg.ic_wavenumber;
  j["ic_file"] = cfg.ic_file.string();
  j["taylor_threshold"] = cfg.effective_taylor_threshold();
  j["output_path"] = cfg.output_path.string();
  j["bulk_output"] = to_string(cfg.bulk_output);
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace zakharov
