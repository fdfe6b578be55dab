#include "zakharov/driver.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "zakharov/diagnostics.hpp"
#include "zakharov/snapshot_io.hpp"

namespace zakharov {

int exit_code_for(const WaveError& e) noexcept {
  const std::string_view kind = e.kind();
  if (kind == "StripViolation" || kind == "SeparationViolation" || kind == "NoConvergence") {
    return kExitNumericalAbort;
  }
  return kExitConfigError;
}

std::uint64_t step_count(double t_end, double dt) {
  const double r = t_end / dt;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(r));
}

SurfaceState integrate(SurfaceState state, const EvolutionParams& p, std::uint64_t steps,
                       const std::function<void(std::uint64_t, const SurfaceState&)>& on_step) {
  const double t0 = state.t;
  for (std::uint64_t n = 1; n <= steps; ++n) {
    state = rk4_step(state, p);
    state.t = t0 + static_cast<double>(n) * p.dt;
    if (on_step) on_step(n, state);
  }
  return state;
}

namespace {

double relative_drift(double value, double reference) {
  const double d = std::abs(value - reference);
  return reference != 0.0 ? d / std::abs(reference) : d;
}

std::vector<double> copy_values(const RealField& f) {
  return std::vector<double>(f.values().begin(), f.values().end());
}

std::filesystem::path bulk_path(const RunConfig& cfg, std::uint64_t step) {
  std::filesystem::path p = cfg.output_path;
  p.replace_extension();
  p += ".bulk." + std::to_string(step) + (cfg.bulk_output == BulkOutput::binary ? ".bin" : ".txt");
  return p;
}

}  // namespace

SimulationSummary run_simulate(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  SurfaceState state = initial_state(cfg);
  const EvolutionParams p = effective_params(cfg, state.eta);

  SnapshotWriter writer(cfg.output_path);
  writer.header(config_echo(cfg, p));

  SimulationSummary summary;
  std::uint64_t step = 0;
  bool last_written = false;
  double h0 = 0.0;
  double m0 = 0.0;

  auto emit = [&](const SurfaceState& s, std::uint64_t n) {
    SnapshotRecord r;
    r.step = n;
    r.t = s.t;
    r.eta = copy_values(s.eta);
    r.psi = copy_values(s.psi);
    r.hamiltonian = hamiltonian(s, p);
    r.mass = conserved_mass(s);
    if (n == 0) {
      h0 = r.hamiltonian;
      m0 = r.mass;
    }
    summary.max_hamiltonian_drift =
        std::max(summary.max_hamiltonian_drift, relative_drift(r.hamiltonian, h0));
    summary.max_mass_drift = std::max(summary.max_mass_drift, std::abs(r.mass - m0));
    if (cfg.bulk_output != BulkOutput::none) {
      const auto path = bulk_path(cfg, n);
      write_bulk_file(path, reconstruct_bulk(s, p), cfg.bulk_output);
      r.bulk_file = path.filename().string();
    }
    writer.snapshot(r);
    ++summary.snapshots;
  };

  try {
    // Geometry first: a strip violation must surface before any elliptic solve.
    build_domain_map(state.eta, p.map_params());
    emit(state, 0);
    last_written = true;
    const std::uint64_t steps = step_count(p.t_end, p.dt);
    SurfaceState next = state;
    while (step < steps) {
      next = rk4_step(state, p);
      next.t = static_cast<double>(step + 1) * p.dt;
      state = std::move(next);
      ++step;
      last_written = false;
      if (step % cfg.snapshot_stride == 0) {
        emit(state, step);
        last_written = true;
      }
    }
  } catch (const WaveError& e) {
    if (!last_written && summary.snapshots > 0) {
      try {
        emit(state, step);
      } catch (const WaveError&) {
        // The last good state itself cannot be diagnosed; the error record still follows.
      }
    }
    writer.error(e, step, state.t);
    throw;
  }

  summary.steps = step;
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  writer.summary(summary.steps, summary.wall_time_s, summary.max_hamiltonian_drift,
                 summary.max_mass_drift);
  return summary;
}

namespace {

struct Reconstructed {
  std::uint64_t step;
  SurfaceState state;
  BulkSnapshot bulk;
};

double max_finite(double a, double b) {
  if (!std::isfinite(b)) return std::numeric_limits<double>::infinity();
  return std::max(a, b);
}

nlohmann::ordered_json report_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["snapshots"] = r.snapshots;
  j["euler_residual_l2"] = r.euler_residual_l2;
  j["euler_residual_sup"] = r.euler_residual_sup;
  j["bernoulli_residual_l2"] = r.bernoulli_residual_l2;
  j["bernoulli_form_gap"] = r.bernoulli_form_gap;
  j["div_residual"] = r.div_residual;
  j["curl_residual"] = r.curl_residual;
  j["trace_errors"] = {{"pressure", r.trace_errors.pressure},
                       {"horizontal_velocity", r.trace_errors.horizontal},
                       {"vertical_velocity", r.trace_errors.vertical},
                       {"kinematic", r.trace_errors.kinematic}};
  j["taylor_min"] = r.taylor_min;
  j["taylor_threshold"] = r.taylor_threshold;
  j["taylor_ok"] = r.taylor_ok;
  j["hamiltonian_drift"] = r.hamiltonian_drift;
  j["mass_drift"] = r.mass_drift;
  nlohmann::ordered_json orders = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.observed_orders) orders[k] = v;
  j["observed_orders"] = orders;
  return j;
}

bool all_finite(const VerificationReport& r) {
  const double v[] = {r.euler_residual_l2,       r.euler_residual_sup,      r.bernoulli_residual_l2,
                      r.bernoulli_form_gap,      r.div_residual,            r.curl_residual,
                      r.trace_errors.pressure,   r.trace_errors.horizontal, r.trace_errors.vertical,
                      r.trace_errors.kinematic,  r.taylor_min,              r.hamiltonian_drift,
                      r.mass_drift};
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  for (const auto& [k, x] : r.observed_orders) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

VerifyOutcome run_verify(const std::filesystem::path& input, const RunConfig& cfg,
                         const std::optional<std::filesystem::path>& report_path) {
  cfg.validate();
  SnapshotStream stream = read_snapshot_stream(input);
  const Grid grid = cfg.grid();
  if (stream.config.is_object() && stream.config.contains("n_x") &&
      stream.config["n_x"].get<std::size_t>() != grid.n_x()) {
    throw GridMismatch("stream was written with n_x = " + stream.config["n_x"].dump() +
                       ", config has " + std::to_string(grid.n_x()));
  }

  auto& snaps = stream.snapshots;
  // An aborted run appends its last good state off the stride; it carries no triple.
  if (stream.error && snaps.size() >= 2) {
    const std::size_t n = snaps.size();
    const double d0 = snaps[1].t - snaps[0].t;
    if (std::abs((snaps[n - 1].t - snaps[n - 2].t) - d0) > 1e-9 * std::max(1.0, snaps[n - 1].t)) {
      snaps.pop_back();
    }
  }
  if (snaps.size() < 3) throw InsufficientSnapshots(snaps.size(), 3);
  const double spacing = snaps[1].t - snaps[0].t;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const double d = snaps[i].t - snaps[i - 1].t;
    if (!(spacing > 0.0) || std::abs(d - spacing) > 1e-9 * std::max(1.0, snaps[i].t)) {
      throw GridMismatch("snapshot times are not equally spaced (step " +
                         std::to_string(snaps[i].step) + ")");
    }
  }

  const EvolutionParams p = effective_params(cfg, RealField(grid, snaps.front().eta));
  const double g = p.g;
  const double threshold = cfg.effective_taylor_threshold();
  const double pressure_tol = 10.0 * p.cg_tol;

  VerifyOutcome out;
  VerificationReport& rep = out.report;
  rep.snapshots = snaps.size();
  rep.taylor_threshold = threshold;
  rep.taylor_min = std::numeric_limits<double>::infinity();

  std::map<std::size_t, double> bern1, bern2, mom1, mom2;
  std::deque<Reconstructed> window;
  const double h0 = snaps.front().hamiltonian;
  const double m0 = snaps.front().mass;

  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const SnapshotRecord& rec = snaps[i];
    rep.hamiltonian_drift = max_finite(rep.hamiltonian_drift, relative_drift(rec.hamiltonian, h0));
    rep.mass_drift = max_finite(rep.mass_drift, std::abs(rec.mass - m0));

    SurfaceState state = to_state(rec, grid);
    BulkSnapshot bulk = reconstruct_bulk(state, p);

    const TraceErrors tr = trace_checks(bulk, state, bulk.g_psi);
    rep.trace_errors.pressure = max_finite(rep.trace_errors.pressure, tr.pressure);
    rep.trace_errors.horizontal = max_finite(rep.trace_errors.horizontal, tr.horizontal);
    rep.trace_errors.vertical = max_finite(rep.trace_errors.vertical, tr.vertical);
    rep.trace_errors.kinematic = max_finite(rep.trace_errors.kinematic, tr.kinematic);
    if (tr.pressure > pressure_tol) {
      out.failures.push_back("surface_pressure@step" + std::to_string(rec.step));
    }
    if (tr.kinematic > 1e-12 * std::max(1.0, sup_norm(bulk.g_psi))) {
      out.failures.push_back("kinematic_identity@step" + std::to_string(rec.step));
    }

    const ResidualReport kin = kinematic_residual(bulk);
    rep.div_residual = max_finite(rep.div_residual, kin.divergence.l2);
    rep.curl_residual = max_finite(rep.curl_residual, kin.curl.l2);

    const double a_min = min_value(taylor_coefficient(bulk));
    rep.taylor_min = std::min(rep.taylor_min, a_min);
    if (!(a_min >= threshold)) {
      rep.taylor_ok = false;
      std::ostringstream os;
      os << "taylor_violation@step" << rec.step << " (min a = " << a_min << " < " << threshold
         << ")";
      out.failures.push_back(os.str());
    }

    window.push_back(Reconstructed{rec.step, std::move(state), std::move(bulk)});
    if (window.size() > 5) window.pop_front();
    const std::size_t w = window.size();
    if (i >= 2) {
      const auto& a = window[w - 3].bulk;
      const auto& m = window[w - 2].bulk;
      const auto& b = window[w - 1].bulk;
      const BernoulliResidual br = bernoulli_residual(a, m, b, g);
      const ResidualReport er = euler_residual(a, m, b, g);
      bern1[i - 1] = br.potential_form.l2;
      mom1[i - 1] = er.momentum.l2;
      rep.bernoulli_residual_l2 = max_finite(rep.bernoulli_residual_l2, br.potential_form.l2);
      rep.bernoulli_form_gap = max_finite(rep.bernoulli_form_gap, br.form_gap);
      rep.euler_residual_l2 = max_finite(rep.euler_residual_l2, er.momentum.l2);
      rep.euler_residual_sup = max_finite(rep.euler_residual_sup, er.momentum.sup);
    }
    if (i >= 4) {
      const auto& a = window[w - 5].bulk;
      const auto& m = window[w - 3].bulk;
      const auto& b = window[w - 1].bulk;
      bern2[i - 2] = bernoulli_residual(a, m, b, g).potential_form.l2;
      mom2[i - 2] = euler_residual(a, m, b, g).momentum.l2;
    }
  }

  if (rep.bernoulli_form_gap > 1e-12) out.failures.push_back("bernoulli_form_gap");
  if (!bern2.empty()) {
    double b1 = 0.0, b2 = 0.0, e1 = 0.0, e2 = 0.0;
    for (const auto& [c, v] : bern2) {
      b2 += v;
      b1 += bern1.at(c);
      e2 += mom2.at(c);
      e1 += mom1.at(c);
    }
    // An exactly stationary stream has zero residuals and no order to observe.
    if (b1 > 0.0 && b2 > 0.0) rep.observed_orders["bernoulli_dt"] = std::log2(b2 / b1);
    if (e1 > 0.0 && e2 > 0.0) rep.observed_orders["euler_dt"] = std::log2(e2 / e1);
  }
  if (!all_finite(rep)) out.failures.push_back("non_finite_entry");

  out.document["schema"] = "zakharov.report/1";
  out.document["input"] = input.string();
  out.document["config"] = config_echo(cfg, p);
  out.document["report"] = report_json(rep);
  out.document["failures"] = out.failures;
  out.document["passed"] = out.failures.empty();

  std::filesystem::path dest = report_path ? *report_path : input;
  if (!report_path) dest += ".report.json";
  std::ofstream file(dest);
  if (!file) throw ValidationError("report", "cannot write " + dest.string());
  file << out.document.dump(2) << '\n';
  return out;
}

namespace {

double flat_dno_error(const Grid& grid, double k, double h_b, std::size_t n_z, double cg_tol) {
  const RealField eta(grid);
  const RealField psi = RealField::from_function(grid, [k](double x) { return std::cos(k * x); });
  MapParams mp;
  mp.h_b = h_b;
  mp.n_z = n_z;
  mp.delta = default_delta(eta);
  const DomainMap map = build_domain_map(eta, mp);
  const RealField g_psi = dno_apply(eta, psi, map, SolverConfig{cg_tol, 0});
  const RealField exact = k * std::tanh(k * h_b) * psi;
  return sup_norm(g_psi - exact) / sup_norm(exact);
}

}  // namespace

ConvergenceTable run_converge(const RunConfig& cfg, std::size_t levels, ConvergeAxis axis) {
  if (levels < 2) throw ValidationError("levels", "need at least two levels");
  cfg.validate();
  const SurfaceState initial = initial_state(cfg);
  const EvolutionParams base = effective_params(cfg, initial.eta);
  const Grid grid = cfg.grid();

  ConvergenceTable table;
  table.axis = axis;
  std::vector<double> resolution;
  if (axis == ConvergeAxis::nz) {
    const std::size_t nz0 = std::max<std::size_t>(8, base.n_z / 2);
    const std::uint64_t steps = step_count(base.t_end, base.dt);
    for (std::size_t j = 0; j < levels; ++j) {
      EvolutionParams p = base;
      p.n_z = nz0 << j;
      ConvergenceRow row;
      row.n_z = p.n_z;
      row.dt = p.dt;
      row.values["flat_dno"] = flat_dno_error(grid, cfg.ic_wavenumber, p.h_b, p.n_z, p.cg_tol);
      const SurfaceState s = integrate(initial, p, steps);
      const BulkSnapshot snap = reconstruct_bulk(s, p);
      const ResidualReport kin = kinematic_residual(snap);
      const TraceErrors tr = trace_checks(snap, s, snap.g_psi);
      row.values["div"] = kin.divergence.l2;
      row.values["curl"] = kin.curl.l2;
      row.values["trace_horizontal"] = tr.horizontal;
      row.values["trace_vertical"] = tr.vertical;
      resolution.push_back(1.0 / static_cast<double>(p.n_z - 1));
      table.rows.push_back(std::move(row));
    }
  } else {
    const std::uint64_t n0 = std::max<std::uint64_t>(1, step_count(base.t_end, base.dt));
    for (std::size_t j = 0; j < levels; ++j) {
      EvolutionParams p = base;
      p.dt = base.dt / static_cast<double>(1ULL << j);
      const std::uint64_t n_mid = n0 << j;
      const SurfaceState prev = integrate(initial, p, n_mid - 1);
      SurfaceState mid = rk4_step(prev, p);
      mid.t = static_cast<double>(n_mid) * p.dt;
      SurfaceState next = rk4_step(mid, p);
      next.t = static_cast<double>(n_mid + 1) * p.dt;
      const BulkSnapshot a = reconstruct_bulk(prev, p);
      const BulkSnapshot m = reconstruct_bulk(mid, p);
      const BulkSnapshot b = reconstruct_bulk(next, p);
      ConvergenceRow row;
      row.n_z = p.n_z;
      row.dt = p.dt;
      row.values["bernoulli"] = bernoulli_residual(a, m, b, p.g).potential_form.l2;
      row.values["momentum"] = euler_residual(a, m, b, p.g).momentum.l2;
      resolution.push_back(p.dt);
      table.rows.push_back(std::move(row));
    }
  }

  for (const auto& [name, unused] : table.rows.front().values) {
    std::vector<double> err;
    for (const auto& row : table.rows) err.push_back(row.values.at(name));
    table.orders[name] = fit_loglog_slope(resolution, err);
  }
  return table;
}

nlohmann::ordered_json to_json(const ConvergenceTable& t) {
  nlohmann::ordered_json j;
  j["schema"] = "zakharov.converge/1";
  j["vary"] = t.axis == ConvergeAxis::nz ? "nz" : "dt";
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row;
    row["n_z"] = r.n_z;
    row["dt"] = r.dt;
    for (const auto& [k, v] : r.values) row[k] = v;
    j["rows"].push_back(row);
  }
  nlohmann::ordered_json orders = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.orders) orders[k] = v;
  j["orders"] = orders;
  return j;
}

std::vector<SelfTestCheck> run_selftest(double cg_tol, std::uint64_t seed) {
  constexpr double kReferenceTol = 1e-10;
  const Grid grid(64);
  const SolverConfig solver{cg_tol, 0};
  std::vector<SelfTestCheck> checks;
  auto record = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol});
  };

  {
    const RealField f = RealField::from_function(grid, [](double x) { return std::exp(std::sin(x)); });
    const RealField exact =
        RealField::from_function(grid, [](double x) { return std::cos(x) * std::exp(std::sin(x)); });
    record("spectral_derivative", sup_norm(spectral_derivative(f, 1) - exact), 1e-12);

    const RealField r = random_smooth_field(grid, seed);
    const RealField there = apply_multiplier(r, [](double k) { return std::exp(-0.3 * bracket(k)); });
    const RealField back = apply_multiplier(there, [](double k) { return std::exp(0.3 * bracket(k)); });
    record("multiplier_inverse", sup_norm(back - r) / sup_norm(r), 1e-12);
    record("dealias_idempotent", sup_norm(dealias(dealias(r)) - dealias(r)), 1e-13);
    record("parseval", std::abs(l2_norm(r) - spectral_l2_norm(r)) / l2_norm(r), 1e-13);
  }

  const RealField eta = RealField::from_function(grid, [](double x) { return 0.1 * std::cos(x); });
  MapParams mp;
  mp.n_z = 32;
  mp.delta = default_delta(eta);
  const DomainMap map = build_domain_map(eta, mp);
  auto dno = [&](const RealField& psi) { return dno_apply(eta, psi, map, solver); };

  double symmetry = 0.0;
  double negativity = 0.0;
  double mean_defect = 0.0;
  double linearity = 0.0;
  constexpr int kPairs = 16;
  for (int n = 0; n < kPairs; ++n) {
    const RealField f = random_smooth_field(grid, seed + 2 * n + 1);
    const RealField h = random_smooth_field(grid, seed + 2 * n + 2);
    const RealField gf = dno(f);
    const RealField gh = dno(h);
    symmetry = std::max(symmetry, self_adjointness_defect(f, h, gf, gh));
    const double nf = l2_norm(f);
    negativity = std::max(negativity, -inner(f, gf) / (nf * nf));
    mean_defect = std::max(mean_defect, std::abs(mean(gf)) / nf);
    const RealField combo = dno(1.5 * f + (-0.25) * h);
    const RealField expected = 1.5 * gf + (-0.25) * gh;
    linearity = std::max(linearity, l2_norm(combo - expected) / (1.5 * nf + 0.25 * l2_norm(h)));
  }
  record("dno_self_adjoint", symmetry, 10.0 * kReferenceTol);
  record("dno_nonnegative", std::max(0.0, negativity), 10.0 * kReferenceTol);
  record("dno_zero_mean", mean_defect, 1e-8);
  record("dno_linearity", linearity, 10.0 * kReferenceTol);

  {
    const RealField psi = random_smooth_field(grid, seed + 1000);
    const RealField g_psi = dno(psi);
    const SurfaceVelocity bv = compute_BV(eta, psi, g_psi);
    const RealField ex = spectral_derivative(eta, 1);
    record("surface_velocity_identity", sup_norm(g_psi - (bv.b - hadamard(ex, bv.v))), 1e-12);
  }

  EvolutionParams rest_params;
  rest_params.n_z = 32;
  rest_params.cg_tol = cg_tol;
  const SurfaceState rest{0.0, RealField(grid), RealField(grid)};
  {
    const SurfaceState next = rk4_step(rest, rest_params);
    record("rest_fixed_point", std::max(sup_norm(next.eta), sup_norm(next.psi)), 1e-14);
  }
  {
    const BulkSnapshot snap = reconstruct_bulk(rest, rest_params);
    double hydro = 0.0;
    for (std::size_t k = 0; k < snap.p.values().size(); ++k) {
      hydro = std::max(hydro, std::abs(snap.p.values()[k] + rest_params.g * snap.map.rho().values()[k]));
    }
    record("hydrostatic_pressure", hydro, 10.0 * kReferenceTol);
    const RealField a = taylor_coefficient(snap);
    record("hydrostatic_taylor", sup_norm(a - RealField(grid, rest_params.g)), 1e-8);
  }
  return checks;
}

}  // namespace zakharov
