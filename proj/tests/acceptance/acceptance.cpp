// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Baseline grid: n_x = 128, n_z = 64, L = 2 pi, g = 1, h_b = 1.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "zakharov/diagnostics.hpp"
#include "zakharov/driver.hpp"
#include "zakharov/snapshot_io.hpp"

using namespace zakharov;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kNx = 128;
constexpr std::size_t kNz = 64;
constexpr double kG = 1.0;
constexpr double kHb = 1.0;
constexpr double kCgTol = 1e-10;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Grid baseline_grid() { return Grid(kNx); }

EvolutionParams baseline_params(const RealField& eta0) {
  EvolutionParams p;
  p.g = kG;
  p.h_b = kHb;
  p.n_z = kNz;
  p.cg_tol = kCgTol;
  p.delta = default_delta(eta0);
  p.dt = default_dt(eta0.grid(), kG, kHb);
  return p;
}

RealField cosine(const Grid& grid, double a, double k) {
  return RealField::from_function(grid, [=](double x) { return a * std::cos(k * x); });
}

DomainMap map_for(const RealField& eta, std::size_t n_z) {
  MapParams mp;
  mp.h_b = kHb;
  mp.n_z = n_z;
  mp.delta = default_delta(eta);
  return build_domain_map(eta, mp);
}

SurfaceState evolve(SurfaceState s, const EvolutionParams& p, std::uint64_t steps) {
  return integrate(std::move(s), p, steps);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zakharov_acceptance";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ZAKHAROV_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double mode_amplitude(const RealField& f, std::size_t m) { return 2.0 * fourier_coefficients(f)[m].real(); }

// 1. Flat-surface DNO against k tanh(k h_b).
Verdict flat_dno_oracle() {
  const Grid grid = baseline_grid();
  const RealField eta(grid);
  const RealField psi = cosine(grid, 1.0, 3.0);
  const RealField exact = 3.0 * std::tanh(3.0 * kHb) * psi;
  std::vector<double> dz, err;
  double err_baseline = 0.0;
  for (std::size_t n_z : {32, 64, 128}) {
    const DomainMap map = map_for(eta, n_z);
    const double e = sup_norm(dno_apply(eta, psi, map, {kCgTol, 0}) - exact) / sup_norm(exact);
    dz.push_back(1.0 / static_cast<double>(n_z - 1));
    err.push_back(e);
    if (n_z == kNz) err_baseline = e;
  }
  const double order = fit_loglog_slope(dz, err);
  return {err_baseline <= 5e-3 && order >= 1.8 && order <= 2.2,
          fmt("rel sup err %.3e at n_z=64 (<= 5e-3); n_z-order %.3f over {32,64,128} (in [1.8, 2.2])",
              err_baseline, order)};
}

// 2. Self-adjointness, nonnegativity and zero mean on random pairs.
Verdict dno_structure() {
  const Grid grid = baseline_grid();
  double worst_sym = 0.0;
  double worst_neg = 0.0;
  double worst_mean = 0.0;
  bool ok = true;
  for (double amp : {0.0, 0.1}) {
    const RealField eta = cosine(grid, amp, 1.0);
    const DomainMap map = map_for(eta, kNz);
    for (std::uint64_t n = 0; n < 100; ++n) {
      const RealField f = random_smooth_field(grid, 1000 + 2 * n);
      const RealField h = random_smooth_field(grid, 1001 + 2 * n);
      const RealField gf = dno_apply(eta, f, map, {kCgTol, 0});
      const RealField gh = dno_apply(eta, h, map, {kCgTol, 0});
      const double sym = self_adjointness_defect(f, h, gf, gh);
      const double neg = std::max(0.0, -inner(f, gf) / inner(f, f));
      const double mean_rel = std::abs(mean(gf)) / l2_norm(f);
      worst_sym = std::max(worst_sym, sym);
      worst_neg = std::max(worst_neg, neg);
      worst_mean = std::max(worst_mean, mean_rel);
      ok = ok && sym <= 10 * kCgTol && neg <= 10 * kCgTol && mean_rel <= 1e-8;
    }
  }
  return {ok, fmt("eta in {0, 0.1 cos x}, 100 pairs each: max symmetry defect %.3e (<= %.0e), "
                  "max -<f,Gf>/|f|^2 %.3e, max |mean G f|/|f| %.3e (<= 1e-8)",
                  worst_sym, 10 * kCgTol, worst_neg, worst_mean)};
}

// 3. Machine-level identities.
Verdict algebraic_identities() {
  const Grid grid = baseline_grid();
  SurfaceState s{0.0, cosine(grid, 0.1, 1.0),
                 RealField::from_function(grid, [](double x) { return 0.05 * std::sin(2 * x) + 0.02 * std::cos(5 * x); })};
  const EvolutionParams p = baseline_params(s.eta);
  const BulkSnapshot b0 = reconstruct_bulk(s, p);
  const RealField ex = spectral_derivative(s.eta, 1);
  const SurfaceVelocity bv = compute_BV(s.eta, s.psi, b0.g_psi);
  const double id_bv = sup_norm(b0.g_psi - (bv.b - hadamard(ex, bv.v))) / std::max(1.0, sup_norm(b0.g_psi));
  const double kin = trace_checks(b0, s, b0.g_psi).kinematic / std::max(1.0, l2_norm(b0.g_psi));

  SurfaceState s1 = rk4_step(s, p);
  SurfaceState s2 = rk4_step(s1, p);
  const BulkSnapshot b1 = reconstruct_bulk(s1, p);
  const BulkSnapshot b2 = reconstruct_bulk(s2, p);
  const double gap = bernoulli_residual(b0, b1, b2, kG).form_gap;
  const double worst = std::max({id_bv, kin, gap});
  return {worst <= 1e-12, fmt("|G psi - (B - eta_x V)| %.3e, Bernoulli form gap %.3e, kinematic %.3e (all <= 1e-12)",
                              id_bv, gap, kin)};
}

// 4. Linear dispersion of a small standing wave.
Verdict linear_dispersion() {
  const Grid grid = baseline_grid();
  const double a = 1e-4;
  const double k = 2.0;
  const double omega = linear_frequency(k, kG, kHb);
  const SurfaceState s0{0.0, cosine(grid, a, k), RealField(grid)};
  const EvolutionParams base = baseline_params(s0.eta);

  const DomainMap flat = map_for(RealField(grid), kNz);
  const double lambda_h = mode_amplitude(dno_apply(flat.eta(), cosine(grid, 1.0, k), flat, {kCgTol, 0}), 2);
  const double omega_h = std::sqrt(kG * lambda_h);

  auto measure = [&](double dt) {
    EvolutionParams p = base;
    p.dt = dt;
    const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(2.0 * 2.0 * std::numbers::pi / omega / dt));
    std::vector<double> samples{mode_amplitude(s0.eta, 2)};
    integrate(s0, p, steps, [&](std::uint64_t, const SurfaceState& s) { samples.push_back(mode_amplitude(s.eta, 2)); });
    return recurrence_frequency(samples, dt);
  };
  const double w1 = measure(base.dt);
  const double w2 = measure(0.5 * base.dt);
  const double e1 = std::abs(w1 - omega) / omega;
  const double e2 = std::abs(w2 - omega) / omega;
  return {e1 <= 1e-2 && e2 < e1,
          fmt("rel freq err %.4e at dt=%.5f (<= 1e-2), %.4e at dt/2 (must decrease); "
              "vs semi-discrete sqrt(g lambda_h): %.3e, %.3e",
              e1, base.dt, e2, std::abs(w1 - omega_h) / omega_h, std::abs(w2 - omega_h) / omega_h)};
}

// 5. Hamiltonian and mass conservation over five periods.
Verdict conservation() {
  const Grid grid = baseline_grid();
  const double a = 1e-3;
  const double k = 2.0;
  const double period = 2.0 * std::numbers::pi / linear_frequency(k, kG, kHb);
  const SurfaceState s0{0.0, cosine(grid, a, k), RealField(grid)};
  const EvolutionParams base = baseline_params(s0.eta);
  const double h0 = hamiltonian(s0, base);
  const double m0 = conserved_mass(s0);

  double mass_drift = 0.0;
  auto drift = [&](double dt, std::uint64_t sample_every) {
    EvolutionParams p = base;
    p.dt = dt;
    const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(5.0 * period / dt));
    double worst = 0.0;
    integrate(s0, p, steps, [&](std::uint64_t n, const SurfaceState& s) {
      mass_drift = std::max(mass_drift, std::abs(conserved_mass(s) - m0));
      if (n % sample_every == 0 || n == steps) worst = std::max(worst, std::abs(hamiltonian(s, p) - h0) / h0);
    });
    return worst;
  };
  const double d1 = drift(base.dt, 8);
  const double d2 = drift(0.5 * base.dt, 16);
  const double order = std::log2(d1 / d2);
  const double mass_bound = 1e-9 * grid.length() * a;
  return {d1 <= 1e-6 && order >= 3.5 && order <= 4.5 && mass_drift <= mass_bound,
          fmt("max rel H drift %.3e at dt (<= 1e-6), %.3e at dt/2, order %.2f (in [3.5, 4.5]); "
              "mass drift %.2e (<= %.2e)",
              d1, d2, order, mass_drift, mass_bound)};
}

struct StandingRun {
  VerifyOutcome strict;
  VerifyOutcome demanding;
  std::size_t snapshots = 0;
};

// Standing wave a = 1e-3, k = 2 through simulate + verify, one period.
StandingRun standing_wave_run() {
  const fs::path out = scratch("standing.jsonl");
  RunConfig cfg = parse_config_text(
      "n_x = 128\nn_z = 64\ng = 1\nh_b = 1\ncg_tol = 1e-10\n"
      "ic_kind = standing_wave\nic_amplitude = 1e-3\nic_wavenumber = 2\n"
      "t_end = 4.6\nsnapshot_stride = 8\n");
  cfg.output_path = out;
  run_simulate(cfg);
  StandingRun r;
  r.strict = run_verify(out, cfg, scratch("standing.report.json"));
  r.snapshots = r.strict.report.snapshots;
  RunConfig demanding = cfg;
  demanding.taylor_threshold = 2.0 * kG;
  r.demanding = run_verify(out, demanding, scratch("standing.demanding.report.json"));
  return r;
}

// 6. Bulk Euler certification.
Verdict euler_certification(const StandingRun& run) {
  const Grid grid = baseline_grid();
  const SurfaceState s0{0.0, cosine(grid, 1e-3, 2.0), RealField(grid)};
  const EvolutionParams base = baseline_params(s0.eta);
  const double t_c = 1.25;

  std::vector<double> dts, bern, mom;
  for (double dt : {0.0625, 0.03125, 0.015625}) {
    EvolutionParams p = base;
    p.dt = dt;
    const std::uint64_t n = static_cast<std::uint64_t>(std::llround(t_c / dt));
    SurfaceState prev = evolve(s0, p, n - 1);
    SurfaceState mid = rk4_step(prev, p);
    mid.t = static_cast<double>(n) * dt;
    SurfaceState next = rk4_step(mid, p);
    next.t = static_cast<double>(n + 1) * dt;
    const BulkSnapshot a = reconstruct_bulk(prev, p);
    const BulkSnapshot m = reconstruct_bulk(mid, p);
    const BulkSnapshot b = reconstruct_bulk(next, p);
    dts.push_back(dt);
    bern.push_back(bernoulli_residual(a, m, b, kG).potential_form.l2);
    mom.push_back(euler_residual(a, m, b, kG).momentum.l2);
  }
  const double bern_order = fit_loglog_slope(dts, bern);
  const double mom_order = fit_loglog_slope(dts, mom);

  const SurfaceState sc = evolve(s0, base, static_cast<std::uint64_t>(std::llround(t_c / base.dt)));
  std::vector<double> dz, div, curl, th, tv;
  for (std::size_t n_z : {32, 64, 128}) {
    EvolutionParams p = base;
    p.n_z = n_z;
    const BulkSnapshot b = reconstruct_bulk(sc, p);
    const ResidualReport kin = kinematic_residual(b);
    const TraceErrors tr = trace_checks(b, sc, b.g_psi);
    dz.push_back(1.0 / static_cast<double>(n_z - 1));
    div.push_back(kin.divergence.l2);
    curl.push_back(kin.curl.l2);
    th.push_back(tr.horizontal);
    tv.push_back(tr.vertical);
  }
  const double o_div = fit_loglog_slope(dz, div);
  const double o_curl = fit_loglog_slope(dz, curl);
  const double o_th = fit_loglog_slope(dz, th);
  const double o_tv = fit_loglog_slope(dz, tv);

  const auto& rep = run.strict.report;
  bool finite = true;
  for (const auto* v : {&bern, &mom, &div, &curl, &th, &tv}) {
    for (double x : *v) finite = finite && std::isfinite(x);
  }
  bool no_named_failure = true;
  for (const auto& f : run.strict.failures) no_named_failure = no_named_failure && f.rfind("taylor", 0) == 0;
  const bool pass = finite && no_named_failure && bern_order >= 1.8 && mom_order >= 1.8 && o_div >= 1.8 &&
                    o_curl >= 1.8 && o_th >= 1.8 && o_tv >= 1.8 && rep.trace_errors.pressure <= 10 * kCgTol;
  return {pass, fmt("dt-orders: Bernoulli %.2f (%.2e..%.2e), momentum %.2f; n_z-orders: div %.2f, curl %.2f, "
                    "trace V %.2f, trace B %.2f (all >= 1.8); max |P|_surface| %.2e over %zu snapshots (<= %.0e)",
                    bern_order, bern.front(), bern.back(), mom_order, o_div, o_curl, o_th, o_tv,
                    rep.trace_errors.pressure, run.snapshots, 10 * kCgTol)};
}

// 7. Rest state.
Verdict hydrostatic_exactness() {
  const Grid grid = baseline_grid();
  const RealField zero(grid);
  const EvolutionParams p = baseline_params(zero);
  std::vector<BulkSnapshot> snaps;
  for (int n = 0; n < 3; ++n) {
    SurfaceState s{n * p.dt, zero, zero};
    snaps.push_back(reconstruct_bulk(s, p));
  }
  const BulkSnapshot& m = snaps[1];
  double hydro = 0.0;
  for (std::size_t k = 0; k < m.p.values().size(); ++k) {
    hydro = std::max(hydro, std::abs(m.p.values()[k] + kG * m.map.rho().values()[k]));
  }
  const ResidualReport r = euler_residual(snaps[0], m, snaps[2], kG);
  const double bern = bernoulli_residual(snaps[0], m, snaps[2], kG).potential_form.sup;
  const TraceErrors tr = trace_checks(m, {m.t, zero, zero}, m.g_psi);
  const double residual = std::max({r.momentum.sup, r.divergence.sup, r.curl.sup, bern, tr.horizontal,
                                    tr.vertical, tr.pressure, tr.kinematic});
  const double taylor = sup_norm(taylor_coefficient(m) - RealField(grid, kG));
  return {hydro <= 10 * kCgTol && residual <= 10 * kCgTol && taylor <= 1e-8,
          fmt("max |P + g rho| %.2e, max residual %.2e (<= %.0e), max |a - g| %.2e (<= 1e-8)", hydro, residual,
              10 * kCgTol, taylor)};
}

// 8. Taylor sign along the standing-wave run.
Verdict taylor_positivity(const StandingRun& run) {
  const auto& rep = run.strict.report;
  bool named = false;
  for (const auto& f : run.demanding.failures) named = named || f.rfind("taylor_violation@step", 0) == 0;
  bool strict_clean = true;
  for (const auto& f : run.strict.failures) strict_clean = strict_clean && f.rfind("taylor", 0) != 0;
  return {rep.taylor_ok && strict_clean && rep.taylor_min >= 0.5 * kG && named && !run.demanding.report.taylor_ok,
          fmt("min a %.6f over %zu snapshots (>= g/2); threshold 2g run reports named violation: %s",
              rep.taylor_min, run.snapshots, named ? "yes" : "no")};
}

// 9. Strip violation before any solve; exit code 2 for bad configs.
Verdict robustness() {
  const fs::path ic = scratch("below_bottom.txt");
  {
    std::ofstream f(ic);
    const Grid grid(32);
    for (std::size_t i = 0; i < 32; ++i) f << -0.6 + 0.5 * std::cos(grid.x(i)) << " 0\n";
  }
  RunConfig cfg = parse_config_text("n_x = 32\nn_z = 16\nic_kind = custom_file\nic_file = below_bottom.txt\nt_end = 1\n");
  cfg.ic_file = ic;
  cfg.output_path = scratch("below_bottom.jsonl");
  const auto before = solver_invocations();
  bool strip = false;
  try {
    run_simulate(cfg);
  } catch (const StripViolation&) {
    strip = true;
  }
  const bool no_solve = solver_invocations() == before;

  const fs::path zero_dt = scratch("zero_dt.conf");
  const fs::path neg_dt = scratch("neg_dt.conf");
  const fs::path unknown = scratch("unknown.conf");
  std::ofstream(zero_dt) << "dt = 0\n";
  std::ofstream(neg_dt) << "dt = -0.1\n";
  std::ofstream(unknown) << "n_x = 64\nviscosity = 0.01\n";
  const int c0 = run_cli("simulate --config " + zero_dt.string());
  const int c1 = run_cli("simulate --config " + neg_dt.string());
  const int c2 = run_cli("simulate --config " + unknown.string());
  return {strip && no_solve && c0 == 2 && c1 == 2 && c2 == 2,
          fmt("min eta = -1.1: StripViolation %s, solver calls before it %llu; exit codes dt=0 -> %d, "
              "dt=-0.1 -> %d, unknown key -> %d (expect 2)",
              strip ? "raised" : "missing", static_cast<unsigned long long>(solver_invocations() - before), c0, c1,
              c2)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  StandingRun run;
  bool have_run = false;
  auto standing = [&]() -> const StandingRun& {
    if (!have_run) {
      run = standing_wave_run();
      have_run = true;
    }
    return run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 flat-surface DNO oracle", flat_dno_oracle},
      {"C2 DNO structure", dno_structure},
      {"C3 algebraic identities", algebraic_identities},
      {"C4 linear dispersion", linear_dispersion},
      {"C5 conservation", conservation},
      {"C6 bulk Euler certification", [&] { return euler_certification(standing()); }},
      {"C7 hydrostatic exactness", hydrostatic_exactness},
      {"C8 Taylor positivity", [&] { return taylor_positivity(standing()); }},
      {"C9 robustness", robustness},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
