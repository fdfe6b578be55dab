#include "zakharov/evolution.hpp"

#include <cmath>

#include "zakharov/errors.hpp"

namespace zakharov {

void EvolutionParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw ValidationError("g", "must be positive");
  if (!(h_b > 0.0) || !std::isfinite(h_b)) throw ValidationError("h_b", "must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end", "must be >= 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("delta", "must be >= 0");
  if (n_z < 8) throw ValidationError("n_z", "must be at least 8");
  solver().validate();
}

double default_dt(const Grid& grid, double g, double h_b) {
  const double k = grid.k_max();
  return 0.25 / std::sqrt(g * k * std::tanh(k * h_b));
}

double linear_frequency(double k, double g, double h_b) {
  return std::sqrt(g * k * std::tanh(k * h_b));
}

SurfaceVelocity compute_BV(const RealField& eta, const RealField& psi, const RealField& g_psi) {
  const RealField ex = spectral_derivative(eta, 1);
  const RealField px = spectral_derivative(psi, 1);
  SurfaceVelocity out{RealField(eta.grid()), RealField(eta.grid())};
  for (std::size_t i = 0; i < eta.size(); ++i) {
    out.b[i] = (ex[i] * px[i] + g_psi[i]) / (1.0 + ex[i] * ex[i]);
    out.v[i] = px[i] - out.b[i] * ex[i];
  }
  return out;
}

RealField state_dno(const SurfaceState& state, const EvolutionParams& p) {
  const DomainMap map = build_domain_map(state.eta, p.map_params());
  return dno_apply(state.eta, state.psi, map, p.solver());
}

Tendency zakharov_rhs(const SurfaceState& state, const EvolutionParams& p,
                      const RealField& g_psi) {
  const Grid& grid = state.eta.grid();
  const RealField ex = spectral_derivative(state.eta, 1);
  const RealField px = spectral_derivative(state.psi, 1);
  auto filter = [&](const RealField& f) { return p.dealias_on ? dealias(f) : f; };

  const RealField flux = filter(hadamard(ex, px)) + g_psi;
  const RealField flux_sq = filter(hadamard(flux, flux));
  const RealField slope_sq = filter(hadamard(ex, ex));
  const RealField px_sq = filter(hadamard(px, px));

  Tendency out{g_psi, RealField(grid)};
  for (std::size_t i = 0; i < grid.n_x(); ++i) {
    out.d_psi[i] = -p.g * state.eta[i] - 0.5 * px_sq[i] + 0.5 * flux_sq[i] / (1.0 + slope_sq[i]);
  }
  return out;
}

Tendency zakharov_rhs(const SurfaceState& state, const EvolutionParams& p) {
  return zakharov_rhs(state, p, state_dno(state, p));
}

SurfaceState rk4_step(const SurfaceState& s, const EvolutionParams& p) {
  if (p.dt == 0.0) return s;
  const double dt = p.dt;
  auto shifted = [&](const Tendency& k, double h) {
    SurfaceState out{s.t + h, s.eta, s.psi};
    for (std::size_t i = 0; i < out.eta.size(); ++i) {
      out.eta[i] += h * k.d_eta[i];
      out.psi[i] += h * k.d_psi[i];
    }
    return out;
  };
  const Tendency k1 = zakharov_rhs(s, p);
  const Tendency k2 = zakharov_rhs(shifted(k1, 0.5 * dt), p);
  const Tendency k3 = zakharov_rhs(shifted(k2, 0.5 * dt), p);
  const Tendency k4 = zakharov_rhs(shifted(k3, dt), p);

  SurfaceState out{s.t + dt, s.eta, s.psi};
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.eta.size(); ++i) {
    out.eta[i] += w * (k1.d_eta[i] + 2.0 * k2.d_eta[i] + 2.0 * k3.d_eta[i] + k4.d_eta[i]);
    out.psi[i] += w * (k1.d_psi[i] + 2.0 * k2.d_psi[i] + 2.0 * k3.d_psi[i] + k4.d_psi[i]);
  }
  return out;
}

double hamiltonian(const SurfaceState& state, const EvolutionParams& p) {
  const RealField g_psi = state_dno(state, p);
  return 0.5 * (inner(state.psi, g_psi) + p.g * inner(state.eta, state.eta));
}

double conserved_mass(const SurfaceState& state) { return integral(state.eta); }

}  // namespace zakharov
