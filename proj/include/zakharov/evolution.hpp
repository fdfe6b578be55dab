#pragma once

// Zakharov/Craig-Sulem system for the surface unknowns (eta, psi):
//
//   d_t eta = G(eta) psi,
//   d_t psi = -g eta - |dx psi|^2 / 2 + (dx eta dx psi + G(eta) psi)^2 / (2 (1 + |dx eta|^2)),
//
// advanced with classical RK4. The straightening map is rebuilt from the
// stage elevation at every stage.

#include <cstddef>

#include "zakharov/elliptic.hpp"
#include "zakharov/geometry.hpp"
#include "zakharov/spectral.hpp"

namespace zakharov {

struct SurfaceState {
  double t = 0.0;
  RealField eta;
  RealField psi;
};

struct EvolutionParams {
  double g = 1.0;
  double h_b = 1.0;
  double delta = 0.05;
  std::size_t n_z = 64;
  double dt = 0.03125;
  double t_end = 1.0;
  bool dealias_on = true;
  double cg_tol = 1e-10;
  std::size_t cg_max_iter = 0;
  /// Strip margin checked at every stage; negative selects h_b / 10.
  double margin = -1.0;

  MapParams map_params() const noexcept { return {h_b, delta, n_z, margin}; }
  SolverConfig solver() const noexcept { return {cg_tol, cg_max_iter}; }
  /// Throws ValidationError on g <= 0, dt <= 0 and the like.
  void validate() const;
};

/// 0.25 / sqrt(g k_max tanh(k_max h_b)).
double default_dt(const Grid& grid, double g, double h_b);

/// sqrt(g k tanh(k h_b)).
double linear_frequency(double k, double g, double h_b);

struct SurfaceVelocity {
  RealField b;  ///< vertical velocity at the surface
  RealField v;  ///< horizontal velocity at the surface
};

/// B = (dx eta dx psi + G psi) / (1 + |dx eta|^2), V = dx psi - B dx eta.
SurfaceVelocity compute_BV(const RealField& eta, const RealField& psi, const RealField& g_psi);

struct Tendency {
  RealField d_eta;
  RealField d_psi;
};

Tendency zakharov_rhs(const SurfaceState& state, const EvolutionParams& p);

/// Same, reusing a DNO value already computed for this state.
Tendency zakharov_rhs(const SurfaceState& state, const EvolutionParams& p, const RealField& g_psi);

SurfaceState rk4_step(const SurfaceState& state, const EvolutionParams& p);

/// H = 1/2 int (psi G(eta) psi + g eta^2) dx.
double hamiltonian(const SurfaceState& state, const EvolutionParams& p);

/// int eta dx.
double conserved_mass(const SurfaceState& state);

/// G(eta) psi for a state, building the map with the run's parameters.
RealField state_dno(const SurfaceState& state, const EvolutionParams& p);

}  // namespace zakharov
