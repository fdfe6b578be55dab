#pragma once

// Rebuilds the bulk Euler fields from a surface state and measures how well
// they satisfy the free-surface Euler system:
//
//   Phi : harmonic, Phi = psi on the surface, Neumann at the bottom;
//   Q   : harmonic, Q = g eta + (B^2 + V^2) / 2 on the surface;
//   P   = Q - g y - |grad Phi|^2 / 2,   v = grad Phi.
//
// All time differences are taken at fixed straightened coordinates (x, z),
// with the moving-map correction d_t f(x, y) = d_t f~ - d_t rho Lambda_1 f~.

#include <map>
#include <string>

#include "zakharov/bulk_field.hpp"
#include "zakharov/elliptic.hpp"
#include "zakharov/evolution.hpp"
#include "zakharov/geometry.hpp"

namespace zakharov {

struct BulkSnapshot {
  double t = 0.0;
  DomainMap map;
  BulkField phi;
  BulkField q;
  BulkField p;
  /// Velocity components at the nodes: Lambda_2 Phi and Lambda_1 Phi, with the
  /// surface row holding the traces (V, B).
  BulkField vx;
  BulkField vy;
  RealField b;
  RealField v;
  /// G(eta) psi, i.e. d_t eta, at this time.
  RealField g_psi;
};

BulkSnapshot reconstruct_bulk(const SurfaceState& state, const EvolutionParams& p);

/// Interior L2 (dx dz weighted) and sup norms over nodes with z in [-0.9, -0.1]
/// that are at least two layers from either boundary.
struct InteriorNorm {
  double l2 = 0.0;
  double sup = 0.0;
};
InteriorNorm interior_norm(const BulkField& f);

/// Time derivative at fixed physical (x, y) of a quantity sampled at t - dt, t, t + dt
/// on the straightened grid: centered difference minus d_t rho Lambda_1 f~(t).
BulkField physical_time_derivative(const BulkField& prev, const BulkField& mid_field,
                                   const BulkField& next, const BulkSnapshot& mid, double dt);

struct BernoulliResidual {
  InteriorNorm potential_form;  ///< d_t Phi + Q
  InteriorNorm pressure_form;   ///< d_t Phi + |v|^2 / 2 + P + g rho
  /// Largest pointwise gap between the two forms over the whole grid.
  double form_gap = 0.0;
};

/// Throws GridMismatch when the three snapshots do not share a grid or are not equally spaced.
BernoulliResidual bernoulli_residual(const BulkSnapshot& prev, const BulkSnapshot& mid,
                                     const BulkSnapshot& next, double g);

/// Interior L2 norm of d_t Phi + Q.
double bernoulli_check(const BulkSnapshot& prev, const BulkSnapshot& next,
                       const BulkSnapshot& mid, double g);

struct ResidualReport {
  InteriorNorm momentum_x;
  InteriorNorm momentum_y;
  InteriorNorm momentum;  ///< combined |(R_x, R_y)|
  InteriorNorm divergence;
  InteriorNorm curl;
};

ResidualReport euler_residual(const BulkSnapshot& prev, const BulkSnapshot& mid,
                              const BulkSnapshot& next, double g);

/// div v and curl v only (needs a single snapshot).
ResidualReport kinematic_residual(const BulkSnapshot& snap);

struct TraceErrors {
  double horizontal = 0.0;  ///< ||Lambda_2 Phi(., 0) - V||
  double vertical = 0.0;    ///< ||Lambda_1 Phi(., 0) - B||
  double pressure = 0.0;    ///< ||P(., 0)||
  double kinematic = 0.0;   ///< ||d_t eta - (B - dx eta V)||
};

TraceErrors trace_checks(const BulkSnapshot& snap, const SurfaceState& state,
                         const RealField& d_eta);

/// a = -(Lambda_1 P)(., 0).
RealField taylor_coefficient(const BulkSnapshot& snap);

struct VerificationReport {
  double euler_residual_l2 = 0.0;
  double euler_residual_sup = 0.0;
  double bernoulli_residual_l2 = 0.0;
  double bernoulli_form_gap = 0.0;
  double div_residual = 0.0;
  double curl_residual = 0.0;
  TraceErrors trace_errors;
  double taylor_min = 0.0;
  double taylor_threshold = 0.0;
  bool taylor_ok = true;
  double hamiltonian_drift = 0.0;
  double mass_drift = 0.0;
  std::size_t snapshots = 0;
  std::map<std::string, double> observed_orders;
};

}  // namespace zakharov
