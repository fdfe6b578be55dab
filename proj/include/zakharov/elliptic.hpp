#pragma once

// Variational Laplace solves on the straightened strip.
//
// The discrete Dirichlet energy is
//
//   E(u) = sum over cells and x-nodes of dx dz [ rho_z (Lambda_2 u)^2 + rho_z (Lambda_1 u)^2 ]
//        = sum dx dz [ rho_z u_x^2 - 2 rho_x u_x u_z + (1 + rho_x^2) / rho_z u_z^2 ],
//
// evaluated at z-cell midpoints with u_z = (u_{j+1} - u_j) / dz and u_x the
// spectral derivative of the cell average. The operator K = dE/2du is
// symmetric positive semi-definite; the Dirichlet row sits at z = 0 and the
// bottom Neumann condition is natural.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zakharov/bulk_field.hpp"
#include "zakharov/geometry.hpp"
#include "zakharov/spectral.hpp"

namespace zakharov {

struct SolverConfig {
  double cg_tol = 1e-10;
  /// 0 selects 10 * n_x * n_z.
  std::size_t max_iter = 0;

  /// Throws ValidationError unless cg_tol is in (0, 1e-4]. Configuration
  /// entry points enforce this; the solver itself only requires (0, 1).
  void validate() const;
  std::size_t iteration_cap(std::size_t n_x, std::size_t n_z) const noexcept {
    return max_iter == 0 ? 10 * n_x * n_z : max_iter;
  }
};

struct SolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Cutoff used by the lifting: quintic smoothstep, 0 for z <= -1, 1 for z >= -1/2.
double lift_cutoff(double z) noexcept;

/// chi(z) exp(z <D>) psi on the collocation grid of `map`.
BulkField lift_trace(const RealField& psi, const DomainMap& map);

class EnergyOperator {
 public:
  explicit EnergyOperator(const DomainMap& map);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t n_z() const noexcept { return n_z_; }

  /// out = K u over the full grid (all n_z rows).
  void apply(std::span<const double> u, std::span<double> out) const;
  BulkField apply(const BulkField& u) const;

  /// u^T K v.
  double bilinear(const BulkField& u, const BulkField& v) const;
  double energy(const BulkField& u) const { return bilinear(u, u); }

 private:
  Grid grid_;
  std::size_t n_z_;
  double dz_;
  // Per cell (n_z - 1 rows of n_x), already scaled by dx dz.
  std::vector<double> a11_;
  std::vector<double> a12_;
  std::vector<double> a22_;
};

EnergyOperator assemble_energy(const DomainMap& map);

/// Phi = u + lift with the variational u. Trace at z = 0 equals `boundary` exactly.
/// Throws NoConvergence if CG does not reach cfg.cg_tol.
BulkField solve_dirichlet(const RealField& boundary, const DomainMap& map,
                          const SolverConfig& cfg, SolveStats* stats = nullptr);

/// Weak normal flux of a solved potential: the Dirichlet rows of K Phi divided by dx.
/// For a discrete-harmonic Phi this is the discrete Dirichlet-Neumann operator.
RealField surface_flux(const EnergyOperator& energy, const BulkField& phi);

/// G(eta) psi. `map` must have been built from this eta.
RealField dno_apply(const RealField& eta, const RealField& psi, const DomainMap& map,
                    const SolverConfig& cfg, SolveStats* stats = nullptr);

enum class Depth { finite, infinite };

/// |k| tanh(h_b |k|) (finite) or |k| (infinite), zero on the mean mode.
RealField dno_flat_symbol(const RealField& psi, double h_b, Depth depth);

struct SurfaceGradients {
  RealField b;  ///< (Lambda_1 Phi)(., 0)
  RealField v;  ///< (Lambda_2 Phi)(., 0)
};

/// Surface traces of grad Phi through the one-sided z stencil.
SurfaceGradients surface_gradients(const BulkField& phi, const DomainMap& map);

/// Process-wide count of solve_dirichlet calls, for diagnostics.
std::uint64_t solver_invocations() noexcept;

}  // namespace zakharov
