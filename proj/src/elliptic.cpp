#include "zakharov/elliptic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

std::atomic<std::uint64_t> g_solves{0};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Exact inverse of the flat-map (eta = 0) operator restricted to the
/// non-Dirichlet rows: one real tridiagonal solve in z per Fourier mode.
class FlatPreconditioner {
 public:
  FlatPreconditioner(const Grid& grid, std::size_t n_z, double h_b)
      : fft_(grid.n_x(), n_z - 1), rows_(n_z - 1), modes_(grid.modes()) {
    const double dx = grid.dx();
    const double dz = 1.0 / static_cast<double>(n_z - 1);
    lower_.assign(modes_ * rows_, 0.0);
    inv_pivot_.assign(modes_ * rows_, 0.0);
    offdiag_.assign(modes_, 0.0);
    for (std::size_t m = 0; m < modes_; ++m) {
      const double k = m + 1 == modes_ ? 0.0 : grid.wavenumber(m);
      const double alpha = dx * dz * h_b * k * k / 4.0;
      const double beta = dx / (h_b * dz);
      const double off = alpha - beta;
      offdiag_[m] = off;
      // Thomas factorization; row 0 is the bottom (one cell), the rest see two cells.
      double prev_pivot = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double diag = (r == 0 ? 1.0 : 2.0) * (alpha + beta);
        const double l = r == 0 ? 0.0 : off / prev_pivot;
        const double pivot = diag - l * off;
        lower_[m * rows_ + r] = l;
        inv_pivot_[m * rows_ + r] = 1.0 / pivot;
        prev_pivot = pivot;
      }
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    std::vector<Complex> spec(modes_ * rows_);
    fft_.forward(r, spec);
    // spec is row-major: row r, mode m at r * modes_ + m.
    for (std::size_t m = 0; m < modes_; ++m) {
      for (std::size_t j = 1; j < rows_; ++j) {
        spec[j * modes_ + m] -= lower_[m * rows_ + j] * spec[(j - 1) * modes_ + m];
      }
      const std::size_t last = rows_ - 1;
      spec[last * modes_ + m] *= inv_pivot_[m * rows_ + last];
      for (std::size_t j = last; j-- > 0;) {
        spec[j * modes_ + m] =
            (spec[j * modes_ + m] - offdiag_[m] * spec[(j + 1) * modes_ + m]) *
            inv_pivot_[m * rows_ + j];
      }
    }
    fft_.inverse(spec, z);
  }

 private:
  RowFft fft_;
  std::size_t rows_;
  std::size_t modes_;
  std::vector<double> lower_;
  std::vector<double> inv_pivot_;
  std::vector<double> offdiag_;
};

struct Solved {
  BulkField phi;
  SolveStats stats;
};

Solved solve_with(const EnergyOperator& op, const RealField& boundary, const DomainMap& map,
                  const SolverConfig& cfg) {
  if (!(cfg.cg_tol > 0.0 && cfg.cg_tol < 1.0)) {
    throw ValidationError("cg_tol", "must lie in (0, 1)");
  }
  ++g_solves;
  const std::size_t nx = map.grid().n_x();
  const std::size_t nz = map.n_z();
  const std::size_t n_full = nx * nz;
  const std::size_t n_int = nx * (nz - 1);

  BulkField phi = lift_trace(boundary, map);
  std::vector<double> full(n_full);
  op.apply(phi.values(), full);
  std::vector<double> b(full.begin(), full.begin() + static_cast<long>(n_int));
  for (double& v : b) v = -v;

  const FlatPreconditioner precond(map.grid(), nz, map.params().h_b);
  auto apply_interior = [&](std::span<const double> p, std::span<double> q) {
    std::vector<double> in(n_full, 0.0);
    std::copy(p.begin(), p.end(), in.begin());
    op.apply(in, full);
    std::copy(full.begin(), full.begin() + static_cast<long>(n_int), q.begin());
  };

  std::vector<double> x(n_int, 0.0), r = b, z(n_int), p(n_int), q(n_int);
  precond.apply(r, z);
  p = z;
  double rz = dot(r, z);
  const double rz0 = rz;
  SolveStats stats;
  const std::size_t cap = cfg.iteration_cap(nx, nz);
  if (rz0 > 0.0) {
    for (;;) {
      if (!std::isfinite(rz) || rz < 0.0) throw NoConvergence(stats.iterations, rz);
      stats.relative_residual = std::sqrt(rz / rz0);
      if (stats.relative_residual <= cfg.cg_tol) break;
      if (stats.iterations >= cap) throw NoConvergence(stats.iterations, stats.relative_residual);
      apply_interior(p, q);
      const double alpha = rz / dot(p, q);
      for (std::size_t i = 0; i < n_int; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      precond.apply(r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      for (std::size_t i = 0; i < n_int; ++i) p[i] = z[i] + beta * p[i];
      rz = rz_new;
      ++stats.iterations;
    }
  }

  auto values = phi.values();
  for (std::size_t i = 0; i < n_int; ++i) values[i] += x[i];
  phi.set_row(phi.top(), boundary);
  return {std::move(phi), stats};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(cg_tol > 0.0 && cg_tol <= 1e-4)) throw ValidationError("cg_tol", "must lie in (0, 1e-4]");
}

double lift_cutoff(double z) noexcept {
  const double t = std::clamp((z + 1.0) / 0.5, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

BulkField lift_trace(const RealField& psi, const DomainMap& map) {
  if (!(psi.grid() == map.grid())) throw GridMismatch("lift_trace: trace grid differs from map");
  BulkField out(map.grid(), map.n_z());
  for (std::size_t j = 0; j < out.n_z(); ++j) out.set_row(j, psi);
  std::vector<double> zs(out.n_z());
  for (std::size_t j = 0; j < out.n_z(); ++j) zs[j] = out.z(j);
  apply_row_symbol(map.grid(), out.values(), out.n_z(), [&](std::size_t r, std::size_t, double k) {
    return Complex{lift_cutoff(zs[r]) * std::exp(zs[r] * bracket(k)), 0.0};
  });
  out.set_row(out.top(), psi);
  for (std::size_t i = 0; i < out.n_x(); ++i) out(0, i) = 0.0;
  return out;
}

EnergyOperator::EnergyOperator(const DomainMap& map)
    : grid_(map.grid()), n_z_(map.n_z()), dz_(1.0 / static_cast<double>(map.n_z() - 1)) {
  std::vector<double> mids(n_z_ - 1);
  for (std::size_t c = 0; c + 1 < n_z_; ++c) mids[c] = -1.0 + (static_cast<double>(c) + 0.5) * dz_;
  const MapSamples s = map.sample(mids);
  const double w = grid_.dx() * dz_;
  const std::size_t n = s.rho.size();
  a11_.resize(n);
  a12_.resize(n);
  a22_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double rz = s.dz_rho[k];
    const double rx = s.dx_rho[k];
    a11_[k] = w * rz;
    a12_[k] = -w * rx;
    a22_[k] = w * (1.0 + rx * rx) / rz;
  }
}

void EnergyOperator::apply(std::span<const double> u, std::span<double> out) const {
  const std::size_t nx = grid_.n_x();
  const std::size_t cells = n_z_ - 1;
  if (u.size() != nx * n_z_ || out.size() != nx * n_z_) {
    throw std::invalid_argument("EnergyOperator::apply: size mismatch");
  }
  const std::size_t n = nx * cells;
  std::vector<double> avg(n), gz(n), gx(n);
  const double inv_dz = 1.0 / dz_;
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double lo = u[c * nx + i];
      const double hi = u[(c + 1) * nx + i];
      avg[c * nx + i] = 0.5 * (lo + hi);
      gz[c * nx + i] = (hi - lo) * inv_dz;
    }
  }
  derivative_rows(grid_, avg, gx, cells);
  std::vector<double> fx(n), fz(n);
  for (std::size_t k = 0; k < n; ++k) {
    fx[k] = a11_[k] * gx[k] + a12_[k] * gz[k];
    fz[k] = a12_[k] * gx[k] + a22_[k] * gz[k];
  }
  // Transpose of the spectral derivative is its negative.
  std::vector<double> dfx(n);
  derivative_rows(grid_, fx, dfx, cells);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = c * nx + i;
      const double from_x = -0.5 * dfx[k];
      const double from_z = fz[k] * inv_dz;
      out[c * nx + i] += from_x - from_z;
      out[(c + 1) * nx + i] += from_x + from_z;
    }
  }
}

BulkField EnergyOperator::apply(const BulkField& u) const {
  BulkField out(u.grid(), u.n_z());
  apply(u.values(), out.values());
  return out;
}

double EnergyOperator::bilinear(const BulkField& u, const BulkField& v) const {
  return dot(u.values(), apply(v).values());
}

EnergyOperator assemble_energy(const DomainMap& map) { return EnergyOperator(map); }

BulkField solve_dirichlet(const RealField& boundary, const DomainMap& map,
                          const SolverConfig& cfg, SolveStats* stats) {
  const EnergyOperator op(map);
  Solved s = solve_with(op, boundary, map, cfg);
  if (stats != nullptr) *stats = s.stats;
  return std::move(s.phi);
}

RealField surface_flux(const EnergyOperator& energy, const BulkField& phi) {
  const BulkField kphi = energy.apply(phi);
  RealField g = kphi.row_field(kphi.top());
  g *= 1.0 / phi.grid().dx();
  return g;
}

RealField dno_apply(const RealField& eta, const RealField& psi, const DomainMap& map,
                    const SolverConfig& cfg, SolveStats* stats) {
  if (!(eta.grid() == map.grid()) ||
      !std::equal(eta.values().begin(), eta.values().end(), map.eta().values().begin())) {
    throw GridMismatch("dno_apply: map was not built from this surface");
  }
  const EnergyOperator op(map);
  Solved s = solve_with(op, psi, map, cfg);
  if (stats != nullptr) *stats = s.stats;
  return surface_flux(op, s.phi);
}

RealField dno_flat_symbol(const RealField& psi, double h_b, Depth depth) {
  if (depth == Depth::infinite) {
    return apply_multiplier(psi, [](double k) { return k; });
  }
  return apply_multiplier(psi, [h_b](double k) { return k * std::tanh(h_b * k); });
}

SurfaceGradients surface_gradients(const BulkField& phi, const DomainMap& map) {
  if (!(phi.grid() == map.grid()) || phi.n_z() != map.n_z()) {
    throw GridMismatch("surface_gradients: field shape differs from map");
  }
  const std::size_t top = phi.top();
  const RealField phi_z = dz_fd_top(phi);
  const RealField phi_x = spectral_derivative(phi.row_field(top), 1);
  SurfaceGradients out{RealField(phi.grid()), RealField(phi.grid())};
  for (std::size_t i = 0; i < phi.n_x(); ++i) {
    const double mz = map.metric_dz()(top, i);
    const double mx = map.metric_dx()(top, i);
    out.b[i] = phi_z[i] / mz;
    out.v[i] = phi_x[i] - mx / mz * phi_z[i];
  }
  return out;
}

std::uint64_t solver_invocations() noexcept { return g_solves.load(); }

}  // namespace zakharov
