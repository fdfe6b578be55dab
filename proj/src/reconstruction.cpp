#include "zakharov/reconstruction.hpp"

#include <algorithm>
#include <cmath>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

double l2(const RealField& f) { return l2_norm(f); }

void require_compatible(const BulkSnapshot& a, const BulkSnapshot& b) {
  if (!(a.phi.same_shape(b.phi))) throw GridMismatch("snapshots live on different grids");
}

double half_step(const BulkSnapshot& prev, const BulkSnapshot& mid, const BulkSnapshot& next) {
  require_compatible(prev, mid);
  require_compatible(mid, next);
  const double h1 = mid.t - prev.t;
  const double h2 = next.t - mid.t;
  if (!(h1 > 0.0) || std::abs(h1 - h2) > 1e-9 * std::max(1.0, std::abs(mid.t))) {
    throw GridMismatch("snapshots are not equally spaced in time");
  }
  return 0.5 * (h1 + h2);
}

}  // namespace

BulkSnapshot reconstruct_bulk(const SurfaceState& state, const EvolutionParams& p) {
  DomainMap map = build_domain_map(state.eta, p.map_params());
  const SolverConfig cfg = p.solver();
  const EnergyOperator energy(map);

  BulkField phi = solve_dirichlet(state.psi, map, cfg);
  RealField g_psi = surface_flux(energy, phi);
  SurfaceVelocity bv = compute_BV(state.eta, state.psi, g_psi);

  RealField q_top(state.eta.grid());
  for (std::size_t i = 0; i < q_top.size(); ++i) {
    q_top[i] = p.g * state.eta[i] + 0.5 * (bv.b[i] * bv.b[i] + bv.v[i] * bv.v[i]);
  }
  BulkField q = solve_dirichlet(q_top, map, cfg);

  BulkField vx = lambda_apply(phi, map, LambdaKind::horizontal);
  BulkField vy = lambda_apply(phi, map, LambdaKind::vertical);
  vx.set_row(vx.top(), bv.v);
  vy.set_row(vy.top(), bv.b);

  BulkField pressure(phi.grid(), phi.n_z());
  const auto& rho = map.rho();
  for (std::size_t k = 0; k < pressure.values().size(); ++k) {
    const double ux = vx.values()[k];
    const double uy = vy.values()[k];
    pressure.values()[k] = q.values()[k] - p.g * rho.values()[k] - 0.5 * (ux * ux + uy * uy);
  }

  return BulkSnapshot{state.t,
                      std::move(map),
                      std::move(phi),
                      std::move(q),
                      std::move(pressure),
                      std::move(vx),
                      std::move(vy),
                      std::move(bv.b),
                      std::move(bv.v),
                      std::move(g_psi)};
}

InteriorNorm interior_norm(const BulkField& f) {
  InteriorNorm out;
  const double w = f.grid().dx() * f.dz();
  double sum = 0.0;
  for (std::size_t j = 2; j + 2 < f.n_z(); ++j) {
    const double z = f.z(j);
    if (z < -0.9 - 1e-12 || z > -0.1 + 1e-12) continue;
    for (std::size_t i = 0; i < f.n_x(); ++i) {
      const double v = f(j, i);
      sum += v * v;
      out.sup = std::max(out.sup, std::abs(v));
    }
  }
  out.l2 = std::sqrt(sum * w);
  return out;
}

BulkField physical_time_derivative(const BulkField& prev, const BulkField& mid_field,
                                   const BulkField& next, const BulkSnapshot& mid, double dt) {
  if (!prev.same_shape(next) || !prev.same_shape(mid_field)) {
    throw GridMismatch("time difference across different grids");
  }
  const BulkField dt_rho = mid.map.dt_rho(mid.g_psi);
  const BulkField lz = lambda_apply(mid_field, mid.map, LambdaKind::vertical);
  BulkField out(prev.grid(), prev.n_z());
  const double inv = 0.5 / dt;
  for (std::size_t k = 0; k < out.values().size(); ++k) {
    out.values()[k] = (next.values()[k] - prev.values()[k]) * inv -
                      dt_rho.values()[k] * lz.values()[k];
  }
  return out;
}

BernoulliResidual bernoulli_residual(const BulkSnapshot& prev, const BulkSnapshot& mid,
                                     const BulkSnapshot& next, double g) {
  const double dt = half_step(prev, mid, next);
  const BulkField phi_t = physical_time_derivative(prev.phi, mid.phi, next.phi, mid, dt);
  BulkField potential_form(phi_t.grid(), phi_t.n_z());
  BulkField pressure_form(phi_t.grid(), phi_t.n_z());
  BernoulliResidual out;
  const auto& rho = mid.map.rho();
  for (std::size_t k = 0; k < phi_t.values().size(); ++k) {
    const double ux = mid.vx.values()[k];
    const double uy = mid.vy.values()[k];
    const double a = phi_t.values()[k] + mid.q.values()[k];
    const double b = phi_t.values()[k] + 0.5 * (ux * ux + uy * uy) + mid.p.values()[k] +
                     g * rho.values()[k];
    potential_form.values()[k] = a;
    pressure_form.values()[k] = b;
    out.form_gap = std::max(out.form_gap, std::abs(a - b));
  }
  out.potential_form = interior_norm(potential_form);
  out.pressure_form = interior_norm(pressure_form);
  return out;
}

double bernoulli_check(const BulkSnapshot& prev, const BulkSnapshot& next,
                       const BulkSnapshot& mid, double g) {
  return bernoulli_residual(prev, mid, next, g).potential_form.l2;
}

namespace {

InteriorNorm combined(const BulkField& a, const BulkField& b) {
  BulkField m(a.grid(), a.n_z());
  for (std::size_t k = 0; k < m.values().size(); ++k) {
    m.values()[k] = std::hypot(a.values()[k], b.values()[k]);
  }
  return interior_norm(m);
}

void fill_kinematic(const BulkSnapshot& s, ResidualReport& r) {
  const BulkField vx_x = lambda_apply(s.vx, s.map, LambdaKind::horizontal);
  const BulkField vx_y = lambda_apply(s.vx, s.map, LambdaKind::vertical);
  const BulkField vy_x = lambda_apply(s.vy, s.map, LambdaKind::horizontal);
  const BulkField vy_y = lambda_apply(s.vy, s.map, LambdaKind::vertical);
  BulkField div(s.vx.grid(), s.vx.n_z());
  BulkField curl(s.vx.grid(), s.vx.n_z());
  for (std::size_t k = 0; k < div.values().size(); ++k) {
    div.values()[k] = vx_x.values()[k] + vy_y.values()[k];
    curl.values()[k] = vy_x.values()[k] - vx_y.values()[k];
  }
  r.divergence = interior_norm(div);
  r.curl = interior_norm(curl);
}

}  // namespace

ResidualReport kinematic_residual(const BulkSnapshot& snap) {
  ResidualReport r;
  fill_kinematic(snap, r);
  return r;
}

ResidualReport euler_residual(const BulkSnapshot& prev, const BulkSnapshot& mid,
                              const BulkSnapshot& next, double g) {
  const double dt = half_step(prev, mid, next);
  const BulkField vx_t = physical_time_derivative(prev.vx, mid.vx, next.vx, mid, dt);
  const BulkField vy_t = physical_time_derivative(prev.vy, mid.vy, next.vy, mid, dt);
  const BulkField vx_x = lambda_apply(mid.vx, mid.map, LambdaKind::horizontal);
  const BulkField vx_y = lambda_apply(mid.vx, mid.map, LambdaKind::vertical);
  const BulkField vy_x = lambda_apply(mid.vy, mid.map, LambdaKind::horizontal);
  const BulkField vy_y = lambda_apply(mid.vy, mid.map, LambdaKind::vertical);
  const BulkField p_x = lambda_apply(mid.p, mid.map, LambdaKind::horizontal);
  const BulkField p_y = lambda_apply(mid.p, mid.map, LambdaKind::vertical);

  BulkField rx(mid.vx.grid(), mid.vx.n_z());
  BulkField ry(mid.vx.grid(), mid.vx.n_z());
  for (std::size_t k = 0; k < rx.values().size(); ++k) {
    const double u = mid.vx.values()[k];
    const double w = mid.vy.values()[k];
    rx.values()[k] = vx_t.values()[k] + u * vx_x.values()[k] + w * vx_y.values()[k] +
                     p_x.values()[k];
    ry.values()[k] = vy_t.values()[k] + u * vy_x.values()[k] + w * vy_y.values()[k] +
                     p_y.values()[k] + g;
  }
  ResidualReport r;
  r.momentum_x = interior_norm(rx);
  r.momentum_y = interior_norm(ry);
  r.momentum = combined(rx, ry);
  fill_kinematic(mid, r);
  return r;
}

TraceErrors trace_checks(const BulkSnapshot& snap, const SurfaceState& state,
                         const RealField& d_eta) {
  const SurfaceGradients sg = surface_gradients(snap.phi, snap.map);
  TraceErrors e;
  e.horizontal = l2(sg.v - snap.v);
  e.vertical = l2(sg.b - snap.b);
  e.pressure = l2(snap.p.row_field(snap.p.top()));
  const RealField ex = spectral_derivative(state.eta, 1);
  RealField kin(state.eta.grid());
  for (std::size_t i = 0; i < kin.size(); ++i) {
    kin[i] = d_eta[i] - (snap.b[i] - ex[i] * snap.v[i]);
  }
  e.kinematic = l2(kin);
  return e;
}

RealField taylor_coefficient(const BulkSnapshot& snap) {
  const RealField pz = dz_fd_top(snap.p);
  RealField a(pz.grid());
  const std::size_t top = snap.p.top();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -pz[i] / snap.map.metric_dz()(top, i);
  return a;
}

}  // namespace zakharov
