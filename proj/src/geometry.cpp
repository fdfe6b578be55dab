#include "zakharov/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "zakharov/errors.hpp"

namespace zakharov {

BulkField dz_fd(const BulkField& f) {
  BulkField out(f.grid(), f.n_z());
  const std::size_t nx = f.n_x();
  const std::size_t top = f.top();
  const double inv2dz = 0.5 / f.dz();
  for (std::size_t i = 0; i < nx; ++i) {
    out(0, i) = (-3.0 * f(0, i) + 4.0 * f(1, i) - f(2, i)) * inv2dz;
    out(top, i) = (3.0 * f(top, i) - 4.0 * f(top - 1, i) + f(top - 2, i)) * inv2dz;
  }
  for (std::size_t j = 1; j < top; ++j) {
    for (std::size_t i = 0; i < nx; ++i) out(j, i) = (f(j + 1, i) - f(j - 1, i)) * inv2dz;
  }
  return out;
}

RealField dz_fd_top(const BulkField& f) {
  RealField out(f.grid());
  const std::size_t top = f.top();
  const double inv2dz = 0.5 / f.dz();
  for (std::size_t i = 0; i < f.n_x(); ++i) {
    out[i] = (3.0 * f(top, i) - 4.0 * f(top - 1, i) + f(top - 2, i)) * inv2dz;
  }
  return out;
}

BulkField dx_spectral(const BulkField& f) {
  BulkField out(f.grid(), f.n_z());
  derivative_rows(f.grid(), f.values(), out.values(), f.n_z());
  return out;
}

double w1inf_norm(const RealField& eta) {
  return sup_norm(eta) + sup_norm(spectral_derivative(eta, 1));
}

double default_delta(const RealField& eta) {
  return std::min(0.05 / std::max(1.0, w1inf_norm(eta)), 0.5);
}

double check_separation(const RealField& eta, const MapParams& p) {
  const double h = min_value(eta) + p.h_b;
  if (!(h > 0.0)) throw StripViolation(h, 0.0);
  return h;
}

double DomainMap::separation_bound() const noexcept {
  return std::min(strip_height_ / 3.0, 1.0);
}

MapSamples DomainMap::sample(const std::vector<double>& zs) const {
  const Grid& g = grid();
  const std::size_t nx = g.n_x();
  const std::size_t rows = zs.size();
  const double delta = params_.delta;
  const double h_b = params_.h_b;
  const std::size_t nyquist = nx / 2;

  MapSamples s;
  s.z = zs;
  s.rho.resize(rows * nx);
  s.dz_rho.resize(rows * nx);
  s.dx_rho.resize(rows * nx);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy(eta_.values().begin(), eta_.values().end(), s.rho.begin() + r * nx);
  }
  s.dz_rho = s.rho;
  s.dx_rho = s.rho;

  // rho = (1+z) S + z h_b, S = exp(delta z <k>) eta.
  apply_row_symbol(g, s.rho, rows, [&](std::size_t r, std::size_t, double k) {
    const double z = zs[r];
    return Complex{(1.0 + z) * std::exp(delta * z * bracket(k)), 0.0};
  });
  // dz rho = [1 + (1+z) delta <k>] S + h_b.
  apply_row_symbol(g, s.dz_rho, rows, [&](std::size_t r, std::size_t, double k) {
    const double z = zs[r];
    const double b = bracket(k);
    return Complex{(1.0 + (1.0 + z) * delta * b) * std::exp(delta * z * b), 0.0};
  });
  // dx rho = (1+z) i k S.
  apply_row_symbol(g, s.dx_rho, rows, [&](std::size_t r, std::size_t m, double k) {
    if (m == nyquist) return Complex{0.0, 0.0};
    const double z = zs[r];
    return Complex{0.0, (1.0 + z) * k * std::exp(delta * z * bracket(k))};
  });
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < nx; ++i) {
      s.rho[r * nx + i] += zs[r] * h_b;
      s.dz_rho[r * nx + i] += h_b;
    }
  }
  return s;
}

BulkField DomainMap::dt_rho(const RealField& d_eta) const {
  if (!(d_eta.grid() == grid())) throw GridMismatch("dt_rho: d_eta grid differs from map grid");
  BulkField out(grid(), n_z());
  for (std::size_t j = 0; j < n_z(); ++j) out.set_row(j, d_eta);
  const double delta = params_.delta;
  std::vector<double> zs(n_z());
  for (std::size_t j = 0; j < n_z(); ++j) zs[j] = out.z(j);
  apply_row_symbol(grid(), out.values(), n_z(), [&](std::size_t r, std::size_t, double k) {
    return Complex{(1.0 + zs[r]) * std::exp(delta * zs[r] * bracket(k)), 0.0};
  });
  out.set_row(out.top(), d_eta);
  for (std::size_t i = 0; i < out.n_x(); ++i) out(0, i) = 0.0;
  return out;
}

DomainMap::DomainMap(const RealField& eta, const MapParams& p, std::size_t n_z)
    : params_(p),
      eta_(eta),
      rho_(eta.grid(), n_z),
      dz_rho_(eta.grid(), n_z),
      dx_rho_(eta.grid(), n_z),
      metric_dz_(eta.grid(), n_z),
      metric_dx_(eta.grid(), n_z) {}

DomainMap build_domain_map(const RealField& eta, const MapParams& p) {
  if (!(p.h_b > 0.0) || !std::isfinite(p.h_b)) throw ValidationError("h_b", "must be positive");
  if (p.n_z < 8) throw ValidationError("n_z", "must be at least 8");
  if (!(p.delta >= 0.0) || !std::isfinite(p.delta)) {
    throw ValidationError("delta", "must be non-negative");
  }
  if (!eta.all_finite()) throw ValidationError("eta", "contains non-finite values");
  if (p.delta * w1inf_norm(eta) > 0.1) {
    throw ValidationError("delta", "delta * ||eta||_{W^{1,inf}} exceeds 0.1");
  }

  const double h = check_separation(eta, p);
  if (h <= p.effective_margin()) throw StripViolation(h, p.effective_margin());

  DomainMap map(eta, p, p.n_z);
  map.strip_height_ = h;

  const std::size_t nz = p.n_z;
  const std::size_t nx = eta.grid().n_x();
  std::vector<double> nodes(nz);
  for (std::size_t j = 0; j < nz; ++j) nodes[j] = map.rho_.z(j);
  MapSamples s = map.sample(nodes);
  std::copy(s.rho.begin(), s.rho.end(), map.rho_.values().begin());
  std::copy(s.dz_rho.begin(), s.dz_rho.end(), map.dz_rho_.values().begin());
  std::copy(s.dx_rho.begin(), s.dx_rho.end(), map.dx_rho_.values().begin());
  // Exact boundary interpolation.
  map.rho_.set_row(map.rho_.top(), eta);
  for (std::size_t i = 0; i < nx; ++i) map.rho_(0, i) = -p.h_b;

  map.metric_dz_ = dz_fd(map.rho_);
  map.metric_dx_ = dx_spectral(map.rho_);

  std::vector<double> mids(nz - 1);
  for (std::size_t j = 0; j + 1 < nz; ++j) mids[j] = -1.0 + (static_cast<double>(j) + 0.5) * map.rho_.dz();
  const MapSamples m = map.sample(mids);

  double sep = *std::min_element(s.dz_rho.begin(), s.dz_rho.end());
  sep = std::min(sep, *std::min_element(m.dz_rho.begin(), m.dz_rho.end()));
  map.separation_ = sep;
  const double metric_min =
      *std::min_element(map.metric_dz_.values().begin(), map.metric_dz_.values().end());
  const double bound = map.separation_bound();
  if (sep < bound) throw SeparationViolation(sep, bound);
  if (metric_min < bound) throw SeparationViolation(metric_min, bound);
  return map;
}

BulkField lambda_apply(const BulkField& f, const DomainMap& map, LambdaKind which) {
  if (!(f.grid() == map.grid()) || f.n_z() != map.n_z()) {
    throw GridMismatch("lambda_apply: field shape differs from map");
  }
  BulkField fz = dz_fd(f);
  const BulkField& mz = map.metric_dz();
  const std::size_t n = f.values().size();
  if (which == LambdaKind::vertical) {
    for (std::size_t k = 0; k < n; ++k) fz.values()[k] /= mz.values()[k];
    return fz;
  }
  BulkField out = dx_spectral(f);
  const BulkField& mx = map.metric_dx();
  for (std::size_t k = 0; k < n; ++k) {
    out.values()[k] -= mx.values()[k] / mz.values()[k] * fz.values()[k];
  }
  return out;
}

}  // namespace zakharov
