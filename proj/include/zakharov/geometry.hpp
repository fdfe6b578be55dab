#pragma once

// Boundary-straightening map for a flat bottom at y = -h_b:
//
//   rho(x, z) = (1 + z) exp(delta z <D>) eta - z eta_*,   eta_* = -h_b,  z in [-1, 0],
//
// so that y = rho(x, z) sends the fixed strip onto the fluid domain. Physical
// derivatives become
//
//   d/dy   -> Lambda_1 = (1 / dz rho) dz,
//   d/dx   -> Lambda_2 = dx - (dx rho / dz rho) dz.

#include <cstddef>
#include <vector>

#include "zakharov/bulk_field.hpp"
#include "zakharov/spectral.hpp"

namespace zakharov {

struct MapParams {
  double h_b = 1.0;
  double delta = 0.05;
  std::size_t n_z = 64;
  /// Minimum admissible strip height; negative selects the default h_b / 10.
  double margin = -1.0;

  double effective_margin() const noexcept { return margin < 0.0 ? h_b / 10.0 : margin; }
};

/// ||eta||_inf + ||dx eta||_inf.
double w1inf_norm(const RealField& eta);

/// min(0.05 / max(1, ||eta||_{W^{1,inf}}), 0.5).
double default_delta(const RealField& eta);

/// Closed-form samples of rho and its first derivatives on arbitrary z levels.
struct MapSamples {
  std::vector<double> z;
  std::vector<double> rho;     // z.size() rows of n_x values
  std::vector<double> dz_rho;
  std::vector<double> dx_rho;
};

class DomainMap {
 public:
  const Grid& grid() const noexcept { return eta_.grid(); }
  std::size_t n_z() const noexcept { return rho_.n_z(); }
  const MapParams& params() const noexcept { return params_; }
  const RealField& eta() const noexcept { return eta_; }

  /// h = min eta + h_b.
  double strip_height() const noexcept { return strip_height_; }
  /// Realized minimum of the closed-form dz rho over nodes and cell midpoints.
  double separation() const noexcept { return separation_; }
  /// min(h / 3, 1).
  double separation_bound() const noexcept;

  const BulkField& rho() const noexcept { return rho_; }
  /// Closed-form dz rho at the nodes.
  const BulkField& d_z_rho() const noexcept { return dz_rho_; }
  /// Closed-form dx rho at the nodes.
  const BulkField& grad_x_rho() const noexcept { return dx_rho_; }

  /// Metric used by the Lambda operators: the grid derivatives of rho itself
  /// (same z stencil and same spectral dx as applied to fields), so that
  /// Lambda_1 rho = 1 and Lambda_2 rho = 0 hold to round-off.
  const BulkField& metric_dz() const noexcept { return metric_dz_; }
  const BulkField& metric_dx() const noexcept { return metric_dx_; }

  /// Closed-form evaluation at the given z levels.
  MapSamples sample(const std::vector<double>& z) const;

  /// Time derivative of rho at fixed (x, z) given d_t eta:
  /// (1 + z) exp(delta z <D>) d_t eta.
  BulkField dt_rho(const RealField& d_eta) const;

 private:
  friend DomainMap build_domain_map(const RealField& eta, const MapParams& p);
  DomainMap(const RealField& eta, const MapParams& p, std::size_t n_z);

  MapParams params_;
  RealField eta_;
  double strip_height_ = 0.0;
  double separation_ = 0.0;
  BulkField rho_;
  BulkField dz_rho_;
  BulkField dx_rho_;
  BulkField metric_dz_;
  BulkField metric_dx_;
};

/// Strip height h = min_x eta + h_b. Throws StripViolation if h <= 0.
double check_separation(const RealField& eta, const MapParams& p);

/// Builds the map. Throws StripViolation when h does not exceed the margin,
/// SeparationViolation when dz rho drops below min(h/3, 1), ValidationError on
/// bad parameters (h_b <= 0, n_z < 8, delta < 0, delta ||eta||_{W^{1,inf}} > 0.1).
DomainMap build_domain_map(const RealField& eta, const MapParams& p);

enum class LambdaKind { vertical = 1, horizontal = 2 };

/// Lambda_1 f (vertical) or Lambda_2 f (horizontal) on the collocation grid.
BulkField lambda_apply(const BulkField& f, const DomainMap& map, LambdaKind which);

}  // namespace zakharov
