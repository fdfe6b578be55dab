#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "zakharov/spectral.hpp"

namespace zakharov {

/// Scalar field on the straightened collocation grid [0, L) x [-1, 0].
///
/// Storage is row-major in z: row j holds the n_x samples at z_j = -1 + j dz,
/// so row 0 is the bottom and row n_z - 1 is the free surface.
class BulkField {
 public:
  BulkField(const Grid& grid, std::size_t n_z, double fill = 0.0)
      : grid_(grid), n_z_(n_z), values_(grid.n_x() * n_z, fill) {
    if (n_z < 3) throw std::invalid_argument("bulk grid needs at least three z levels");
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t n_x() const noexcept { return grid_.n_x(); }
  std::size_t n_z() const noexcept { return n_z_; }
  std::size_t top() const noexcept { return n_z_ - 1; }
  double dz() const noexcept { return 1.0 / static_cast<double>(n_z_ - 1); }
  double z(std::size_t j) const noexcept {
    return j + 1 == n_z_ ? 0.0 : -1.0 + static_cast<double>(j) * dz();
  }

  double operator()(std::size_t j, std::size_t i) const noexcept { return values_[j * n_x() + i]; }
  double& operator()(std::size_t j, std::size_t i) noexcept { return values_[j * n_x() + i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> row(std::size_t j) const noexcept {
    return std::span<const double>(values_).subspan(j * n_x(), n_x());
  }
  std::span<double> row(std::size_t j) noexcept {
    return std::span<double>(values_).subspan(j * n_x(), n_x());
  }

  RealField row_field(std::size_t j) const {
    auto r = row(j);
    return RealField(grid_, std::vector<double>(r.begin(), r.end()));
  }
  void set_row(std::size_t j, const RealField& f) {
    auto src = f.values();
    std::copy(src.begin(), src.end(), row(j).begin());
  }

  bool same_shape(const BulkField& o) const noexcept {
    return grid_ == o.grid_ && n_z_ == o.n_z_;
  }

 private:
  Grid grid_;
  std::size_t n_z_;
  std::vector<double> values_;
};

/// Second-order z-derivative: centered inside, three-point one-sided at z = -1 and z = 0.
BulkField dz_fd(const BulkField& f);
/// One-sided second-order z-derivative of the surface row only.
RealField dz_fd_top(const BulkField& f);
/// Spectral x-derivative of every row.
BulkField dx_spectral(const BulkField& f);

}  // namespace zakharov
