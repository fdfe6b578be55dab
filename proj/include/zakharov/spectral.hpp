#pragma once

// Periodic Fourier toolbox on a uniform 1-D grid. Every other module builds
// its x-direction calculus on these routines.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace zakharov {

using Complex = std::complex<double>;

/// Uniform periodic grid x_i = i * dx, i in [0, n_x), with period `length`.
class Grid {
 public:
  explicit Grid(std::size_t n_x, double length = 2.0 * std::numbers::pi);

  std::size_t n_x() const noexcept { return n_x_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_x_); }
  double x(std::size_t i) const noexcept { return dx() * static_cast<double>(i); }

  /// Number of half-spectrum coefficients of a real field, n_x/2 + 1.
  std::size_t modes() const noexcept { return n_x_ / 2 + 1; }
  /// Non-negative wavenumber 2*pi*m/L of half-spectrum index m (m = n_x/2 is Nyquist).
  double wavenumber(std::size_t m) const noexcept;
  double k_max() const noexcept { return wavenumber(n_x_ / 2); }
  /// Signed wavenumbers in FFT order: 0, 1, ..., n/2-1, -n/2, ..., -1 (scaled).
  std::vector<double> wavenumbers() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_x_ == b.n_x_ && a.length_ == b.length_;
  }

 private:
  std::size_t n_x_;
  double length_;
};

/// n_x real samples on a Grid.
class RealField {
 public:
  explicit RealField(const Grid& grid, double fill = 0.0);
  RealField(const Grid& grid, std::vector<double> values);
  static RealField from_function(const Grid& grid, const std::function<double(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  bool all_finite() const noexcept;

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double s, RealField a);
/// Pointwise product.
RealField hadamard(const RealField& a, const RealField& b);

/// Batched real FFTs over `rows` contiguous rows of length n. Plans are
/// created once per shape and shared; execution is thread-safe.
class RowFft {
 public:
  RowFft(std::size_t n, std::size_t rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t modes() const noexcept { return n_ / 2 + 1; }

  /// Unnormalized forward transform; `out` holds rows * modes() coefficients.
  void forward(std::span<const double> in, std::span<Complex> out) const;
  /// Inverse transform including the 1/n factor; `in` is left untouched.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

 private:
  std::size_t n_;
  std::size_t rows_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Row-wise Fourier symbol: symbol(row, m, k) multiplies coefficient m (wavenumber k) of that row.
using RowSymbol = std::function<Complex(std::size_t row, std::size_t m, double k)>;

/// Multiplies each of `rows` stacked fields of length grid.n_x() by a row-dependent symbol, in place.
void apply_row_symbol(const Grid& grid, std::span<double> block, std::size_t rows,
                      const RowSymbol& symbol);

/// d/dx of each stacked row (Nyquist coefficient zeroed).
void derivative_rows(const Grid& grid, std::span<const double> in, std::span<double> out,
                     std::size_t rows);

/// <xi> = sqrt(1 + xi^2).
inline double bracket(double xi) noexcept { return std::sqrt(1.0 + xi * xi); }

/// Fourier-collocation derivative of the given order. Odd orders drop the Nyquist mode.
RealField spectral_derivative(const RealField& f, int order = 1);

/// Multiplies the Fourier coefficients of f by m(|k|). Symbols are evaluated on
/// non-negative wavenumbers, which keeps the output real.
RealField apply_multiplier(const RealField& f, const std::function<double(double)>& m);

/// 2/3-rule: zeroes every mode with |k| > (2/3) k_max.
RealField dealias(const RealField& f);

/// Trapezoid (spectrally accurate) integral over one period.
double integral(const RealField& f);
double mean(const RealField& f);
/// Discrete inner product dx * sum f g.
double inner(const RealField& f, const RealField& g);
/// Discrete L2 norm sqrt(dx * sum f^2).
double l2_norm(const RealField& f);
/// The same norm evaluated from the Fourier coefficients (Parseval).
double spectral_l2_norm(const RealField& f);
double sup_norm(const RealField& f);
double min_value(const RealField& f);

/// Forward transform and back, mainly for diagnostics.
RealField round_trip(const RealField& f);

/// Half-spectrum coefficients of f, normalized so that a unit cosine of mode m
/// has coefficient 1/2 (m = 0 and Nyquist have coefficient 1).
std::vector<Complex> fourier_coefficients(const RealField& f);

}  // namespace zakharov
