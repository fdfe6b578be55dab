#include "zakharov/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace zakharov {

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double recurrence_frequency(std::span<const double> c, double dt) {
  if (c.size() < 3) throw std::invalid_argument("frequency estimate needs three samples");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t n = 1; n + 1 < c.size(); ++n) {
    num += c[n] * (c[n + 1] + c[n - 1]);
    den += c[n] * c[n];
  }
  const double cosine = std::clamp(num / (2.0 * den), -1.0, 1.0);
  return std::acos(cosine) / dt;
}

double self_adjointness_defect(const RealField& f, const RealField& g, const RealField& gf,
                               const RealField& gg) {
  const double scale = l2_norm(f) * l2_norm(g);
  if (scale == 0.0) return 0.0;
  return std::abs(inner(f, gg) - inner(gf, g)) / scale;
}

RealField random_smooth_field(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double k_cut = 2.0 / 3.0 * grid.k_max();
  RealField out(grid);
  for (std::size_t m = 0; m < grid.modes(); ++m) {
    const double k = grid.wavenumber(m);
    const double a = normal(rng);
    const double b = normal(rng);
    if (k > k_cut) continue;
    for (std::size_t i = 0; i < grid.n_x(); ++i) {
      const double x = grid.x(i);
      out[i] += m == 0 ? a : a * std::cos(k * x) + b * std::sin(k * x);
    }
  }
  return out;
}

}  // namespace zakharov
