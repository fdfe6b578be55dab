#include "zakharov/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace zakharov {

Grid::Grid(std::size_t n_x, double length) : n_x_(n_x), length_(length) {
  if (n_x < 8 || n_x % 2 != 0) {
    throw std::invalid_argument("grid needs an even point count >= 8");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid period must be positive and finite");
  }
}

double Grid::wavenumber(std::size_t m) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length_;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n_x_);
  const auto n = static_cast<long>(n_x_);
  for (long j = 0; j < n; ++j) {
    const long s = j < n / 2 ? j : j - n;
    k[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * static_cast<double>(s) / length_;
  }
  return k;
}

RealField::RealField(const Grid& grid, double fill) : grid_(grid), values_(grid.n_x(), fill) {}

RealField::RealField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_x()) {
    throw std::invalid_argument("field length does not match grid");
  }
}

RealField RealField::from_function(const Grid& grid, const std::function<double(double)>& f) {
  RealField out(grid);
  for (std::size_t i = 0; i < grid.n_x(); ++i) out[i] = f(grid.x(i));
  return out;
}

bool RealField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RealField& RealField::operator+=(const RealField& o) {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& o) {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

RealField& RealField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double s, RealField a) { return a *= s; }

RealField hadamard(const RealField& a, const RealField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
  RealField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// The FFTW planner is not re-entrant; plan execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(std::size_t n, std::size_t rows) {
  static std::map<std::pair<std::size_t, std::size_t>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  const auto key = std::make_pair(n, rows);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const std::size_t modes = n / 2 + 1;
  std::vector<double> real(n * rows);
  std::vector<Complex> spec(modes * rows);
  int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
  PlanPair p{};
  p.forward = fftw_plan_many_dft_r2c(1, &len, static_cast<int>(rows), real.data(), nullptr, 1,
                                     static_cast<int>(n), cspec, nullptr, 1,
                                     static_cast<int>(modes), flags);
  p.inverse = fftw_plan_many_dft_c2r(1, &len, static_cast<int>(rows), cspec, nullptr, 1,
                                     static_cast<int>(modes), real.data(), nullptr, 1,
                                     static_cast<int>(n), flags);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw std::runtime_error("FFTW failed to create a plan");
  }
  cache.emplace(key, p);
  return p;
}

void require_finite(const RealField& f) {
  if (!f.all_finite()) throw std::domain_error("field contains non-finite values");
}

}  // namespace

RowFft::RowFft(std::size_t n, std::size_t rows) : n_(n), rows_(rows) {
  if (n < 2 || rows == 0) throw std::invalid_argument("empty transform shape");
  const PlanPair p = plans_for(n, rows);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RowFft::forward(std::span<const double> in, std::span<Complex> out) const {
  if (in.size() != n_ * rows_ || out.size() != modes() * rows_) {
    throw std::invalid_argument("RowFft::forward: buffer size mismatch");
  }
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RowFft::inverse(std::span<const Complex> in, std::span<double> out) const {
  if (in.size() != modes() * rows_ || out.size() != n_ * rows_) {
    throw std::invalid_argument("RowFft::inverse: buffer size mismatch");
  }
  // c2r overwrites its input.
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
}

void apply_row_symbol(const Grid& grid, std::span<double> block, std::size_t rows,
                      const RowSymbol& symbol) {
  const std::size_t n = grid.n_x();
  const RowFft fft(n, rows);
  const std::size_t modes = fft.modes();
  std::vector<Complex> spec(modes * rows);
  fft.forward(block, spec);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t m = 0; m < modes; ++m) {
      spec[r * modes + m] *= symbol(r, m, grid.wavenumber(m));
    }
    // A real field needs a real Nyquist coefficient.
    spec[r * modes + modes - 1].imag(0.0);
    spec[r * modes].imag(0.0);
  }
  fft.inverse(spec, block);
}

void derivative_rows(const Grid& grid, std::span<const double> in, std::span<double> out,
                     std::size_t rows) {
  std::copy(in.begin(), in.end(), out.begin());
  const std::size_t nyquist = grid.n_x() / 2;
  apply_row_symbol(grid, out, rows, [nyquist](std::size_t, std::size_t m, double k) {
    return m == nyquist ? Complex{0.0, 0.0} : Complex{0.0, k};
  });
}

RealField spectral_derivative(const RealField& f, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be positive");
  require_finite(f);
  RealField out = f;
  const std::size_t nyquist = f.grid().n_x() / 2;
  apply_row_symbol(f.grid(), out.values(), 1,
                   [nyquist, order](std::size_t, std::size_t m, double k) {
                     if (m == nyquist && order % 2 == 1) return Complex{0.0, 0.0};
                     return std::pow(Complex{0.0, k}, order);
                   });
  return out;
}

RealField apply_multiplier(const RealField& f, const std::function<double(double)>& m) {
  require_finite(f);
  RealField out = f;
  apply_row_symbol(f.grid(), out.values(), 1, [&m](std::size_t, std::size_t, double k) {
    const double s = m(k);
    if (!std::isfinite(s)) throw std::domain_error("multiplier symbol is not finite");
    return Complex{s, 0.0};
  });
  return out;
}

RealField dealias(const RealField& f) {
  RealField out = f;
  const double cutoff = 2.0 / 3.0 * f.grid().k_max();
  apply_row_symbol(f.grid(), out.values(), 1, [cutoff](std::size_t, std::size_t, double k) {
    return k > cutoff ? Complex{0.0, 0.0} : Complex{1.0, 0.0};
  });
  return out;
}

double integral(const RealField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().dx();
}

double mean(const RealField& f) { return integral(f) / f.grid().length(); }

double inner(const RealField& f, const RealField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s * f.grid().dx();
}

double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

double spectral_l2_norm(const RealField& f) {
  const std::size_t n = f.grid().n_x();
  const RowFft fft(n, 1);
  std::vector<Complex> spec(fft.modes());
  fft.forward(f.values(), spec);
  // Half spectrum: interior modes count twice.
  double s = std::norm(spec.front()) + std::norm(spec.back());
  for (std::size_t m = 1; m + 1 < spec.size(); ++m) s += 2.0 * std::norm(spec[m]);
  return std::sqrt(s * f.grid().dx() / static_cast<double>(n));
}

double sup_norm(const RealField& f) {
  double s = 0.0;
  for (double v : f.values()) s = std::max(s, std::abs(v));
  return s;
}

double min_value(const RealField& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

RealField round_trip(const RealField& f) {
  const RowFft fft(f.grid().n_x(), 1);
  std::vector<Complex> spec(fft.modes());
  fft.forward(f.values(), spec);
  RealField out(f.grid());
  fft.inverse(spec, out.values());
  return out;
}

std::vector<Complex> fourier_coefficients(const RealField& f) {
  const std::size_t n = f.grid().n_x();
  const RowFft fft(n, 1);
  std::vector<Complex> spec(fft.modes());
  fft.forward(f.values(), spec);
  for (auto& c : spec) c /= static_cast<double>(n);
  return spec;
}

}  // namespace zakharov
