#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "zakharov/diagnostics.hpp"
#include "zakharov/spectral.hpp"

using namespace zakharov;

namespace {

RealField noise(const Grid& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = u(rng);
  return f;
}

}  // namespace

TEST(Grid, RejectsOddOrTinyCounts) {
  EXPECT_THROW(Grid(6), std::invalid_argument);
  EXPECT_THROW(Grid(33), std::invalid_argument);
  EXPECT_THROW(Grid(16, -1.0), std::invalid_argument);
}

TEST(Grid, WavenumbersAreAntisymmetricApartFromNyquist) {
  const Grid grid(16, 4.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(grid.dx() * 16, grid.length());
  const auto k = grid.wavenumbers();
  ASSERT_EQ(k.size(), 16u);
  EXPECT_DOUBLE_EQ(k[0], 0.0);
  EXPECT_DOUBLE_EQ(k[1], 0.5);
  EXPECT_DOUBLE_EQ(k[8], -4.0);
  for (std::size_t j = 1; j < 8; ++j) EXPECT_DOUBLE_EQ(k[j], -k[16 - j]);
}

TEST(SpectralDerivative, CosineIsAnEigenfunction) {
  const Grid grid(64);
  const RealField f = RealField::from_function(grid, [](double x) { return std::cos(3 * x); });
  const RealField exact = RealField::from_function(grid, [](double x) { return -3 * std::sin(3 * x); });
  EXPECT_LE(sup_norm(spectral_derivative(f, 1) - exact), 1e-12);
}

TEST(SpectralDerivative, ConstantHasZeroDerivative) {
  const Grid grid(64);
  const RealField d = spectral_derivative(RealField(grid, 5.0), 1);
  EXPECT_LE(sup_norm(d), 1e-14);
}

TEST(SpectralDerivative, ExpSinMatchesAnalyticDerivative) {
  const Grid grid(64);
  const RealField f = RealField::from_function(grid, [](double x) { return std::exp(std::sin(x)); });
  const RealField exact =
      RealField::from_function(grid, [](double x) { return std::cos(x) * std::exp(std::sin(x)); });
  EXPECT_LE(sup_norm(spectral_derivative(f, 1) - exact), 1e-10);
}

TEST(SpectralDerivative, SecondOrder) {
  const Grid grid(32);
  const RealField f = RealField::from_function(grid, [](double x) { return std::sin(2 * x); });
  const RealField exact = RealField::from_function(grid, [](double x) { return -4 * std::sin(2 * x); });
  EXPECT_LE(sup_norm(spectral_derivative(f, 2) - exact), 1e-12);
}

TEST(SpectralDerivative, RejectsNonFiniteInput) {
  const Grid grid(16);
  RealField f(grid);
  f[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(spectral_derivative(f, 1), std::domain_error);
  EXPECT_THROW(spectral_derivative(RealField(grid), 0), std::invalid_argument);
}

TEST(Multiplier, IdentitySymbol) {
  const Grid grid(64);
  const RealField f = noise(grid, 1);
  EXPECT_LE(sup_norm(apply_multiplier(f, [](double) { return 1.0; }) - f), 1e-14);
}

TEST(Multiplier, FlatDnoSymbolOnCosine) {
  const Grid grid(64);
  const double k = 3.0;
  const double h = 0.7;
  const RealField f = RealField::from_function(grid, [k](double x) { return std::cos(k * x); });
  const RealField m = apply_multiplier(f, [h](double xi) { return xi * std::tanh(h * xi); });
  EXPECT_LE(sup_norm(m - k * std::tanh(h * k) * f), 1e-13);
}

TEST(Multiplier, SmoothingDoesNotIncreaseNorm) {
  const Grid grid(128);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const RealField f = noise(grid, seed);
    const RealField s = apply_multiplier(f, [](double xi) { return std::exp(-0.2 * bracket(xi)); });
    EXPECT_LE(l2_norm(s), l2_norm(f) * (1.0 + 1e-14));
  }
}

TEST(Multiplier, IsLinear) {
  const Grid grid(64);
  const RealField f = noise(grid, 2);
  const RealField g = noise(grid, 3);
  auto m = [](double xi) { return std::exp(-0.1 * bracket(xi)) * xi; };
  const RealField lhs = apply_multiplier(2.5 * f + (-1.5) * g, m);
  const RealField rhs = 2.5 * apply_multiplier(f, m) + (-1.5) * apply_multiplier(g, m);
  EXPECT_LE(sup_norm(lhs - rhs), 1e-12);
}

TEST(Dealias, KeepsLowModesAndKillsHighOnes) {
  const Grid grid(64);
  const double k_max = grid.k_max();
  const RealField low = RealField::from_function(grid, [](double x) { return std::cos(5 * x) + std::sin(10 * x); });
  EXPECT_LE(sup_norm(dealias(low) - low), 1e-14);
  const RealField top = RealField::from_function(grid, [k_max](double x) { return std::cos(k_max * x); });
  EXPECT_LE(sup_norm(dealias(top)), 1e-14);
}

TEST(Dealias, Idempotent) {
  const Grid grid(64);
  const RealField f = noise(grid, 4);
  const RealField once = dealias(f);
  EXPECT_LE(sup_norm(dealias(once) - once), 1e-14);
  EXPECT_GT(sup_norm(f - once), 0.1);
}

TEST(Norms, ParsevalAndRoundTrip) {
  const Grid grid(128);
  for (unsigned seed = 10; seed < 20; ++seed) {
    const RealField f = noise(grid, seed);
    EXPECT_NEAR(l2_norm(f), spectral_l2_norm(f), 1e-12 * l2_norm(f));
    EXPECT_LE(sup_norm(round_trip(f) - f), 1e-12 * sup_norm(f));
  }
}

TEST(Norms, IntegralOfCosineSquared) {
  const Grid grid(32);
  const RealField f = RealField::from_function(grid, [](double x) { return std::cos(2 * x); });
  EXPECT_NEAR(integral(hadamard(f, f)), std::numbers::pi, 1e-13);
  EXPECT_NEAR(mean(f), 0.0, 1e-15);
}

TEST(FourierCoefficients, UnitCosineHasHalfCoefficient) {
  const Grid grid(32);
  const RealField f = RealField::from_function(grid, [](double x) { return 1.0 + std::cos(3 * x); });
  const auto c = fourier_coefficients(f);
  EXPECT_NEAR(c[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(c[3].real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(c[2]), 0.0, 1e-15);
}

TEST(RowFft, BatchedRowsTransformIndependently) {
  const Grid grid(16);
  std::vector<double> block(3 * 16);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t i = 0; i < 16; ++i) block[r * 16 + i] = std::sin(static_cast<double>(r + 1) * grid.x(i));
  }
  std::vector<double> out(block.size());
  derivative_rows(grid, block, out, 3);
  for (std::size_t r = 0; r < 3; ++r) {
    const double k = static_cast<double>(r + 1);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(out[r * 16 + i], k * std::cos(k * grid.x(i)), 1e-13);
  }
}

TEST(Diagnostics, LogLogSlopeRecoversPower) {
  const std::vector<double> x = {0.1, 0.05, 0.025};
  const std::vector<double> y = {3e-2, 3e-2 / 16, 3e-2 / 256};
  EXPECT_NEAR(fit_loglog_slope(x, y), 4.0, 1e-12);
  const std::vector<double> bad = {1.0, 0.0, 1.0};
  EXPECT_TRUE(std::isnan(fit_loglog_slope(x, bad)));
}

TEST(Diagnostics, RecurrenceFrequencyOfSampledCosine) {
  const double omega = 1.37;
  const double dt = 0.05;
  std::vector<double> c;
  for (int n = 0; n < 200; ++n) c.push_back(0.3 * std::cos(omega * n * dt + 0.4));
  EXPECT_NEAR(recurrence_frequency(c, dt), omega, 1e-12);
}
