#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zakharov/diagnostics.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/evolution.hpp"

using namespace zakharov;

namespace {

EvolutionParams small_params(double dt) {
  EvolutionParams p;
  p.n_z = 12;
  p.dt = dt;
  return p;
}

SurfaceState cosine_state(const Grid& grid, double a, double k) {
  return {0.0, RealField::from_function(grid, [=](double x) { return a * std::cos(k * x); }), RealField(grid)};
}

SurfaceState advance(SurfaceState s, const EvolutionParams& p, int steps) {
  for (int n = 0; n < steps; ++n) s = rk4_step(s, p);
  return s;
}

}  // namespace

TEST(ComputeBV, FlatSurfaceSplitsIntoFluxAndSlope) {
  const Grid grid(32);
  const RealField psi = RealField::from_function(grid, [](double x) { return std::sin(2 * x); });
  const RealField g_psi = RealField::from_function(grid, [](double x) { return 0.3 * std::cos(x); });
  const SurfaceVelocity bv = compute_BV(RealField(grid), psi, g_psi);
  EXPECT_LE(sup_norm(bv.b - g_psi), 1e-15);
  EXPECT_LE(sup_norm(bv.v - spectral_derivative(psi, 1)), 1e-15);
}

TEST(ComputeBV, KinematicIdentity) {
  const Grid grid(64);
  const RealField eta = RealField::from_function(grid, [](double x) { return 0.2 * std::cos(x) + 0.05 * std::sin(3 * x); });
  const RealField psi = random_smooth_field(grid, 3);
  const RealField g_psi = random_smooth_field(grid, 4);
  const SurfaceVelocity bv = compute_BV(eta, psi, g_psi);
  const RealField ex = spectral_derivative(eta, 1);
  EXPECT_LE(sup_norm(bv.b - hadamard(ex, bv.v) - g_psi), 1e-12 * (1 + sup_norm(g_psi)));
  EXPECT_LE(sup_norm(bv.v + hadamard(bv.b, ex) - spectral_derivative(psi, 1)), 1e-12 * (1 + sup_norm(psi)));
}

TEST(ZakharovRhs, RestIsStationary) {
  const Grid grid(32);
  const Tendency t = zakharov_rhs({0.0, RealField(grid), RealField(grid)}, small_params(0.1));
  EXPECT_EQ(sup_norm(t.d_eta), 0.0);
  EXPECT_EQ(sup_norm(t.d_psi), 0.0);
}

TEST(ZakharovRhs, RaisedFlatSurfaceAccelerates) {
  const Grid grid(32);
  const double c = 0.02;
  const Tendency t = zakharov_rhs({0.0, RealField(grid, c), RealField(grid)}, small_params(0.1));
  EXPECT_LE(sup_norm(t.d_eta), 1e-14);
  EXPECT_LE(sup_norm(t.d_psi - RealField(grid, -c)), 1e-14);
}

TEST(ZakharovRhs, LinearizedOnFlatSurface) {
  const Grid grid(32);
  const double eps = 1e-6;
  const double k = 2.0;
  const RealField psi = RealField::from_function(grid, [=](double x) { return eps * std::cos(k * x); });
  EvolutionParams p = small_params(0.1);
  p.n_z = 64;
  const Tendency t = zakharov_rhs({0.0, RealField(grid), psi}, p);
  const RealField expected = dno_flat_symbol(psi, p.h_b, Depth::finite);
  EXPECT_LE(sup_norm(t.d_eta - expected), 1e-3 * sup_norm(expected));
  EXPECT_LE(sup_norm(t.d_psi), 10 * eps * eps);
}

TEST(Rk4, RestStaysAtRest) {
  const Grid grid(32);
  const SurfaceState s = advance({0.0, RealField(grid), RealField(grid)}, small_params(0.1), 10);
  EXPECT_EQ(sup_norm(s.eta), 0.0);
  EXPECT_EQ(sup_norm(s.psi), 0.0);
  EXPECT_NEAR(s.t, 1.0, 1e-14);
}

TEST(Rk4, ZeroStepIsIdentity) {
  const Grid grid(32);
  const SurfaceState s0 = cosine_state(grid, 0.05, 1);
  const SurfaceState s1 = rk4_step(s0, small_params(0.0));
  EXPECT_EQ(sup_norm(s1.eta - s0.eta), 0.0);
  EXPECT_EQ(sup_norm(s1.psi - s0.psi), 0.0);
  EXPECT_EQ(s1.t, s0.t);
}

TEST(Rk4, FourthOrderSelfConvergence) {
  // Differences between successive halvings shrink by 2^4 on a fixed spatial grid.
  const Grid grid(16);
  const SurfaceState s0 = cosine_state(grid, 0.05, 1);
  std::vector<SurfaceState> runs;
  for (int level = 0; level < 4; ++level) {
    const int steps = 4 << level;
    runs.push_back(advance(s0, small_params(1.0 / steps), steps));
  }
  std::vector<double> diffs;
  for (std::size_t l = 0; l + 1 < runs.size(); ++l) {
    diffs.push_back(l2_norm(runs[l].eta - runs[l + 1].eta) + l2_norm(runs[l].psi - runs[l + 1].psi));
  }
  EXPECT_NEAR(std::log2(diffs[1] / diffs[2]), 4.0, 0.3);
}

TEST(Invariants, HamiltonianOfStandingWave) {
  const Grid grid(64);
  const double a = 0.01;
  const double g = 9.81;
  EvolutionParams p = small_params(0.1);
  p.g = g;
  EXPECT_NEAR(hamiltonian(cosine_state(grid, a, 3), p), 0.5 * g * a * a * std::numbers::pi, 1e-15);
}

TEST(Invariants, MassExamples) {
  const Grid grid(64);
  EXPECT_NEAR(conserved_mass(cosine_state(grid, 0.3, 2)), 0.0, 1e-15);
  EXPECT_NEAR(conserved_mass({0.0, RealField(grid, 0.1), RealField(grid)}), 0.2 * std::numbers::pi, 1e-14);
}

TEST(EvolutionParams, Validation) {
  EvolutionParams p;
  EXPECT_NO_THROW(p.validate());
  p.dt = -0.1;
  EXPECT_THROW(p.validate(), ValidationError);
  p = EvolutionParams{};
  p.g = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = EvolutionParams{};
  p.cg_tol = 1e-2;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(LinearTheory, FrequencyAndDefaultStep) {
  EXPECT_NEAR(linear_frequency(2.0, 1.0, 1.0), std::sqrt(2.0 * std::tanh(2.0)), 1e-15);
  const Grid grid(128);
  EXPECT_NEAR(default_dt(grid, 1.0, 1.0), 0.25 / std::sqrt(64.0 * std::tanh(64.0)), 1e-15);
}
