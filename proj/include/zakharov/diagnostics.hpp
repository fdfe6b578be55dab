#pragma once

#include <cstdint>
#include <span>

#include "zakharov/spectral.hpp"

namespace zakharov {

/// Least-squares slope of log(y) against log(x). NaN unless every sample is positive.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Angular frequency of a uniformly sampled single-mode oscillation c_n ~ A cos(w n dt + phi),
/// from the three-term recurrence c_{n+1} + c_{n-1} = 2 cos(w dt) c_n in least squares.
double recurrence_frequency(std::span<const double> samples, double dt);

/// |<f, Gg> - <Gf, g>| / (||f|| ||g||).
double self_adjointness_defect(const RealField& f, const RealField& g, const RealField& gf,
                               const RealField& gg);

/// Dealiased Gaussian noise with unit-variance Fourier coefficients on the resolved modes.
RealField random_smooth_field(const Grid& grid, std::uint64_t seed);

}  // namespace zakharov
