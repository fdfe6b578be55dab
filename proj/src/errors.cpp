#include "zakharov/errors.hpp"

#include <sstream>

namespace zakharov {

namespace {

std::string describe(const char* head, double a, const char* mid, double b) {
  std::ostringstream os;
  os.precision(6);
  os << head << a << mid << b;
  return os.str();
}

}  // namespace

StripViolation::StripViolation(double strip_height, double margin)
    : WaveError(describe("strip height ", strip_height, " does not exceed margin ", margin)),
      strip_height_(strip_height) {}

SeparationViolation::SeparationViolation(double min_dz_rho, double bound)
    : WaveError(describe("min dz(rho) = ", min_dz_rho, " below bound ", bound)),
      min_dz_rho_(min_dz_rho),
      bound_(bound) {}

NoConvergence::NoConvergence(std::size_t iterations, double residual)
    : WaveError(describe("conjugate gradient stalled after ", static_cast<double>(iterations),
                         " iterations, relative residual ", residual)),
      iterations_(iterations),
      residual_(residual) {}

ParseError::ParseError(std::size_t line, std::string key, const std::string& what)
    : WaveError("line " + std::to_string(line) + ", key '" + key + "': " + what),
      line_(line),
      key_(std::move(key)) {}

ValidationError::ValidationError(std::string key, const std::string& reason)
    : WaveError("invalid '" + key + "': " + reason), key_(std::move(key)) {}

InsufficientSnapshots::InsufficientSnapshots(std::size_t found, std::size_t needed)
    : WaveError("stream holds " + std::to_string(found) + " snapshots, need at least " +
                std::to_string(needed)) {}

}  // namespace zakharov
