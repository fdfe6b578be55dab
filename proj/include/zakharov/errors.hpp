#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zakharov {

/// Base of every typed failure raised by the library. `kind()` is the stable
/// machine-readable tag written into abort records.
class WaveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

/// The surface came within the configured margin of the bottom.
class StripViolation : public WaveError {
 public:
  StripViolation(double strip_height, double margin);
  const char* kind() const noexcept override { return "StripViolation"; }
  double strip_height() const noexcept { return strip_height_; }

 private:
  double strip_height_;
};

/// The straightening map lost its lower bound on the vertical stretch.
class SeparationViolation : public WaveError {
 public:
  SeparationViolation(double min_dz_rho, double bound);
  const char* kind() const noexcept override { return "SeparationViolation"; }
  double min_dz_rho() const noexcept { return min_dz_rho_; }
  double bound() const noexcept { return bound_; }

 private:
  double min_dz_rho_;
  double bound_;
};

class NoConvergence : public WaveError {
 public:
  NoConvergence(std::size_t iterations, double residual);
  const char* kind() const noexcept override { return "NoConvergence"; }
  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// Malformed configuration text (line 0 means "not tied to a line").
class ParseError : public WaveError {
 public:
  ParseError(std::size_t line, std::string key, const std::string& what);
  const char* kind() const noexcept override { return "ParseError"; }
  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// A parameter that parsed fine but is outside its admissible range.
class ValidationError : public WaveError {
 public:
  ValidationError(std::string key, const std::string& reason);
  const char* kind() const noexcept override { return "ValidationError"; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class InsufficientSnapshots : public WaveError {
 public:
  InsufficientSnapshots(std::size_t found, std::size_t needed);
  const char* kind() const noexcept override { return "InsufficientSnapshots"; }
};

class GridMismatch : public WaveError {
 public:
  using WaveError::WaveError;
  const char* kind() const noexcept override { return "GridMismatch"; }
};

}  // namespace zakharov
