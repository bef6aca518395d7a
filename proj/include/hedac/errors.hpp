#pragma once

#include <stdexcept>
#include <string>

namespace hedac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field contained NaN or infinity where a finite value is required.
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// A query point fell outside the domain rectangle.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// A target prior has no positive mass (empty region, all zero, negative).
class DegeneratePriorError : public Error {
 public:
  using Error::Error;
};

/// Two fields that must share a grid do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The potential solver stopped before reaching its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Invalid scenario or controller configuration. `key` is the dotted path of
/// the offending entry when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::string key = {})
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace hedac
