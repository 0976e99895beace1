#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fuzzyid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unknown configuration, or invalid arguments to an operation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Data that violates a precondition (dimension mismatch, uncovered samples, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

/// No rule fires for an input. Carries the offending sample index when the
/// input came from a dataset.
class ZeroFiring : public DataError {
 public:
  explicit ZeroFiring(std::optional<std::size_t> sample = std::nullopt)
      : DataError(sample ? "no rule fires for sample " + std::to_string(*sample)
                         : std::string("no rule fires for input")),
        sample_(sample) {}

  std::optional<std::size_t> sample() const { return sample_; }

 private:
  std::optional<std::size_t> sample_;
};

/// Fuzzy output set with zero total membership.
class ZeroMass : public DataError {
 public:
  ZeroMass() : DataError("fuzzy output set has zero total membership") {}
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzzyid
