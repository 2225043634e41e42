#pragma once

#include <stdexcept>
#include <string>

namespace rff {

// Invalid argument values (out-of-range index, |s| > 1, nonpositive rate, ...).
struct ParameterError : std::invalid_argument {
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Degenerate or unusable site geometry (coincident sites, collinear triangle).
struct GeometryError : std::invalid_argument {
  explicit GeometryError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Time step too coarse for the requested dynamics or noise process.
struct ResolutionError : std::invalid_argument {
  explicit ResolutionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Statistical validator was given too little data to say anything.
struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

// State has (numerically) no support on the encoding sector.
struct SectorDepletedError : std::runtime_error {
  explicit SectorDepletedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested bias-tilt compensation would need a negative squared projection.
struct InfeasibleCompensationError : std::runtime_error {
  explicit InfeasibleCompensationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Hessian at the candidate point is not positive definite.
struct NotAMinimumError : std::runtime_error {
  explicit NotAMinimumError(const std::string& msg) : std::runtime_error(msg) {}
};

// Root finding / optimization / integration failed to converge.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed configuration file or missing required key.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rff
