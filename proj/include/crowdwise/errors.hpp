#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crowdwise {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input matrix is not row-stochastic (negative entry, non-finite entry, or
// row sum off by more than 1e-9).
struct NotStochastic : Error {
  using Error::Error;
};

struct NotStronglyConnected : Error {
  using Error::Error;
};

struct NotAperiodic : Error {
  using Error::Error;
};

// Fewer than two agents.
struct TooSmall : Error {
  using Error::Error;
};

// A linear solve or limit computation broke down numerically. Cannot occur
// for valid inputs in exact arithmetic.
struct SolverFailure : Error {
  using Error::Error;
};

// An operation that requires all (other) agents to be regular was called
// with a stubborn agent present.
struct StubbornPresent : Error {
  using Error::Error;
};

// Experiment configuration problem; `field` is the offending field path,
// e.g. "P[2]" or "sigma2".
struct ConfigError : Error {
  std::string field;
  ConfigError(std::string field_path, const std::string& what)
      : Error(what), field(std::move(field_path)) {}
};

// A trajectory violated one of the monotonicity/absorption diagnostics.
// Signals an implementation bug, never expected on valid runs.
struct DiagnosticViolation : Error {
  long step;
  DiagnosticViolation(long failing_step, const std::string& what)
      : Error(what), step(failing_step) {}
};

}  // namespace crowdwise
