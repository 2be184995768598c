#pragma once

#include <stdexcept>
#include <string>

namespace helium {

// Every library failure derives from Error so callers can catch one type and
// still dispatch on the concrete kind when they care.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The physics asked for does not exist for these inputs (e.g. WKB on a
/// single-well trap).
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

/// Operation needs a model feature that breaks its solution method
/// (free fermions with a longitudinal field).
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

/// The lowest two states are not a parity doublet, so there is no two-level
/// spin to speak of.
class RegimeViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double previous, double last)
      : Error(what), previous_estimate(previous), last_estimate(last) {}
  double previous_estimate;
  double last_estimate;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class IllConditionedResponse : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line_number)
      : Error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + what : what),
        line(line_number) {}
  int line;
};

}  // namespace helium
