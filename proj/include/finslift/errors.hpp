#pragma once

#include <stdexcept>
#include <string>

namespace finslift {

// Base for every failure raised by the engine. Callers that only need to
// know "this point cannot be evaluated" catch this type.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OrderOverflow : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Evaluation hit a non-smooth point (sqrt of a non-positive value, division
// by zero, log of a non-positive value, ...).
class DomainError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class DegenerateMetric : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class NullSection : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class RankDeficiency : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class FrameSmoothness : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class VarianceMismatch : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Scenario text or command line could not be turned into a valid
// configuration. `line` is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace finslift
