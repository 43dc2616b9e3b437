// Error types for the ksfluid library. Each maps to one failure mode of the
// public contracts; the run loop converts the step-level ones into statuses.
#pragma once

#include <stdexcept>
#include <string>

namespace ksfluid {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
  int line = 0;
};

struct ValidationError : std::runtime_error {
  ValidationError(const std::string& gate, const std::string& msg)
      : std::runtime_error(gate + ": " + msg), gate(gate) {}
  std::string gate;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Singular chemotactic denominator: some face value of c fell to/below the floor.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimestepCollapse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowupDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularityDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PositivityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateExponent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedDimension : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ksfluid
