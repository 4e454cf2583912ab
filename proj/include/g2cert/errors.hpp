#pragma once

#include <stdexcept>
#include <string>

namespace g2cert {

// Every error raised by the library derives from one of the std exception
// families so callers can catch broadly.

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GradeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularDerivationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotNilpotentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotAlmostComplexError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct StructureError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownCaseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnsatzInconsistentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FlowDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace g2cert
