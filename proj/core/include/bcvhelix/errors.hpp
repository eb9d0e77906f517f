#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bcv {

enum class ErrorCode {
  DomainError,
  NegativeDiscriminant,
  NegativeRadicand,
  DegenerateRadius,
  QuadratureFailure,
  EmptyDomain,
  DegenerateOrbit,
  InconsistentCurve,
  InvalidCurve,
  NoRealFamily,
  DegenerateFamily,
  ParameterOutOfRange,
  StencilOutOfDomain,
  DegenerateImmersion,
  NoBracket,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bcv
