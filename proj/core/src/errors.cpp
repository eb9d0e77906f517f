#include "bcvhelix/errors.hpp"

namespace bcv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::DegenerateRadius: return "DegenerateRadius";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::InconsistentCurve: return "InconsistentCurve";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::NoRealFamily: return "NoRealFamily";
    case ErrorCode::DegenerateFamily: return "DegenerateFamily";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::DegenerateImmersion: return "DegenerateImmersion";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace bcv
