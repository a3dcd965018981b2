#include "amshe/errors.hpp"

namespace amshe {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainTooLarge: return "DomainTooLarge";
    case ErrorCode::UnsupportedWhiteNoise: return "UnsupportedWhiteNoise";
    case ErrorCode::KernelTooWide: return "KernelTooWide";
    case ErrorCode::UnresolvableKernel: return "UnresolvableKernel";
    case ErrorCode::WhiteNoiseUnsupported: return "WhiteNoiseUnsupported";
    case ErrorCode::DegenerateMeasure: return "DegenerateMeasure";
    case ErrorCode::DegenerateAlpha: return "DegenerateAlpha";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::NegativeSample: return "NegativeSample";
    case ErrorCode::SupercriticalBeta: return "SupercriticalBeta";
    case ErrorCode::RunawayPath: return "RunawayPath";
    case ErrorCode::InsufficientConvergence: return "InsufficientConvergence";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::ConfigValidation: return "ConfigValidation";
    case ErrorCode::SchemaVersion: return "SchemaVersion";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace amshe
