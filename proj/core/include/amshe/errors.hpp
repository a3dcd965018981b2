#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amshe {

enum class ErrorCode {
  InvalidArgument,
  DomainTooLarge,
  UnsupportedWhiteNoise,
  KernelTooWide,
  UnresolvableKernel,
  WhiteNoiseUnsupported,
  DegenerateMeasure,
  DegenerateAlpha,
  EmptySample,
  DegenerateGrid,
  NegativeSample,
  SupercriticalBeta,
  RunawayPath,
  InsufficientConvergence,
  ConfigParse,
  ConfigValidation,
  SchemaVersion,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// All library failures carry a machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace amshe
