#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sglab {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  IllConditioned,
  SpectrumHit,
  ContourTooClose,
  NonConverged,
  ClusteredSpectrum,
  TruncationInadequate,
  InsufficientSamples,
  Degenerate,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `code()` is stable and is what the
/// CLI maps onto exit codes and report messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Power iteration hit its cap. Carries the estimate from the last iterate.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& message, double last_estimate);

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

/// Truncation is too small for the requested time window.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& message, long required_max_index, long required_dim);

  long required_max_index() const noexcept { return required_max_index_; }
  long required_dim() const noexcept { return required_dim_; }

 private:
  long required_max_index_;
  long required_dim_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace sglab
