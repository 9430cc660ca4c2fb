#include "sglab/error.hpp"

namespace sglab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::IllConditioned: return "ILL_CONDITIONED";
    case ErrorCode::SpectrumHit: return "SPECTRUM_HIT";
    case ErrorCode::ContourTooClose: return "CONTOUR_TOO_CLOSE";
    case ErrorCode::NonConverged: return "NONCONVERGED";
    case ErrorCode::ClusteredSpectrum: return "CLUSTERED_SPECTRUM";
    case ErrorCode::TruncationInadequate: return "TRUNCATION_INADEQUATE";
    case ErrorCode::InsufficientSamples: return "INSUFFICIENT_SAMPLES";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::Config: return "CONFIG";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

IllConditionedError::IllConditionedError(const std::string& message, double last_estimate)
    : Error(ErrorCode::IllConditioned, message), last_estimate_(last_estimate) {}

TruncationError::TruncationError(const std::string& message, long required_max_index,
                                 long required_dim)
    : Error(ErrorCode::TruncationInadequate, message),
      required_max_index_(required_max_index),
      required_dim_(required_dim) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace sglab
