#include "profscreen/error.hpp"

namespace profscreen {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::InvalidFactorCount: return "InvalidFactorCount";
    case ErrorCode::InvalidTruncation: return "InvalidTruncation";
    case ErrorCode::SingularScale: return "SingularScale";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::EmptyValidGrid: return "EmptyValidGrid";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidSpikeCounts: return "InvalidSpikeCounts";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MissingResponse: return "MissingResponse";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace profscreen
