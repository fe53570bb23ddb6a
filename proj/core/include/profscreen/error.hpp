#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace profscreen {

enum class ErrorCode {
  InvalidArgument,
  NonFiniteInput,
  ZeroVarianceColumn,
  DimensionMismatch,
  ConvergenceFailure,
  DegenerateSpectrum,
  InvalidFactorCount,
  InvalidTruncation,
  SingularScale,
  InvalidK,
  EmptySubset,
  DegenerateFit,
  EmptyValidGrid,
  NotPositiveDefinite,
  InvalidSpikeCounts,
  IndexOutOfRange,
  EmptyFile,
  MissingResponse,
  RaggedRows,
  NonNumericCell,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace profscreen
