#pragma once

#include <stdexcept>
#include <string>

namespace imvb7 {

// Every failure the library reports, one code per contract violation.
// The CLI maps DataClass codes to exit 2 and InternalClass codes to exit 3.
enum class ErrorCode {
  // schema / encoding
  UnknownValue,
  ArityMismatch,
  MalformedVector,
  BlockOrderMismatch,
  BlockWidthMismatch,
  MalformedBlock,
  InvalidViableEntry,
  InvalidSchema,
  // dataset io
  ParseError,
  UnknownFoodLabel,
  DuplicateTuple,
  EmptyInput,
  FileError,
  // image layer
  BadMagic,
  BadHeader,
  MaxvalUnsupported,
  TruncatedPixelData,
  EmptyImage,
  EmptyPalette,
  // decision tree
  EmptyLabelSet,
  ShapeMismatch,
  EmptyTrainingSet,
  DimensionMismatch,
  // ensemble
  EmptyEnsemble,
  InvalidBinCount,
  NoNonEmptyBins,
  InvalidTarget,
  SingleClassInput,
  InvalidSchedule,
  // metrics
  LengthMismatch,
  UnknownLabel,
  EmptyEvaluationSet,
  InvalidBeta,
  // pipeline
  ProviderFailure,
  InvalidConfig,
  // broken internal invariant (never expected on valid input)
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// True for codes that signal a broken internal invariant rather than bad data.
bool is_internal_error(ErrorCode code) noexcept;

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

} // namespace imvb7
