#include "imvb7/errors.hpp"

namespace imvb7 {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownValue: return "UnknownValue";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::MalformedVector: return "MalformedVector";
    case ErrorCode::BlockOrderMismatch: return "BlockOrderMismatch";
    case ErrorCode::BlockWidthMismatch: return "BlockWidthMismatch";
    case ErrorCode::MalformedBlock: return "MalformedBlock";
    case ErrorCode::InvalidViableEntry: return "InvalidViableEntry";
    case ErrorCode::InvalidSchema: return "InvalidSchema";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownFoodLabel: return "UnknownFoodLabel";
    case ErrorCode::DuplicateTuple: return "DuplicateTuple";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::FileError: return "FileError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::MaxvalUnsupported: return "MaxvalUnsupported";
    case ErrorCode::TruncatedPixelData: return "TruncatedPixelData";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::EmptyPalette: return "EmptyPalette";
    case ErrorCode::EmptyLabelSet: return "EmptyLabelSet";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::InvalidBinCount: return "InvalidBinCount";
    case ErrorCode::NoNonEmptyBins: return "NoNonEmptyBins";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyEvaluationSet: return "EmptyEvaluationSet";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::ProviderFailure: return "ProviderFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_internal_error(ErrorCode code) noexcept {
  return code == ErrorCode::Internal;
}

} // namespace imvb7
