#include "scriptforge/errors.h"

namespace scriptforge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kInvalidUtf8: return "InvalidUtf8";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kTokenizationFailure: return "TokenizationFailure";
    case ErrorCode::kWrongStorageOrder: return "WrongStorageOrder";
    case ErrorCode::kStreamTooShort: return "StreamTooShort";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNoGraphemes: return "NoGraphemes";
    case ErrorCode::kNoTransitions: return "NoTransitions";
    case ErrorCode::kNoWords: return "NoWords";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kPoolExhausted: return "PoolExhausted";
    case ErrorCode::kMissingSource: return "MissingSource";
    case ErrorCode::kEmptyPlaintext: return "EmptyPlaintext";
    case ErrorCode::kNoUnambiguousAlternative: return "NoUnambiguousAlternative";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

TokenizationFailure::TokenizationFailure(std::string word,
                                         std::size_t position)
    : Error(ErrorCode::kTokenizationFailure,
            "no inventory entry matches \"" + word + "\" at position " +
                std::to_string(position)),
      word_(std::move(word)),
      position_(position) {}

}  // namespace scriptforge
