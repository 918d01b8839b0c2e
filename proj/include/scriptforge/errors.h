#ifndef SCRIPTFORGE_ERRORS_H_
#define SCRIPTFORGE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace scriptforge {

enum class ErrorCode {
  kIoFailure,
  kInvalidUtf8,
  kEmptyCorpus,
  kTokenizationFailure,
  kWrongStorageOrder,
  kStreamTooShort,
  kEmptyTable,
  kInsufficientData,
  kNoGraphemes,
  kNoTransitions,
  kNoWords,
  kUnsupportedOrder,
  kPoolExhausted,
  kMissingSource,
  kEmptyPlaintext,
  kNoUnambiguousAlternative,
  kInvalidConfig,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// front-ends can map it onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the EVA tokenizer; `position` is the code-point offset at which
// no inventory entry matched.
class TokenizationFailure : public Error {
 public:
  TokenizationFailure(std::string word, std::size_t position);

  const std::string& word() const { return word_; }
  std::size_t position() const { return position_; }

 private:
  std::string word_;
  std::size_t position_;
};

}  // namespace scriptforge

#endif  // SCRIPTFORGE_ERRORS_H_
