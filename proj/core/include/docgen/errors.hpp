#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace docgen {

enum class ErrorCode {
  // Bank loading.
  kIo,
  kParseError,
  kEmptyBank,
  kDuplicateId,
  kUnknownTopicRef,
  kDanglingSpeaker,
  // Selection and generation.
  kEmptySelection,
  kUnknownTopic,
  kInfeasible,
  kPoolTooLarge,
  kInvalidConstraints,
  // Sessions.
  kForeignClip,
  kEmptyLog,
  kUnknownSession,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this exception. `subject` names the
// offending entity (clip id, topic, path) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

}  // namespace docgen
