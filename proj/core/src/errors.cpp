#include "docgen/errors.hpp"

namespace docgen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyBank: return "EmptyBank";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownTopicRef: return "UnknownTopicRef";
    case ErrorCode::kDanglingSpeaker: return "DanglingSpeaker";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kUnknownTopic: return "UnknownTopic";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kPoolTooLarge: return "PoolTooLarge";
    case ErrorCode::kInvalidConstraints: return "InvalidConstraints";
    case ErrorCode::kForeignClip: return "ForeignClip";
    case ErrorCode::kEmptyLog: return "EmptyLog";
    case ErrorCode::kUnknownSession: return "UnknownSession";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string subject, const std::string& message)
    : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

}  // namespace docgen
