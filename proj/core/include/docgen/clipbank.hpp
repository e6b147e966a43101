#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docgen/topic.hpp"

namespace docgen {

// Durations observed in the source bank; clips outside warn but still load.
inline constexpr int kObservedMinClipSeconds = 18;
inline constexpr int kObservedMaxClipSeconds = 74;

// Topic masks are 64-bit, which bounds the vocabulary.
inline constexpr std::size_t kMaxVocabularySize = 64;

struct Interviewee {
  std::string id;
  std::string display_name;
  std::string role_description;
};

struct Clip {
  std::string id;
  std::string interviewee_id;
  int duration_s = 0;
  std::vector<std::string> keywords;  // normalized topic keys, sorted, unique
  int question_index = 0;
  std::string media_uri;
  std::optional<std::string> excerpt;
};

// Immutable, validated clip bank. Only the loaders construct one.
class ClipBank {
 public:
  const std::vector<Topic>& topics() const noexcept { return topics_; }
  const std::vector<Interviewee>& interviewees() const noexcept { return interviewees_; }
  const std::vector<Clip>& clips() const noexcept { return clips_; }
  const std::optional<std::string>& source_notes() const noexcept { return source_notes_; }

  std::optional<std::size_t> topic_index(std::string_view key) const;
  std::optional<std::size_t> clip_index(std::string_view id) const;
  std::optional<std::size_t> interviewee_index(std::string_view id) const;

  const Clip* find_clip(std::string_view id) const;
  const Interviewee* find_interviewee(std::string_view id) const;

  // Bit i set <=> the clip carries topics()[i].
  std::uint64_t topic_mask(std::size_t clip_idx) const { return clip_topic_masks_[clip_idx]; }
  std::size_t speaker_index(std::size_t clip_idx) const { return clip_speakers_[clip_idx]; }

  // Compact JSON of the clip's manifest record as it appeared in the source.
  const std::string& source_record(std::size_t clip_idx) const { return source_records_[clip_idx]; }

 private:
  friend ClipBank parse_bank(std::string_view json_text);

  std::vector<Topic> topics_;
  std::vector<Interviewee> interviewees_;
  std::vector<Clip> clips_;
  std::optional<std::string> source_notes_;

  std::unordered_map<std::string, std::size_t> topic_by_key_;
  std::unordered_map<std::string, std::size_t> clip_by_id_;
  std::unordered_map<std::string, std::size_t> interviewee_by_id_;
  std::vector<std::uint64_t> clip_topic_masks_;
  std::vector<std::size_t> clip_speakers_;
  std::vector<std::string> source_records_;
};

// Parses and validates a manifest. Throws docgen::Error with kParseError,
// kEmptyBank, kDuplicateId, kUnknownTopicRef or kDanglingSpeaker.
ClipBank parse_bank(std::string_view json_text);

// Same as parse_bank; kIo when the file cannot be read.
ClipBank load_bank(const std::filesystem::path& manifest_path);

enum class Severity { kWarning, kError };

enum class FindingCode {
  kDurationOutOfObservedRange,
  kDeadFilter,
};

struct Finding {
  Severity severity = Severity::kWarning;
  FindingCode code{};
  std::string subject;

  friend bool operator==(const Finding&, const Finding&) = default;
};

using ValidationReport = std::vector<Finding>;

std::string_view to_string(Severity s);
std::string_view to_string(FindingCode c);

ValidationReport validate_bank(const ClipBank& bank);

struct BankStats {
  std::size_t clip_count = 0;
  std::size_t interviewee_count = 0;
  std::size_t topic_count = 0;
  std::int64_t total_clip_duration_s = 0;
  std::map<std::string, std::size_t> per_topic_clip_counts;    // by topic key
  std::map<std::string, std::size_t> per_speaker_clip_counts;  // by interviewee id
  int min_duration_s = 0;
  int max_duration_s = 0;
  double mean_duration_s = 0.0;

  friend bool operator==(const BankStats&, const BankStats&) = default;
};

BankStats bank_stats(const ClipBank& bank);

}  // namespace docgen
