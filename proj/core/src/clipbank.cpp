#include "docgen/clipbank.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "docgen/errors.hpp"

namespace docgen {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(ErrorCode code, std::string subject, const std::string& message) {
  throw Error(code, std::move(subject), message);
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::kParseError, where, where + ": " + what);
}

void reject_unknown_keys(const Json& object, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema_error(where, "unknown key \"" + key + "\"");
    }
  }
}

const Json& require(const Json& object, const std::string& where, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) schema_error(where, std::string("missing key \"") + key + "\"");
  return *it;
}

std::string require_string(const Json& object, const std::string& where, const char* key,
                           bool allow_empty = false) {
  const Json& value = require(object, where, key);
  if (!value.is_string()) schema_error(where + "." + key, "expected a string");
  auto text = value.get<std::string>();
  if (!allow_empty && text.empty()) schema_error(where + "." + key, "must not be empty");
  return text;
}

int require_int(const Json& object, const std::string& where, const char* key, int min_value) {
  const Json& value = require(object, where, key);
  if (!value.is_number_integer()) schema_error(where + "." + key, "expected an integer");
  const auto v = value.get<std::int64_t>();
  if (v < min_value || v > std::numeric_limits<int>::max()) {
    schema_error(where + "." + key, "out of range (" + std::to_string(v) + ")");
  }
  return static_cast<int>(v);
}

const Json& require_array(const Json& object, const std::string& where, const char* key) {
  const Json& value = require(object, where, key);
  if (!value.is_array()) schema_error(where + "." + key, "expected an array");
  return value;
}

}  // namespace

std::optional<std::size_t> ClipBank::topic_index(std::string_view key) const {
  auto it = topic_by_key_.find(std::string(key));
  if (it == topic_by_key_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ClipBank::clip_index(std::string_view id) const {
  auto it = clip_by_id_.find(std::string(id));
  if (it == clip_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ClipBank::interviewee_index(std::string_view id) const {
  auto it = interviewee_by_id_.find(std::string(id));
  if (it == interviewee_by_id_.end()) return std::nullopt;
  return it->second;
}

const Clip* ClipBank::find_clip(std::string_view id) const {
  auto idx = clip_index(id);
  return idx ? &clips_[*idx] : nullptr;
}

const Interviewee* ClipBank::find_interviewee(std::string_view id) const {
  auto idx = interviewee_index(id);
  return idx ? &interviewees_[*idx] : nullptr;
}

ClipBank parse_bank(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kParseError, "", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("$", "top level must be an object");
  reject_unknown_keys(doc, "$", {"topics", "interviewees", "clips", "source_notes"});

  ClipBank bank;

  const Json& topics = require_array(doc, "$", "topics");
  if (topics.size() > kMaxVocabularySize) {
    schema_error("$.topics", "more than " + std::to_string(kMaxVocabularySize) + " topics");
  }
  for (std::size_t i = 0; i < topics.size(); ++i) {
    const std::string where = "$.topics[" + std::to_string(i) + "]";
    if (!topics[i].is_string()) schema_error(where, "expected a string");
    auto topic = make_topic(topics[i].get<std::string>());
    if (!topic) schema_error(where, "invalid topic \"" + topics[i].get<std::string>() + "\"");
    if (!bank.topic_by_key_.emplace(topic->key, bank.topics_.size()).second) {
      fail(ErrorCode::kDuplicateId, topic->key, "duplicate topic \"" + topic->display + "\"");
    }
    bank.topics_.push_back(std::move(*topic));
  }

  const Json& interviewees = require_array(doc, "$", "interviewees");
  for (std::size_t i = 0; i < interviewees.size(); ++i) {
    const std::string where = "$.interviewees[" + std::to_string(i) + "]";
    const Json& entry = interviewees[i];
    if (!entry.is_object()) schema_error(where, "expected an object");
    reject_unknown_keys(entry, where, {"id", "display_name", "role"});
    Interviewee person{require_string(entry, where, "id"), require_string(entry, where, "display_name"),
                       require_string(entry, where, "role", true)};
    if (!bank.interviewee_by_id_.emplace(person.id, bank.interviewees_.size()).second) {
      fail(ErrorCode::kDuplicateId, person.id, "duplicate interviewee id \"" + person.id + "\"");
    }
    bank.interviewees_.push_back(std::move(person));
  }

  const Json& clips = require_array(doc, "$", "clips");
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const std::string where = "$.clips[" + std::to_string(i) + "]";
    const Json& entry = clips[i];
    if (!entry.is_object()) schema_error(where, "expected an object");
    reject_unknown_keys(entry, where,
                        {"id", "interviewee_id", "duration_s", "keywords", "question_index", "media_uri",
                         "excerpt"});
    Clip clip;
    clip.id = require_string(entry, where, "id");
    clip.interviewee_id = require_string(entry, where, "interviewee_id");
    clip.duration_s = require_int(entry, where, "duration_s", 1);
    clip.question_index = require_int(entry, where, "question_index", 0);
    clip.media_uri = require_string(entry, where, "media_uri");
    if (auto it = entry.find("excerpt"); it != entry.end()) {
      if (!it->is_string()) schema_error(where + ".excerpt", "expected a string");
      clip.excerpt = it->get<std::string>();
    }

    const Json& keywords = require_array(entry, where, "keywords");
    if (keywords.empty()) schema_error(where + ".keywords", "at least one keyword required");
    std::uint64_t mask = 0;
    for (const auto& keyword : keywords) {
      if (!keyword.is_string()) schema_error(where + ".keywords", "expected strings");
      const auto raw = keyword.get<std::string>();
      auto key = normalize_topic_key(raw);
      auto idx = key ? bank.topic_index(*key) : std::nullopt;
      if (!idx) {
        fail(ErrorCode::kUnknownTopicRef, raw,
             "clip \"" + clip.id + "\" references unknown topic \"" + raw + "\"");
      }
      if (!(mask & (std::uint64_t{1} << *idx))) clip.keywords.push_back(*key);
      mask |= std::uint64_t{1} << *idx;
    }
    std::sort(clip.keywords.begin(), clip.keywords.end());

    if (!bank.clip_by_id_.emplace(clip.id, bank.clips_.size()).second) {
      fail(ErrorCode::kDuplicateId, clip.id, "duplicate clip id \"" + clip.id + "\"");
    }
    auto speaker = bank.interviewee_index(clip.interviewee_id);
    if (!speaker) {
      fail(ErrorCode::kDanglingSpeaker, clip.interviewee_id,
           "clip \"" + clip.id + "\" names unknown interviewee \"" + clip.interviewee_id + "\"");
    }
    bank.clip_topic_masks_.push_back(mask);
    bank.clip_speakers_.push_back(*speaker);
    bank.source_records_.push_back(entry.dump());
    bank.clips_.push_back(std::move(clip));
  }
  if (bank.clips_.empty()) fail(ErrorCode::kEmptyBank, "", "clip bank has no clips");

  if (auto it = doc.find("source_notes"); it != doc.end()) {
    if (!it->is_string()) schema_error("$.source_notes", "expected a string");
    bank.source_notes_ = it->get<std::string>();
  }
  return bank;
}

ClipBank load_bank(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, manifest_path.string(), "cannot read " + manifest_path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(ErrorCode::kIo, manifest_path.string(), "error reading " + manifest_path.string());
  return parse_bank(buffer.str());
}

std::string_view to_string(Severity s) {
  return s == Severity::kWarning ? "WARNING" : "ERROR";
}

std::string_view to_string(FindingCode c) {
  switch (c) {
    case FindingCode::kDurationOutOfObservedRange: return "DurationOutOfObservedRange";
    case FindingCode::kDeadFilter: return "DeadFilter";
  }
  return "Unknown";
}

ValidationReport validate_bank(const ClipBank& bank) {
  ValidationReport report;
  std::uint64_t referenced = 0;
  for (std::size_t i = 0; i < bank.clips().size(); ++i) {
    const Clip& clip = bank.clips()[i];
    if (clip.duration_s < kObservedMinClipSeconds || clip.duration_s > kObservedMaxClipSeconds) {
      report.push_back({Severity::kWarning, FindingCode::kDurationOutOfObservedRange, clip.id});
    }
    referenced |= bank.topic_mask(i);
  }
  for (std::size_t t = 0; t < bank.topics().size(); ++t) {
    if (!(referenced & (std::uint64_t{1} << t))) {
      report.push_back({Severity::kWarning, FindingCode::kDeadFilter, bank.topics()[t].display});
    }
  }
  return report;
}

BankStats bank_stats(const ClipBank& bank) {
  BankStats stats;
  const auto& clips = bank.clips();
  stats.clip_count = clips.size();
  stats.interviewee_count = bank.interviewees().size();
  stats.topic_count = bank.topics().size();
  for (const auto& topic : bank.topics()) stats.per_topic_clip_counts[topic.key] = 0;
  for (const auto& person : bank.interviewees()) stats.per_speaker_clip_counts[person.id] = 0;

  stats.min_duration_s = std::numeric_limits<int>::max();
  for (const Clip& clip : clips) {
    stats.total_clip_duration_s += clip.duration_s;
    stats.min_duration_s = std::min(stats.min_duration_s, clip.duration_s);
    stats.max_duration_s = std::max(stats.max_duration_s, clip.duration_s);
    for (const auto& key : clip.keywords) ++stats.per_topic_clip_counts[key];
    ++stats.per_speaker_clip_counts[clip.interviewee_id];
  }
  if (clips.empty()) {
    stats.min_duration_s = 0;
  } else {
    stats.mean_duration_s =
        static_cast<double>(stats.total_clip_duration_s) / static_cast<double>(clips.size());
  }
  return stats;
}

}  // namespace docgen
