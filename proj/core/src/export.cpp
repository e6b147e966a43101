#include "docgen/export.hpp"

#include <nlohmann/json.hpp>

namespace docgen {

namespace {

using Json = nlohmann::ordered_json;

std::string display_of(const ClipBank& bank, const std::string& key) {
  auto idx = bank.topic_index(key);
  return idx ? bank.topics()[*idx].display : key;
}

Json constraints_json(const GenerationConstraints& c) {
  Json j;
  j["min_total_s"] = c.min_total_s;
  j["max_total_s"] = c.max_total_s;
  j["max_clips_per_speaker"] = c.max_clips_per_speaker;
  j["require_topic_coverage"] = c.require_topic_coverage;
  j["max_restarts"] = c.max_restarts;
  return j;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string documentary_manifest_json(const Documentary& doc, const ClipBank& bank) {
  Json j;
  j["seed"] = doc.seed;
  j["selection"] = Json::array();
  for (const auto& key : doc.selection.topics) j["selection"].push_back(display_of(bank, key));
  j["constraints"] = constraints_json(doc.constraints);
  j["total_duration_s"] = doc.total_duration_s;
  j["clip_count"] = doc.clips.size();
  j["clips"] = Json::array();
  int position = 1;
  for (const Clip& clip : doc.clips) {
    Json c;
    c["position"] = position++;
    c["id"] = clip.id;
    c["interviewee_id"] = clip.interviewee_id;
    const Interviewee* person = bank.find_interviewee(clip.interviewee_id);
    c["interviewee"] = person ? person->display_name : clip.interviewee_id;
    c["duration_s"] = clip.duration_s;
    c["question_index"] = clip.question_index;
    c["keywords"] = Json::array();
    for (const auto& key : clip.keywords) c["keywords"].push_back(display_of(bank, key));
    c["media_uri"] = clip.media_uri;
    j["clips"].push_back(std::move(c));
  }
  return j.dump();
}

std::string documentary_m3u(const Documentary& doc, const ClipBank& bank) {
  std::string out = "#EXTM3U\n";
  for (const Clip& clip : doc.clips) {
    const Interviewee* person = bank.find_interviewee(clip.interviewee_id);
    out += "#EXTINF:" + std::to_string(clip.duration_s) + "," +
           (person ? person->display_name : clip.interviewee_id) + " - " + clip.id + "\n";
    out += clip.media_uri + "\n";
  }
  return out;
}

std::string documentary_edl_csv(const Documentary& doc, const ClipBank&) {
  std::string out = "clip_id,interviewee,start_order,duration_s\n";
  int order = 1;
  for (const Clip& clip : doc.clips) {
    out += csv_field(clip.id) + "," + csv_field(clip.interviewee_id) + "," + std::to_string(order++) + "," +
           std::to_string(clip.duration_s) + "\n";
  }
  return out;
}

std::string export_documentary(const Documentary& doc, const ClipBank& bank, PlaylistFormat format) {
  switch (format) {
    case PlaylistFormat::kJson: return documentary_manifest_json(doc, bank) + "\n";
    case PlaylistFormat::kM3u: return documentary_m3u(doc, bank);
    case PlaylistFormat::kEdlCsv: return documentary_edl_csv(doc, bank);
  }
  return {};
}

std::string validation_report_json(const ValidationReport& report) {
  Json j = Json::array();
  for (const auto& finding : report) {
    j.push_back({{"severity", std::string(to_string(finding.severity))},
                 {"code", std::string(to_string(finding.code))},
                 {"subject", finding.subject}});
  }
  return j.dump(2);
}

std::string bank_stats_json(const BankStats& stats, const ClipBank& bank) {
  Json j;
  j["clip_count"] = stats.clip_count;
  j["interviewee_count"] = stats.interviewee_count;
  j["topic_count"] = stats.topic_count;
  j["total_clip_duration_s"] = stats.total_clip_duration_s;
  j["min_duration_s"] = stats.min_duration_s;
  j["max_duration_s"] = stats.max_duration_s;
  j["mean_duration_s"] = stats.mean_duration_s;
  Json topics = Json::object();
  for (const auto& topic : bank.topics()) {
    auto it = stats.per_topic_clip_counts.find(topic.key);
    topics[topic.display] = it == stats.per_topic_clip_counts.end() ? 0 : it->second;
  }
  j["per_topic_clip_counts"] = std::move(topics);
  Json speakers = Json::object();
  for (const auto& person : bank.interviewees()) {
    auto it = stats.per_speaker_clip_counts.find(person.id);
    speakers[person.id] = it == stats.per_speaker_clip_counts.end() ? 0 : it->second;
  }
  j["per_speaker_clip_counts"] = std::move(speakers);
  return j.dump(2);
}

std::string coverage_report_json(const CoverageReport& report) {
  Json j;
  j["generations"] = report.generations;
  j["skipped"] = report.skipped;
  j["distinct_topics_viewed"] = report.distinct_topics_viewed;
  j["vocabulary_size"] = report.vocabulary_size;
  j["topics_fraction"] = report.topics_fraction;
  j["distinct_speakers_viewed"] = report.distinct_speakers_viewed;
  j["roster_size"] = report.roster_size;
  j["speakers_fraction"] = report.speakers_fraction;
  j["distinct_clips_viewed"] = report.distinct_clips_viewed;
  if (report.mean_consecutive_overlap) j["mean_consecutive_overlap"] = *report.mean_consecutive_overlap;
  return j.dump();
}

std::string topics_json(const ClipBank& bank) {
  const BankStats stats = bank_stats(bank);
  Json j = Json::array();
  for (const auto& topic : bank.topics()) {
    j.push_back({{"topic", topic.display}, {"clip_count", stats.per_topic_clip_counts.at(topic.key)}});
  }
  return j.dump();
}

}  // namespace docgen
