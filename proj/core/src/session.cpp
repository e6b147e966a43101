#include "docgen/session.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "docgen/errors.hpp"
#include "docgen/rng.hpp"

namespace docgen {

namespace {

using Json = nlohmann::ordered_json;
using std::chrono::microseconds;

void append_entry(SessionLog& log, SessionEntry entry) {
  if (!log.entries.empty() && entry.timestamp <= log.entries.back().timestamp) {
    entry.timestamp = log.entries.back().timestamp + microseconds{1};
  }
  log.entries.push_back(std::move(entry));
}

SessionEntry entry_for(const Documentary& doc, const ClipBank& bank) {
  SessionEntry entry;
  for (const Clip& clip : doc.clips) {
    if (!bank.find_clip(clip.id)) {
      throw Error(ErrorCode::kForeignClip, clip.id, "clip \"" + clip.id + "\" is not in the bank");
    }
    entry.clip_ids.push_back(clip.id);
  }
  entry.timestamp = std::chrono::time_point_cast<microseconds>(doc.generated_at);
  entry.selection = doc.selection;
  entry.seed = doc.seed;
  entry.total_duration_s = doc.total_duration_s;
  return entry;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  std::size_t common = 0;
  for (const auto& id : sa) common += sb.count(id);
  const std::size_t united = sa.size() + sb.size() - common;
  return united == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(united);
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, std::to_string(line),
              "session log line " + std::to_string(line) + ": " + what);
}

}  // namespace

SessionLog record_generation(const SessionLog& log, const Documentary& doc, const ClipBank& bank) {
  SessionLog next = log;
  append_entry(next, entry_for(doc, bank));
  return next;
}

CoverageReport coverage_report(const SessionLog& log, const ClipBank& bank) {
  if (log.entries.empty()) throw Error(ErrorCode::kEmptyLog, log.session_id, "session log is empty");

  std::set<std::string> topics;
  std::set<std::string> speakers;
  std::set<std::string> clips;
  for (const auto& entry : log.entries) {
    for (const auto& id : entry.clip_ids) {
      const Clip* clip = bank.find_clip(id);
      if (!clip) throw Error(ErrorCode::kForeignClip, id, "clip \"" + id + "\" is not in the bank");
      clips.insert(id);
      speakers.insert(clip->interviewee_id);
      topics.insert(clip->keywords.begin(), clip->keywords.end());
    }
  }

  CoverageReport report;
  report.generations = log.entries.size();
  report.distinct_topics_viewed = topics.size();
  report.vocabulary_size = bank.topics().size();
  report.distinct_speakers_viewed = speakers.size();
  report.roster_size = bank.interviewees().size();
  report.distinct_clips_viewed = clips.size();
  if (report.vocabulary_size > 0) {
    report.topics_fraction =
        static_cast<double>(report.distinct_topics_viewed) / static_cast<double>(report.vocabulary_size);
  }
  if (report.roster_size > 0) {
    report.speakers_fraction =
        static_cast<double>(report.distinct_speakers_viewed) / static_cast<double>(report.roster_size);
  }
  if (log.entries.size() >= 2) {
    double sum = 0.0;
    for (std::size_t i = 1; i < log.entries.size(); ++i) {
      sum += jaccard(log.entries[i - 1].clip_ids, log.entries[i].clip_ids);
    }
    report.mean_consecutive_overlap = sum / static_cast<double>(log.entries.size() - 1);
  }
  return report;
}

SimulationResult simulate(const ClipBank& bank, const SimulationPolicy& policy, std::uint64_t seed) {
  if (policy.generations < 1) {
    throw Error(ErrorCode::kInvalidConstraints, "generations", "simulation needs at least one generation");
  }
  if (policy.min_topics_per_selection < 1 ||
      policy.max_topics_per_selection < policy.min_topics_per_selection) {
    throw Error(ErrorCode::kInvalidConstraints, "topics_per_selection",
                "topics-per-selection range must satisfy 1 <= lo <= hi");
  }
  policy.constraints.validate();

  const auto vocabulary = static_cast<int>(bank.topics().size());
  const int lo = std::min(policy.min_topics_per_selection, vocabulary);
  const int hi = std::min(policy.max_topics_per_selection, vocabulary);

  Rng rng(seed);
  SimulationResult result;
  result.log.session_id = "sim-" + std::to_string(seed);
  std::size_t skipped = 0;
  std::vector<std::size_t> indices(bank.topics().size());

  for (int g = 0; g < policy.generations; ++g) {
    const auto k = static_cast<std::size_t>(lo + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(hi - lo + 1))));
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    FilterSelection selection;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform(indices.size() - i));
      std::swap(indices[i], indices[j]);
      selection.topics.push_back(bank.topics()[indices[i]].key);
    }
    const std::uint64_t generation_seed = rng.next();
    try {
      Documentary doc = generate(bank, selection, policy.constraints, generation_seed);
      doc.generated_at = std::chrono::system_clock::time_point{microseconds{g + 1}};
      append_entry(result.log, entry_for(doc, bank));
    } catch (const InfeasibleError&) {
      ++skipped;
    }
  }

  if (result.log.entries.empty()) {
    result.report.vocabulary_size = bank.topics().size();
    result.report.roster_size = bank.interviewees().size();
  } else {
    result.report = coverage_report(result.log, bank);
  }
  result.report.skipped = skipped;
  return result;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day = floor<days>(ts);
  const year_month_day ymd{day};
  const hh_mm_ss<microseconds> tod{ts - day};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld.%06ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(tod.hours().count()), static_cast<long>(tod.minutes().count()),
                static_cast<long>(tod.seconds().count()), static_cast<long>(tod.subseconds().count()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 27 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != '.' || text[26] != 'Z') {
    return std::nullopt;
  }
  auto number = [&](std::size_t pos, std::size_t len) -> std::optional<long> {
    long v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = number(0, 4), mo = number(5, 2), d = number(8, 2), h = number(11, 2), mi = number(14, 2),
       s = number(17, 2), us = number(20, 6);
  if (!y || !mo || !d || !h || !mi || !s || !us) return std::nullopt;
  const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *s > 59) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{*h} + minutes{*mi} + seconds{*s} + microseconds{*us};
}

std::string session_entry_json(const SessionLog& log, const SessionEntry& entry) {
  Json j;
  j["session_id"] = log.session_id;
  j["timestamp"] = format_timestamp(entry.timestamp);
  j["selection"] = entry.selection.topics;
  j["seed"] = entry.seed;
  j["clip_ids"] = entry.clip_ids;
  j["total_duration_s"] = entry.total_duration_s;
  return j.dump();
}

std::string session_log_ndjson(const SessionLog& log) {
  std::string out;
  for (const auto& entry : log.entries) out += session_entry_json(log, entry) + "\n";
  return out;
}

SessionLog parse_session_log(std::string_view ndjson, std::string session_id) {
  SessionLog log;
  log.session_id = std::move(session_id);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < ndjson.size()) {
    std::size_t end = ndjson.find('\n', start);
    if (end == std::string_view::npos) end = ndjson.size();
    const std::string_view line = ndjson.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      bad_line(line_no, e.what());
    }
    try {
      SessionEntry entry;
      auto ts = parse_timestamp(j.at("timestamp").get<std::string>());
      if (!ts) bad_line(line_no, "bad timestamp");
      entry.timestamp = *ts;
      entry.selection.topics = j.at("selection").get<std::vector<std::string>>();
      entry.seed = j.at("seed").get<std::uint64_t>();
      entry.clip_ids = j.at("clip_ids").get<std::vector<std::string>>();
      entry.total_duration_s = j.at("total_duration_s").get<int>();
      if (!log.entries.empty() && entry.timestamp <= log.entries.back().timestamp) {
        bad_line(line_no, "timestamps must be strictly increasing");
      }
      log.entries.push_back(std::move(entry));
    } catch (const Json::exception& e) {
      bad_line(line_no, e.what());
    }
  }
  return log;
}

SessionLog load_session_log(const std::filesystem::path& path, std::string session_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string(), "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_session_log(buffer.str(), std::move(session_id));
}

void append_session_entry(const std::filesystem::path& path, const SessionLog& log, const SessionEntry& entry) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::string line = session_entry_json(log, entry) + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kIo, path.string(), "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  const ssize_t written = ::write(fd, line.data(), line.size());
  const int saved = errno;
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size())) {
    throw Error(ErrorCode::kIo, path.string(), "short write to " + path.string() + ": " + std::strerror(saved));
  }
}

}  // namespace docgen
