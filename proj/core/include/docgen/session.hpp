#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docgen/clipbank.hpp"
#include "docgen/generator.hpp"

namespace docgen {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

struct SessionEntry {
  Timestamp timestamp;
  FilterSelection selection;
  std::uint64_t seed = 0;
  std::vector<std::string> clip_ids;
  int total_duration_s = 0;
};

struct SessionLog {
  std::string session_id;
  std::vector<SessionEntry> entries;  // strictly increasing timestamps
};

// Returns `log` plus one entry for `doc`. A timestamp not after the last entry
// is advanced by one microsecond to keep the log strictly ordered.
// Throws kForeignClip when the documentary references a clip not in `bank`.
SessionLog record_generation(const SessionLog& log, const Documentary& doc, const ClipBank& bank);

struct CoverageReport {
  std::size_t generations = 0;
  std::size_t skipped = 0;  // infeasible draws, simulate() only
  std::size_t distinct_topics_viewed = 0;
  std::size_t vocabulary_size = 0;
  double topics_fraction = 0.0;
  std::size_t distinct_speakers_viewed = 0;
  std::size_t roster_size = 0;
  double speakers_fraction = 0.0;
  std::size_t distinct_clips_viewed = 0;
  // Mean Jaccard similarity of clip-id sets over consecutive generations;
  // absent with fewer than two generations.
  std::optional<double> mean_consecutive_overlap;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

// Throws kEmptyLog, or kForeignClip for ids the bank does not know.
CoverageReport coverage_report(const SessionLog& log, const ClipBank& bank);

struct SimulationPolicy {
  int min_topics_per_selection = 1;
  int max_topics_per_selection = 3;
  int generations = 10;
  GenerationConstraints constraints;
};

struct SimulationResult {
  SessionLog log;
  CoverageReport report;
};

// Runs `generations` uniformly random selections through generate() in a fresh
// session. Entries carry logical timestamps (microsecond i after the epoch) so
// the log is reproducible from `seed`. Infeasible draws count as skipped.
SimulationResult simulate(const ClipBank& bank, const SimulationPolicy& policy, std::uint64_t seed);

// Newline-delimited JSON, one entry per line.
std::string session_entry_json(const SessionLog& log, const SessionEntry& entry);
std::string session_log_ndjson(const SessionLog& log);
SessionLog parse_session_log(std::string_view ndjson, std::string session_id);
SessionLog load_session_log(const std::filesystem::path& path, std::string session_id);

// Appends one line with a single O_APPEND write so concurrent appenders never
// interleave within a line.
void append_session_entry(const std::filesystem::path& path, const SessionLog& log,
                          const SessionEntry& entry);

std::string format_timestamp(Timestamp ts);
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace docgen
