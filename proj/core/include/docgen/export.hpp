#pragma once

#include <string>

#include "docgen/clipbank.hpp"
#include "docgen/generator.hpp"
#include "docgen/session.hpp"

namespace docgen {

enum class PlaylistFormat { kJson, kM3u, kEdlCsv };

// Canonical compact documentary manifest. The CLI and the HTTP service both
// emit exactly these bytes for the same generation.
std::string documentary_manifest_json(const Documentary& doc, const ClipBank& bank);

// #EXTM3U playlist, one #EXTINF + media_uri pair per clip.
std::string documentary_m3u(const Documentary& doc, const ClipBank& bank);

// clip_id,interviewee,start_order,duration_s
std::string documentary_edl_csv(const Documentary& doc, const ClipBank& bank);

std::string export_documentary(const Documentary& doc, const ClipBank& bank, PlaylistFormat format);

std::string validation_report_json(const ValidationReport& report);
std::string bank_stats_json(const BankStats& stats, const ClipBank& bank);
std::string coverage_report_json(const CoverageReport& report);

// [{"topic": display form, "clip_count": n}, ...] in vocabulary order.
std::string topics_json(const ClipBank& bank);

}  // namespace docgen
