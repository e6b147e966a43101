#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docgen/clipbank.hpp"
#include "docgen/errors.hpp"

namespace docgen {

// Topics a viewer picked. Operations normalize the strings and reject unknown
// or missing topics, so raw user input can go straight in.
struct FilterSelection {
  std::vector<std::string> topics;
};

// Normalized, sorted, de-duplicated topic keys of `selection`, validated
// against the bank vocabulary. Throws kEmptySelection / kUnknownTopic.
std::vector<std::string> canonical_topics(const ClipBank& bank, const FilterSelection& selection);

struct GenerationConstraints {
  int min_total_s = 120;
  int max_total_s = 240;
  int max_clips_per_speaker = 2;
  bool require_topic_coverage = true;
  int max_restarts = 64;

  // Throws kInvalidConstraints.
  void validate() const;

  friend bool operator==(const GenerationConstraints&, const GenerationConstraints&) = default;
};

struct Documentary {
  std::vector<Clip> clips;
  int total_duration_s = 0;
  FilterSelection selection;  // canonical keys
  std::uint64_t seed = 0;
  GenerationConstraints constraints;
  std::chrono::system_clock::time_point generated_at;

  std::vector<std::string> clip_ids() const;
};

enum class InfeasibleReason {
  kNoCandidates,
  kInsufficientDuration,
  kCannotFitWindow,
  kCoverageImpossible,
  // Only from generate() on pools too large for exact search.
  kRestartBudgetExhausted,
};

std::string_view to_string(InfeasibleReason reason);

class InfeasibleError : public Error {
 public:
  InfeasibleError(InfeasibleReason reason, const std::string& message);
  InfeasibleReason reason() const noexcept { return reason_; }

 private:
  InfeasibleReason reason_;
};

struct FeasibilityReport {
  bool feasible = false;
  std::optional<std::vector<std::string>> witness;  // clip ids, playback order
  std::optional<InfeasibleReason> reason;
};

inline constexpr std::size_t kDefaultExactSearchCap = 24;
inline constexpr std::size_t kOraclePoolCap = 12;

// Indices into bank.clips() of every clip carrying at least one selected
// topic, in bank order.
std::vector<std::size_t> filter_candidates(const ClipBank& bank, const FilterSelection& selection);

// Exact decision by pruned exhaustive search. Throws kPoolTooLarge when the
// candidate pool exceeds `exact_search_cap`.
FeasibilityReport feasible(const ClipBank& bank, const FilterSelection& selection,
                           const GenerationConstraints& constraints,
                           std::size_t exact_search_cap = kDefaultExactSearchCap);

// Seeded randomized assembly: coverage pass, fill pass, ordering pass, with
// restarts on derived sub-seeds. Pure in (bank, selection, constraints, seed)
// apart from generated_at. Throws InfeasibleError when no documentary exists
// (or, for large pools, none was found within the restart budget).
Documentary generate(const ClipBank& bank, const FilterSelection& selection,
                     const GenerationConstraints& constraints, std::uint64_t seed);

// Every valid clip-id sequence, by brute force over subsets and orderings.
// Test oracle; throws kPoolTooLarge above kOraclePoolCap candidates.
std::set<std::vector<std::string>> oracle_enumerate(const ClipBank& bank,
                                                    const FilterSelection& selection,
                                                    const GenerationConstraints& constraints);

}  // namespace docgen
