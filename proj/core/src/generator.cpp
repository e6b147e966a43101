#include "docgen/generator.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <tuple>
#include <numeric>

#include "docgen/rng.hpp"

namespace docgen {

namespace {

struct Candidate {
  std::size_t clip = 0;  // index into bank.clips()
  int duration_s = 0;
  std::size_t speaker = 0;
  std::uint64_t topics = 0;  // clip topics restricted to the selection
  int question_index = 0;
};

struct Pool {
  std::vector<std::string> keys;  // canonical selection
  std::vector<std::size_t> topic_order;  // vocabulary indices, parallel to keys
  std::uint64_t selection_mask = 0;
  std::vector<Candidate> items;
};

Pool build_pool(const ClipBank& bank, const FilterSelection& selection) {
  Pool pool;
  pool.keys = canonical_topics(bank, selection);
  for (const auto& key : pool.keys) {
    const std::size_t idx = *bank.topic_index(key);
    pool.topic_order.push_back(idx);
    pool.selection_mask |= std::uint64_t{1} << idx;
  }
  for (std::size_t i = 0; i < bank.clips().size(); ++i) {
    const std::uint64_t hit = bank.topic_mask(i) & pool.selection_mask;
    if (!hit) continue;
    const Clip& clip = bank.clips()[i];
    pool.items.push_back({i, clip.duration_s, bank.speaker_index(i), hit, clip.question_index});
  }
  return pool;
}

std::uint64_t reachable_topics(const Pool& pool) {
  std::uint64_t mask = 0;
  for (const auto& c : pool.items) mask |= c.topics;
  return mask;
}

// Longest total achievable under the speaker cap, ignoring the upper bound.
std::int64_t max_capped_total(const Pool& pool, int cap) {
  std::vector<std::vector<int>> by_speaker;
  for (const auto& c : pool.items) {
    if (c.speaker >= by_speaker.size()) by_speaker.resize(c.speaker + 1);
    by_speaker[c.speaker].push_back(c.duration_s);
  }
  std::int64_t total = 0;
  for (auto& durations : by_speaker) {
    std::sort(durations.rbegin(), durations.rend());
    const auto take = std::min<std::size_t>(durations.size(), static_cast<std::size_t>(cap));
    total += std::accumulate(durations.begin(), durations.begin() + static_cast<std::ptrdiff_t>(take),
                             std::int64_t{0});
  }
  return total;
}

std::optional<InfeasibleReason> cheap_verdict(const Pool& pool, const GenerationConstraints& c) {
  if (pool.items.empty()) return InfeasibleReason::kNoCandidates;
  if (max_capped_total(pool, c.max_clips_per_speaker) < c.min_total_s) {
    return InfeasibleReason::kInsufficientDuration;
  }
  return std::nullopt;
}

// Pruned include/exclude search over the pool. Returns pool positions of the
// first satisfying subset found.
class ExactSearch {
 public:
  ExactSearch(const Pool& pool, const GenerationConstraints& c, bool coverage)
      : pool_(pool), c_(c), coverage_(coverage) {
    order_.resize(pool.items.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return pool.items[a].duration_s > pool.items[b].duration_s;
    });
    const std::size_t n = order_.size();
    suffix_total_.assign(n + 1, 0);
    suffix_topics_.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
      const auto& item = pool.items[order_[i]];
      suffix_total_[i] = suffix_total_[i + 1] + item.duration_s;
      suffix_topics_[i] = suffix_topics_[i + 1] | item.topics;
    }
  }

  std::optional<std::vector<std::size_t>> run() {
    picked_.clear();
    speaker_counts_.clear();
    if (visit(0, 0, 0)) return picked_;
    return std::nullopt;
  }

 private:
  bool satisfied(std::int64_t total, std::uint64_t covered) const {
    return total >= c_.min_total_s && total <= c_.max_total_s &&
           (!coverage_ || covered == pool_.selection_mask);
  }

  bool visit(std::size_t i, std::int64_t total, std::uint64_t covered) {
    if (satisfied(total, covered)) return true;
    if (i == order_.size()) return false;
    if (total + suffix_total_[i] < c_.min_total_s) return false;
    if (coverage_ && (covered | suffix_topics_[i]) != pool_.selection_mask) return false;

    const std::size_t pos = order_[i];
    const Candidate& item = pool_.items[pos];
    int& count = speaker_counts_[item.speaker];
    if (total + item.duration_s <= c_.max_total_s && count < c_.max_clips_per_speaker) {
      ++count;
      picked_.push_back(pos);
      if (visit(i + 1, total + item.duration_s, covered | item.topics)) return true;
      picked_.pop_back();
      --count;
    }
    return visit(i + 1, total, covered);
  }

  const Pool& pool_;
  const GenerationConstraints& c_;
  bool coverage_;
  std::vector<std::size_t> order_;
  std::vector<std::int64_t> suffix_total_;
  std::vector<std::uint64_t> suffix_topics_;
  std::vector<std::size_t> picked_;
  std::map<std::size_t, int> speaker_counts_;
};

struct ExactVerdict {
  std::optional<std::vector<std::size_t>> witness;
  std::optional<InfeasibleReason> reason;
};

ExactVerdict decide_exactly(const Pool& pool, const GenerationConstraints& c) {
  if (auto reason = cheap_verdict(pool, c)) return {std::nullopt, reason};
  if (!c.require_topic_coverage) {
    auto found = ExactSearch(pool, c, false).run();
    if (!found) return {std::nullopt, InfeasibleReason::kCannotFitWindow};
    return {std::move(found), std::nullopt};
  }
  if (auto found = ExactSearch(pool, c, true).run()) return {std::move(found), std::nullopt};
  // Distinguish a window problem from a coverage problem.
  if (!ExactSearch(pool, c, false).run()) return {std::nullopt, InfeasibleReason::kCannotFitWindow};
  return {std::nullopt, InfeasibleReason::kCoverageImpossible};
}

// One randomized attempt: coverage pass then fill pass. Returns pool positions
// in pick order, or nullopt at a dead end.
std::optional<std::vector<std::size_t>> assemble(const Pool& pool, const GenerationConstraints& c,
                                                 std::size_t roster_size, Rng& rng) {
  std::vector<bool> used(pool.items.size(), false);
  std::vector<int> speaker_picks(roster_size, 0);
  std::vector<std::size_t> picks;
  std::vector<std::size_t> eligible;
  std::int64_t total = 0;
  std::uint64_t covered = 0;

  auto fits = [&](std::size_t pos) {
    const auto& item = pool.items[pos];
    return !used[pos] && speaker_picks[item.speaker] < c.max_clips_per_speaker &&
           total + item.duration_s <= c.max_total_s;
  };
  auto take = [&](std::size_t pos) {
    const auto& item = pool.items[pos];
    used[pos] = true;
    ++speaker_picks[item.speaker];
    total += item.duration_s;
    covered |= item.topics;
    picks.push_back(pos);
  };

  if (c.require_topic_coverage) {
    std::vector<std::size_t> topic_visit = pool.topic_order;
    rng.shuffle(std::span(topic_visit));
    for (std::size_t topic : topic_visit) {
      const std::uint64_t bit = std::uint64_t{1} << topic;
      if (covered & bit) continue;
      eligible.clear();
      for (std::size_t pos = 0; pos < pool.items.size(); ++pos) {
        if ((pool.items[pos].topics & bit) && fits(pos)) eligible.push_back(pos);
      }
      if (eligible.empty()) return std::nullopt;
      take(eligible[rng.uniform(eligible.size())]);
    }
  }

  while (total < c.min_total_s) {
    eligible.clear();
    int fewest = std::numeric_limits<int>::max();
    for (std::size_t pos = 0; pos < pool.items.size(); ++pos) {
      if (!fits(pos)) continue;
      const int n = speaker_picks[pool.items[pos].speaker];
      if (n < fewest) {
        fewest = n;
        eligible.clear();
      }
      if (n == fewest) eligible.push_back(pos);
    }
    if (eligible.empty()) return std::nullopt;
    take(eligible[rng.uniform(eligible.size())]);
  }
  return picks;
}

Documentary finish(const ClipBank& bank, const Pool& pool, std::vector<std::size_t> picks,
                   const GenerationConstraints& c, std::uint64_t seed, Rng& rng) {
  // Seeded shuffle, then a stable sort by question index: ties keep the
  // shuffled order.
  rng.shuffle(std::span(picks));
  std::stable_sort(picks.begin(), picks.end(), [&](std::size_t a, std::size_t b) {
    return pool.items[a].question_index < pool.items[b].question_index;
  });

  Documentary doc;
  doc.seed = seed;
  doc.constraints = c;
  doc.selection.topics = pool.keys;
  doc.generated_at = std::chrono::system_clock::now();
  for (std::size_t pos : picks) {
    const Clip& clip = bank.clips()[pool.items[pos].clip];
    doc.total_duration_s += clip.duration_s;
    doc.clips.push_back(clip);
  }
  return doc;
}

[[noreturn]] void throw_infeasible(InfeasibleReason reason, const Pool& pool, const std::string& detail = {}) {
  std::string message = "no documentary satisfies the constraints: " + std::string(to_string(reason)) +
                        " (" + std::to_string(pool.items.size()) + " candidate clips)";
  if (!detail.empty()) message += "; " + detail;
  throw InfeasibleError(reason, message);
}

}  // namespace

std::vector<std::string> canonical_topics(const ClipBank& bank, const FilterSelection& selection) {
  if (selection.topics.empty()) {
    throw Error(ErrorCode::kEmptySelection, "", "selection must name at least one topic");
  }
  std::vector<std::string> keys;
  for (const auto& raw : selection.topics) {
    auto key = normalize_topic_key(raw);
    if (!key || !bank.topic_index(*key)) {
      throw Error(ErrorCode::kUnknownTopic, raw, "unknown topic \"" + raw + "\"");
    }
    keys.push_back(std::move(*key));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

void GenerationConstraints::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidConstraints, what, what); };
  if (min_total_s <= 0) bad("min_total_s must be positive");
  if (max_total_s < min_total_s) bad("max_total_s must be >= min_total_s");
  if (max_clips_per_speaker < 1) bad("max_clips_per_speaker must be >= 1");
  if (max_restarts < 1) bad("max_restarts must be >= 1");
}

std::vector<std::string> Documentary::clip_ids() const {
  std::vector<std::string> ids;
  ids.reserve(clips.size());
  for (const auto& clip : clips) ids.push_back(clip.id);
  return ids;
}

std::string_view to_string(InfeasibleReason reason) {
  switch (reason) {
    case InfeasibleReason::kNoCandidates: return "NoCandidates";
    case InfeasibleReason::kInsufficientDuration: return "InsufficientDuration";
    case InfeasibleReason::kCannotFitWindow: return "CannotFitWindow";
    case InfeasibleReason::kCoverageImpossible: return "CoverageImpossible";
    case InfeasibleReason::kRestartBudgetExhausted: return "RestartBudgetExhausted";
  }
  return "Unknown";
}

InfeasibleError::InfeasibleError(InfeasibleReason reason, const std::string& message)
    : Error(ErrorCode::kInfeasible, std::string(to_string(reason)), message), reason_(reason) {}

std::vector<std::size_t> filter_candidates(const ClipBank& bank, const FilterSelection& selection) {
  const Pool pool = build_pool(bank, selection);
  std::vector<std::size_t> out;
  out.reserve(pool.items.size());
  for (const auto& item : pool.items) out.push_back(item.clip);
  return out;
}

FeasibilityReport feasible(const ClipBank& bank, const FilterSelection& selection,
                           const GenerationConstraints& constraints, std::size_t exact_search_cap) {
  constraints.validate();
  const Pool pool = build_pool(bank, selection);
  if (pool.items.size() > exact_search_cap) {
    throw Error(ErrorCode::kPoolTooLarge, std::to_string(pool.items.size()),
                "candidate pool of " + std::to_string(pool.items.size()) + " clips exceeds exact-search cap " +
                    std::to_string(exact_search_cap));
  }
  ExactVerdict verdict = decide_exactly(pool, constraints);
  FeasibilityReport report;
  if (!verdict.witness) {
    report.reason = verdict.reason;
    return report;
  }
  auto& picks = *verdict.witness;
  std::sort(picks.begin(), picks.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = pool.items[a];
    const auto& y = pool.items[b];
    return std::tie(x.question_index, x.clip) < std::tie(y.question_index, y.clip);
  });
  report.feasible = true;
  report.witness.emplace();
  for (std::size_t pos : picks) report.witness->push_back(bank.clips()[pool.items[pos].clip].id);
  return report;
}

Documentary generate(const ClipBank& bank, const FilterSelection& selection,
                     const GenerationConstraints& constraints, std::uint64_t seed) {
  constraints.validate();
  const Pool pool = build_pool(bank, selection);
  if (auto reason = cheap_verdict(pool, constraints)) throw_infeasible(*reason, pool);

  const std::size_t roster = bank.interviewees().size();
  for (int attempt = 0; attempt < constraints.max_restarts; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    if (auto picks = assemble(pool, constraints, roster, rng)) {
      return finish(bank, pool, std::move(*picks), constraints, seed, rng);
    }
  }

  // Restarts exhausted: small pools get an exact verdict (and a witness when
  // the randomized passes were merely unlucky).
  if (pool.items.size() <= kDefaultExactSearchCap) {
    ExactVerdict verdict = decide_exactly(pool, constraints);
    if (!verdict.witness) throw_infeasible(*verdict.reason, pool);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(constraints.max_restarts)));
    return finish(bank, pool, std::move(*verdict.witness), constraints, seed, rng);
  }
  if (constraints.require_topic_coverage && reachable_topics(pool) != pool.selection_mask) {
    throw_infeasible(InfeasibleReason::kCoverageImpossible, pool);
  }
  throw_infeasible(InfeasibleReason::kRestartBudgetExhausted, pool,
                   std::to_string(constraints.max_restarts) + " randomized attempts hit dead ends");
}

}  // namespace docgen
