#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "docgen/generator.hpp"

namespace docgen {

namespace {

// Appends every arrangement of `subset` whose question indices are
// non-decreasing: the product of permutations within equal-index groups.
void emit_orderings(std::vector<const Clip*> subset, std::set<std::vector<std::string>>& out) {
  std::sort(subset.begin(), subset.end(), [](const Clip* a, const Clip* b) {
    return std::tie(a->question_index, a->id) < std::tie(b->question_index, b->id);
  });
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < subset.size();) {
    std::size_t j = i;
    while (j < subset.size() && subset[j]->question_index == subset[i]->question_index) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  auto recurse = [&](auto&& self, std::size_t g) -> void {
    if (g == groups.size()) {
      std::vector<std::string> ids;
      for (const Clip* clip : subset) ids.push_back(clip->id);
      out.insert(std::move(ids));
      return;
    }
    auto first = subset.begin() + static_cast<std::ptrdiff_t>(groups[g].first);
    auto last = subset.begin() + static_cast<std::ptrdiff_t>(groups[g].second);
    auto by_id = [](const Clip* a, const Clip* b) { return a->id < b->id; };
    do {
      self(self, g + 1);
    } while (std::next_permutation(first, last, by_id));
  };
  recurse(recurse, 0);
}

}  // namespace

std::set<std::vector<std::string>> oracle_enumerate(const ClipBank& bank, const FilterSelection& selection,
                                                    const GenerationConstraints& constraints) {
  constraints.validate();
  const std::vector<std::string> keys = canonical_topics(bank, selection);
  const std::set<std::string> wanted(keys.begin(), keys.end());

  // Direct keyword scan, independent of the generator's topic masks.
  std::vector<const Clip*> pool;
  for (const Clip& clip : bank.clips()) {
    const bool hit = std::any_of(clip.keywords.begin(), clip.keywords.end(),
                                 [&](const std::string& k) { return wanted.count(k) > 0; });
    if (hit) pool.push_back(&clip);
  }
  if (pool.size() > kOraclePoolCap) {
    throw Error(ErrorCode::kPoolTooLarge, std::to_string(pool.size()),
                "oracle pool of " + std::to_string(pool.size()) + " clips exceeds cap " +
                    std::to_string(kOraclePoolCap));
  }

  std::set<std::vector<std::string>> out;
  const std::uint32_t subsets = std::uint32_t{1} << pool.size();
  for (std::uint32_t bits = 1; bits < subsets; ++bits) {
    std::vector<const Clip*> subset;
    long total = 0;
    std::map<std::string, int> per_speaker;
    std::set<std::string> covered;
    bool speakers_ok = true;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!(bits & (std::uint32_t{1} << i))) continue;
      const Clip* clip = pool[i];
      subset.push_back(clip);
      total += clip->duration_s;
      if (++per_speaker[clip->interviewee_id] > constraints.max_clips_per_speaker) speakers_ok = false;
      for (const auto& k : clip->keywords) {
        if (wanted.count(k)) covered.insert(k);
      }
    }
    if (!speakers_ok || total < constraints.min_total_s || total > constraints.max_total_s) continue;
    if (constraints.require_topic_coverage && covered != wanted) continue;
    emit_orderings(std::move(subset), out);
  }
  return out;
}

}  // namespace docgen
