#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace docgen {

inline constexpr std::size_t kMaxTopicLength = 40;

// A filter keyword. `key` is the normalized token used for every comparison
// (lowercase, whitespace runs folded to '-'); `display` keeps the spaced form
// the manifest declared, lowercased.
struct Topic {
  std::string key;
  std::string display;

  friend bool operator==(const Topic& a, const Topic& b) { return a.key == b.key; }
  friend auto operator<=>(const Topic& a, const Topic& b) { return a.key <=> b.key; }
};

// Returns nullopt when the text does not normalize to a 1-40 character token
// of [a-z0-9-].
std::optional<Topic> make_topic(std::string_view text);

// Normalized key only; same rules as make_topic.
std::optional<std::string> normalize_topic_key(std::string_view text);

}  // namespace docgen
