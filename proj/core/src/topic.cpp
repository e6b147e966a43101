#include "docgen/topic.hpp"

#include <cctype>

namespace docgen {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Lowercased, trimmed, inner whitespace runs folded to a single space.
std::string fold_display(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::optional<Topic> make_topic(std::string_view text) {
  Topic topic;
  topic.display = fold_display(text);
  topic.key = topic.display;
  for (char& c : topic.key) {
    if (c == ' ') c = '-';
  }
  if (topic.key.empty() || topic.key.size() > kMaxTopicLength) return std::nullopt;
  for (char c : topic.key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok) return std::nullopt;
  }
  return topic;
}

std::optional<std::string> normalize_topic_key(std::string_view text) {
  auto topic = make_topic(text);
  if (!topic) return std::nullopt;
  return std::move(topic->key);
}

}  // namespace docgen
