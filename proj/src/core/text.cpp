#include "skillprobe/core/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace skillprobe {

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;

  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;

    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (u_ispunct(c)) continue;

    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    c = u_tolower(c);
    char buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

bool texts_differ(std::string_view a, std::string_view b) { return normalize(a) != normalize(b); }

std::vector<std::string> normalized_words(std::string_view text) {
  std::vector<std::string> words;
  const std::string norm = normalize(text);
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    words.emplace_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

std::size_t word_count(std::string_view text) { return normalized_words(text).size(); }

bool contains_phrase(std::string_view text, std::string_view phrase) {
  const std::string needle = normalize(phrase);
  if (needle.empty()) return false;
  const std::string haystack = " " + normalize(text) + " ";
  return haystack.find(" " + needle + " ") != std::string::npos;
}

}  // namespace skillprobe
