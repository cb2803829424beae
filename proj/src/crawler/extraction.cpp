#include "skillprobe/crawler/extraction.hpp"

#include <algorithm>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

struct Token {
  std::string raw;
  std::string normalized;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string raw(text.substr(i, j - i));
      std::string norm = normalize(raw);
      // A token can normalize to several words ("one two").
      if (!norm.empty()) tokens.push_back({std::move(raw), std::move(norm)});
    }
    i = j;
  }
  return tokens;
}

bool is_trim_point(UChar32 c) { return u_ispunct(c) || u_isUWhiteSpace(c) || c < 0; }

std::string trim_punctuation(const std::string& s) {
  const auto* data = reinterpret_cast<const uint8_t*>(s.data());
  const auto len = static_cast<int32_t>(s.size());
  int32_t begin = 0;
  while (begin < len) {
    int32_t next = begin;
    UChar32 c;
    U8_NEXT(data, next, len, c);
    if (!is_trim_point(c)) break;
    begin = next;
  }
  int32_t end = len;
  while (end > begin) {
    int32_t prev = end;
    UChar32 c;
    U8_PREV(data, 0, prev, c);
    if (!is_trim_point(c)) break;
    end = prev;
  }
  return s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin));
}

// Phrase words matched against consecutive tokens. Token normal forms may
// hold several words, so compare on the joined form.
std::size_t match_at(const std::vector<Token>& tokens, std::size_t at,
                     const std::vector<std::string>& phrase_words) {
  std::string joined;
  std::size_t used = 0;
  const std::string target = [&] {
    std::string t;
    for (const auto& w : phrase_words) t += (t.empty() ? "" : " ") + w;
    return t;
  }();
  while (at + used < tokens.size() && joined.size() < target.size()) {
    joined += (joined.empty() ? "" : " ") + tokens[at + used].normalized;
    ++used;
  }
  return joined == target ? used : 0;
}

}  // namespace

void ExtractionRules::validate() const {
  if (cue_phrases.empty()) throw ValidationError("cue_phrases", "must not be empty");
  for (const auto& c : cue_phrases) {
    if (normalize(c).empty()) throw ValidationError("cue_phrases", "blank phrase");
  }
  for (const auto& c : conjunctions) {
    if (normalize(c).empty()) throw ValidationError("conjunctions", "blank phrase");
  }
}

ExtractionRules default_extraction_rules() {
  return ExtractionRules{{"you can also say", "you can say", "you can ask", "just say", "try saying",
                          "say", "try", "ask"},
                         {"or"}};
}

ExtractionRules extraction_rules_from_json(const json& j) {
  ExtractionRules rules;
  try {
    rules.cue_phrases = j.at("cue_phrases").get<std::vector<std::string>>();
    rules.conjunctions = j.value("conjunctions", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ParseError(std::string("extraction rules: ") + e.what());
  }
  rules.validate();
  return rules;
}

json extraction_rules_to_json(const ExtractionRules& rules) {
  return json{{"cue_phrases", rules.cue_phrases}, {"conjunctions", rules.conjunctions}};
}

ExtractionRules load_extraction_rules(const std::string& path) {
  return extraction_rules_from_json(read_json_file(path));
}

CommandSet extract_commands(std::string_view help_text, int max, const ExtractionRules& rules) {
  CommandSet out;
  out.source_text = std::string(help_text);
  if (max < 1) return out;

  std::vector<std::vector<std::string>> cues;
  for (const auto& c : rules.cue_phrases) cues.push_back(normalized_words(c));
  std::stable_sort(cues.begin(), cues.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<std::vector<std::string>> conjunctions;
  for (const auto& c : rules.conjunctions) conjunctions.push_back(normalized_words(c));

  const auto tokens = tokenize(help_text);
  auto cue_length = [&](std::size_t at) -> std::size_t {
    for (const auto& cue : cues) {
      if (std::size_t n = match_at(tokens, at, cue)) return n;
    }
    return 0;
  };
  auto conjunction_length = [&](std::size_t at) -> std::size_t {
    for (const auto& c : conjunctions) {
      if (std::size_t n = match_at(tokens, at, c)) return n;
    }
    return 0;
  };

  std::vector<std::string> seen;
  auto emit = [&](std::size_t from, std::size_t to) {
    std::string raw;
    for (std::size_t k = from; k < to; ++k) raw += (raw.empty() ? "" : " ") + tokens[k].raw;
    std::string piece = trim_punctuation(raw);
    const std::string key = normalize(piece);
    if (key.empty() || std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    if (static_cast<int>(out.commands.size()) >= max) return;
    seen.push_back(key);
    out.commands.push_back(std::move(piece));
  };

  std::size_t i = 0;
  while (i < tokens.size() && cue_length(i) == 0) ++i;
  while (i < tokens.size()) {
    i += cue_length(i);
    std::size_t piece_start = i;
    while (i < tokens.size()) {
      if (cue_length(i) > 0) break;
      if (std::size_t n = conjunction_length(i)) {
        emit(piece_start, i);
        i += n;
        piece_start = i;
        continue;
      }
      ++i;
    }
    emit(piece_start, i);
  }
  return out;
}

}  // namespace skillprobe
