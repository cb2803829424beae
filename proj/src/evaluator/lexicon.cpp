#include "skillprobe/evaluator/lexicon.hpp"

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"

namespace skillprobe {

void MarkerLexicon::validate() const {
  if (instruction_markers.empty()) throw ValidationError("instruction_markers", "must be non-empty");
  if (memory_markers.empty()) throw ValidationError("memory_markers", "must be non-empty");
  for (const auto* list : {&instruction_markers, &memory_markers}) {
    for (const auto& phrase : *list) {
      if (normalize(phrase).empty()) throw ValidationError("lexicon", "blank phrase");
    }
  }
  if (min_informative_words < 1) {
    throw ValidationError("min_informative_words", "must be positive");
  }
}

bool MarkerLexicon::has_instruction_marker(std::string_view text) const {
  for (const auto& phrase : instruction_markers) {
    if (contains_phrase(text, phrase)) return true;
  }
  return false;
}

std::string MarkerLexicon::memory_marker_in(std::string_view text) const {
  for (const auto& phrase : memory_markers) {
    if (contains_phrase(text, phrase)) return phrase;
  }
  return {};
}

bool MarkerLexicon::informative(std::string_view text) const {
  return word_count(text) >= static_cast<std::size_t>(min_informative_words) ||
         has_instruction_marker(text);
}

MarkerLexicon default_lexicon() {
  MarkerLexicon lexicon;
  lexicon.instruction_markers = {"you can say", "you can also say", "try saying", "just say",
                                 "you can ask", "say yes", "say no", "for example"};
  lexicon.memory_markers = {"welcome back", "continue where you", "where you left off",
                            "resume", "last time", "pick up where"};
  lexicon.min_informative_words = 5;
  return lexicon;
}

MarkerLexicon lexicon_from_json(const json& j) {
  MarkerLexicon lexicon = default_lexicon();
  try {
    if (j.contains("instruction_markers")) {
      lexicon.instruction_markers = j.at("instruction_markers").get<std::vector<std::string>>();
    }
    if (j.contains("memory_markers")) {
      lexicon.memory_markers = j.at("memory_markers").get<std::vector<std::string>>();
    }
    lexicon.min_informative_words = j.value("min_informative_words", 5);
  } catch (const json::exception& e) {
    throw ParseError(std::string("lexicon: ") + e.what());
  }
  lexicon.validate();
  return lexicon;
}

json lexicon_to_json(const MarkerLexicon& lexicon) {
  return json{{"instruction_markers", lexicon.instruction_markers},
              {"memory_markers", lexicon.memory_markers},
              {"min_informative_words", lexicon.min_informative_words}};
}

MarkerLexicon load_lexicon(const std::string& path) {
  return lexicon_from_json(read_json_file(path));
}

}  // namespace skillprobe
