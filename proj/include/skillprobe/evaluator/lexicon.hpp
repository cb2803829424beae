#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "skillprobe/core/serialization.hpp"

namespace skillprobe {

// Phrase lists standing in for human judgment of "informative" help and
// "personalized" openings. Matched as whole words on normalized text.
struct MarkerLexicon {
  std::vector<std::string> instruction_markers;
  std::vector<std::string> memory_markers;
  int min_informative_words = 5;

  void validate() const;

  bool has_instruction_marker(std::string_view text) const;
  // First memory marker found in `text`, or "" when none.
  std::string memory_marker_in(std::string_view text) const;
  // At least min_informative_words words, or an instruction marker.
  bool informative(std::string_view text) const;
};

// The lexicon shipped in config/lexicon.json.
MarkerLexicon default_lexicon();

MarkerLexicon lexicon_from_json(const json& j);
json lexicon_to_json(const MarkerLexicon& lexicon);
MarkerLexicon load_lexicon(const std::string& path);

}  // namespace skillprobe
