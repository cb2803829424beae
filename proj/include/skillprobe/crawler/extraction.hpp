#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "skillprobe/core/serialization.hpp"

namespace skillprobe {

struct CommandSet {
  // Non-empty, distinct by normalized form, in order of appearance.
  std::vector<std::string> commands;
  std::string source_text;

  bool operator==(const CommandSet&) const = default;
};

// Cue phrases introduce a clause of candidate commands; conjunctions split a
// clause into alternatives. Both are matched as whole words on normalized
// text, longer cues first.
struct ExtractionRules {
  std::vector<std::string> cue_phrases;
  std::vector<std::string> conjunctions;

  void validate() const;
};

// The rules shipped in config/extraction.json.
ExtractionRules default_extraction_rules();
ExtractionRules extraction_rules_from_json(const json& j);
json extraction_rules_to_json(const ExtractionRules& rules);
ExtractionRules load_extraction_rules(const std::string& path);

// Each clause runs from the end of a cue to the start of the next cue (or
// the end of the text) and is split at conjunctions. Pieces keep their
// original wording with surrounding punctuation trimmed; at most `max` are
// returned. Text before the first cue is ignored.
CommandSet extract_commands(std::string_view help_text, int max,
                            const ExtractionRules& rules = default_extraction_rules());

}  // namespace skillprobe
