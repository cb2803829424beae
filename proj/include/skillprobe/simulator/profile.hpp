#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skillprobe/core/serialization.hpp"
#include "skillprobe/core/types.hpp"

namespace skillprobe {

enum class RepromptMode { none, fixed, reworded };
enum class MemoryMode { none, resume_prompt };

std::string_view to_string(RepromptMode m);
std::string_view to_string(MemoryMode m);
RepromptMode parse_reprompt_mode(std::string_view text);
MemoryMode parse_memory_mode(std::string_view text);

// Reply for anything the simulated skill does not understand.
inline constexpr const char* kSimFallback = "I don't know that.";

// Behavior of one simulated skill. JSON schema: docs/sim_profile.md.
struct SimProfile {
  SkillDescriptor skill;
  // Opening prompt per stage. A stage without its own entry reuses the
  // closest earlier stage, or failing that the closest later one.
  std::map<Stage, std::string> welcome_variants;
  std::optional<std::string> help_text;
  // Cycled on "stop"; empty means the skill exits without a word.
  std::vector<std::string> goodbye_variants;
  // Answers the open utterance and exits.
  bool one_shot = false;
  RepromptMode reprompt_mode = RepromptMode::none;
  std::vector<std::string> reprompt_texts;
  MemoryMode memory_mode = MemoryMode::none;
  std::vector<std::string> memory_markers;
  // Keyed by normalized command.
  std::map<std::string, std::string> command_responses;
  // The skill answers a known command and then exits.
  bool exit_after_command = false;
  std::uint64_t rng_seed = 0;

  // Resolved opening prompt for a stage ("" when the skill has none).
  std::string welcome_for(Stage stage) const;

  // Goodbye variants with normalization-equal duplicates removed, in first
  // occurrence order. This is the cycle "stop" walks through.
  std::vector<std::string> distinct_goodbyes() const;

  // Throws ValidationError when the profile is malformed:
  //  - one_shot implies no help text and reprompt_mode none
  //  - reworded: at least two re-prompts, pairwise differing, none of them a
  //    restatement of the post-exploration opening prompt
  //  - fixed: reprompt_texts[0] restates the (non-empty) post-exploration
  //    opening prompt
  //  - resume_prompt: the post-exploration opening prompt carries a memory
  //    marker and the first-use opening prompt does not
  //  - memory none: the post-exploration opening prompt carries no marker
  //  - every scripted text is non-blank; command keys are normalized and
  //    do not shadow open/help/stop
  void validate() const;

  bool operator==(const SimProfile&) const = default;
};

void to_json(json& j, const SimProfile& p);
void from_json(const json& j, SimProfile& p);

// Accepts a JSON array of profiles or {"profiles": [...]}.
std::vector<SimProfile> load_profiles(const std::string& path);
json profiles_to_json(const std::vector<SimProfile>& profiles);

}  // namespace skillprobe
