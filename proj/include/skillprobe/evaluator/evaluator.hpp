#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillprobe/core/serialization.hpp"
#include "skillprobe/core/types.hpp"
#include "skillprobe/evaluator/lexicon.hpp"

namespace skillprobe {

using VerdictMap = std::map<Guideline, GuidelineVerdict>;

struct SkillEvaluation {
  std::string skill_id;
  VerdictMap verdicts;  // G1..G8
  bool one_shot = false;
  // Set when every session failed in the connector; such evaluations stay
  // out of every report denominator.
  std::optional<std::string> excluded_reason;

  bool operator==(const SkillEvaluation&) const = default;
};

// True iff every open-help-stop loop ended auto_exit right after the open
// turn. nullopt when no loop got past a connector error.
std::optional<bool> detect_one_shot(const std::vector<Session>& sessions);

// G1 open prompt, G2 informative help, G3 clean exit (facet goodbye_present).
VerdictMap eval_basic(const std::vector<Session>& sessions, const MarkerLexicon& lexicon);

// G4 over opening prompts, G5 over goodbyes, pairwise across the staged and
// plain basic loops. A loop that said nothing counts as an empty response.
VerdictMap eval_variety(const std::vector<Session>& sessions);

// G6 re-prompt after silence, G7 reworded re-prompt. `opening_prompt` is the
// fallback for a silence session whose own open turn drew nothing.
VerdictMap eval_error_handling(const Session& silence_session, std::string_view opening_prompt,
                               const MarkerLexicon& lexicon, bool one_shot = false);

// G8: a memory marker in the later opening that the first opening lacks.
GuidelineVerdict eval_memory(const Session& first_basic, const Session& memory_session,
                             const MarkerLexicon& lexicon);

// All four evaluators over one skill's sessions. Pure and deterministic.
SkillEvaluation evaluate_skill(const std::vector<Session>& sessions, const MarkerLexicon& lexicon);

// Groups by skill_id, in order of first appearance.
std::vector<SkillEvaluation> evaluate_corpus(const std::vector<Session>& corpus, const MarkerLexicon& lexicon);

void to_json(json& j, const SkillEvaluation& e);
void from_json(const json& j, SkillEvaluation& e);

// {"evaluations": [...]}
json evaluations_to_json(const std::vector<SkillEvaluation>& evaluations);
std::vector<SkillEvaluation> evaluations_from_json(const json& j);
std::vector<SkillEvaluation> load_evaluations(const std::string& path);

}  // namespace skillprobe
