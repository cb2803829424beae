#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "skillprobe/connectors/connector.hpp"
#include "skillprobe/evaluator/lexicon.hpp"
#include "skillprobe/simulator/profile.hpp"

namespace skillprobe {

struct SimState {
  bool first_use = true;
  bool setup_done = false;
  // Set by the harness's post-exploration stage signal.
  bool fully_explored = false;
  std::set<std::string> explored_commands;
  bool session_open = false;
  std::uint64_t goodbye_counter = 0;
  std::uint64_t reprompt_counter = 0;

  // Stage that selects the opening prompt.
  Stage stage() const;

  bool operator==(const SimState&) const = default;
};

// Goodbye cycling starts at rng_seed.
SimState initial_state(const SimProfile& profile);

struct SimInput {
  enum class Kind { speech, silence, stage_signal, hang_up };
  Kind kind = Kind::silence;
  std::string text;
  Stage stage = Stage::not_applicable;

  static SimInput speech(std::string text) { return {Kind::speech, std::move(text), {}}; }
  static SimInput silence() { return {}; }
  static SimInput signal(Stage s) { return {Kind::stage_signal, {}, s}; }
  static SimInput hang_up() { return {Kind::hang_up, {}, {}}; }
};

// The simulated skill's total transition function. Deterministic in
// (profile, state, input):
//  - "open ..." on a closed session: the stage's opening prompt (silence when
//    there is none); a one-shot skill closes again immediately
//  - "stop": the next goodbye variant, then closed
//  - "help": help_text, or the fallback
//  - a known command: its scripted answer, remembered as explored
//  - SILENCE: the re-prompt for reprompt_mode, or closed when it is none
//  - anything else: the fallback
// Stage signals and hang-ups change state only and yield silence.
std::pair<ConnectorEvent, SimState> step(const SimProfile& profile, const SimState& state,
                                         const SimInput& input);

// Expected G1..G8 verdicts derived directly from a valid profile, assuming
// the default elicitation plan (three staged runs, two silences).
struct GroundTruth {
  std::map<Guideline, Verdict> verdicts;
  bool goodbye_present = false;
};

// Throws ValidationError for a malformed profile.
GroundTruth ground_truth(const SimProfile& profile, const MarkerLexicon& lexicon = default_lexicon());

}  // namespace skillprobe
