#include "skillprobe/simulator/simulator.hpp"

#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

bool is_open_command(const std::string& normalized) {
  return normalized == "open" || normalized.rfind("open ", 0) == 0;
}

}  // namespace

Stage SimState::stage() const {
  if (fully_explored || !explored_commands.empty()) return Stage::post_exploration;
  if (setup_done) return Stage::post_setup;
  return Stage::first_use;
}

SimState initial_state(const SimProfile& profile) {
  SimState state;
  state.goodbye_counter = profile.rng_seed;
  return state;
}

std::pair<ConnectorEvent, SimState> step(const SimProfile& profile, const SimState& state,
                                         const SimInput& input) {
  SimState next = state;

  switch (input.kind) {
    case SimInput::Kind::stage_signal:
      if (input.stage == Stage::post_setup || input.stage == Stage::post_exploration) {
        next.setup_done = true;
      }
      if (input.stage == Stage::post_exploration) next.fully_explored = true;
      return {ConnectorEvent::silence(), next};
    case SimInput::Kind::hang_up:
      next.session_open = false;
      return {ConnectorEvent::silence(), next};
    case SimInput::Kind::silence:
      if (!state.session_open) return {ConnectorEvent::closed(), next};
      switch (profile.reprompt_mode) {
        case RepromptMode::none:
          next.session_open = false;
          return {ConnectorEvent::closed(), next};
        case RepromptMode::fixed:
          return {ConnectorEvent::response(profile.reprompt_texts.front()), next};
        case RepromptMode::reworded: {
          const auto& texts = profile.reprompt_texts;
          ++next.reprompt_counter;
          return {ConnectorEvent::response(texts[state.reprompt_counter % texts.size()]), next};
        }
      }
      break;
    case SimInput::Kind::speech:
      break;
  }

  const std::string said = normalize(input.text);

  if (!state.session_open) {
    if (!is_open_command(said)) return {ConnectorEvent::closed(), next};
    const std::string welcome = profile.welcome_for(state.stage());
    next.first_use = false;
    next.session_open = !profile.one_shot;
    if (welcome.empty()) {
      return {profile.one_shot ? ConnectorEvent::closed() : ConnectorEvent::silence(), next};
    }
    return {ConnectorEvent::response(welcome), next};
  }

  if (said == "stop") {
    next.session_open = false;
    const auto goodbyes = profile.distinct_goodbyes();
    if (goodbyes.empty()) return {ConnectorEvent::closed(), next};
    ++next.goodbye_counter;
    return {ConnectorEvent::closed(goodbyes[state.goodbye_counter % goodbyes.size()]), next};
  }
  if (said == "help") {
    return {ConnectorEvent::response(profile.help_text.value_or(kSimFallback)), next};
  }
  if (is_open_command(said)) {
    return {ConnectorEvent::response(profile.welcome_for(state.stage())), next};
  }
  if (auto it = profile.command_responses.find(said); it != profile.command_responses.end()) {
    next.explored_commands.insert(said);
    if (profile.exit_after_command) {
      next.session_open = false;
      return {ConnectorEvent::closed(it->second), next};
    }
    return {ConnectorEvent::response(it->second), next};
  }
  return {ConnectorEvent::response(kSimFallback), next};
}

GroundTruth ground_truth(const SimProfile& profile, const MarkerLexicon& lexicon) {
  profile.validate();
  GroundTruth truth;
  auto& v = truth.verdicts;
  auto verdict_if = [](bool ok) { return ok ? Verdict::compliant : Verdict::non_compliant; };

  const std::string first = profile.welcome_for(Stage::first_use);
  const std::string setup = profile.welcome_for(Stage::post_setup);
  const std::string explored = profile.welcome_for(Stage::post_exploration);

  v[Guideline::G1] = verdict_if(!profile.welcome_variants.empty());

  v[Guideline::G2] = verdict_if(!profile.one_shot && profile.help_text &&
                                lexicon.informative(*profile.help_text));

  v[Guideline::G3] = Verdict::compliant;
  truth.goodbye_present = !profile.one_shot && !profile.goodbye_variants.empty();

  v[Guideline::G4] = verdict_if(texts_differ(first, setup) || texts_differ(first, explored) ||
                                texts_differ(setup, explored));

  v[Guideline::G5] = verdict_if(!profile.one_shot && profile.distinct_goodbyes().size() >= 2);

  if (profile.one_shot) {
    v[Guideline::G6] = Verdict::not_applicable;
  } else {
    v[Guideline::G6] = verdict_if(profile.reprompt_mode != RepromptMode::none);
  }
  v[Guideline::G7] = verdict_if(profile.reprompt_mode == RepromptMode::reworded);

  if (profile.memory_mode == MemoryMode::resume_prompt) {
    v[Guideline::G8] = Verdict::compliant;
  } else {
    // A changed opening with no memory cue is exactly the case the
    // classifier refuses to decide.
    v[Guideline::G8] = texts_differ(first, explored) ? Verdict::inconclusive : Verdict::non_compliant;
  }
  return truth;
}

}  // namespace skillprobe
