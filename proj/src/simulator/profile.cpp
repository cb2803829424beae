#include "skillprobe/simulator/profile.hpp"

#include <array>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

constexpr std::array<Stage, 3> kStageOrder = {Stage::first_use, Stage::post_setup,
                                              Stage::post_exploration};

bool carries_marker(const std::string& text, const std::vector<std::string>& markers) {
  for (const auto& m : markers) {
    if (contains_phrase(text, m)) return true;
  }
  return false;
}

void require_text(const std::string& text, const char* field) {
  if (normalize(text).empty()) throw ValidationError(field, "blank text");
}

}  // namespace

std::string_view to_string(RepromptMode m) {
  switch (m) {
    case RepromptMode::none:
      return "none";
    case RepromptMode::fixed:
      return "fixed";
    case RepromptMode::reworded:
      break;
  }
  return "reworded";
}

std::string_view to_string(MemoryMode m) {
  return m == MemoryMode::none ? "none" : "resume_prompt";
}

RepromptMode parse_reprompt_mode(std::string_view text) {
  if (text == "none") return RepromptMode::none;
  if (text == "fixed") return RepromptMode::fixed;
  if (text == "reworded") return RepromptMode::reworded;
  throw ValidationError("reprompt_mode", "unknown value '" + std::string(text) + "'");
}

MemoryMode parse_memory_mode(std::string_view text) {
  if (text == "none") return MemoryMode::none;
  if (text == "resume_prompt") return MemoryMode::resume_prompt;
  throw ValidationError("memory_mode", "unknown value '" + std::string(text) + "'");
}

std::string SimProfile::welcome_for(Stage stage) const {
  if (stage == Stage::not_applicable) stage = Stage::post_exploration;
  const auto target = static_cast<int>(stage);
  for (int s = target; s >= 0; --s) {
    if (auto it = welcome_variants.find(kStageOrder[static_cast<std::size_t>(s)]);
        it != welcome_variants.end()) {
      return it->second;
    }
  }
  for (int s = target + 1; s < static_cast<int>(kStageOrder.size()); ++s) {
    if (auto it = welcome_variants.find(kStageOrder[static_cast<std::size_t>(s)]);
        it != welcome_variants.end()) {
      return it->second;
    }
  }
  return {};
}

std::vector<std::string> SimProfile::distinct_goodbyes() const {
  std::vector<std::string> out;
  for (const auto& g : goodbye_variants) {
    bool seen = false;
    for (const auto& o : out) seen = seen || !texts_differ(o, g);
    if (!seen) out.push_back(g);
  }
  return out;
}

void SimProfile::validate() const {
  skill.validate();
  for (const auto& [stage, text] : welcome_variants) {
    if (stage == Stage::not_applicable) {
      throw ValidationError("welcome_variants", "stage n/a has no opening prompt");
    }
    require_text(text, "welcome_variants");
  }
  if (help_text) require_text(*help_text, "help_text");
  for (const auto& g : goodbye_variants) require_text(g, "goodbye_variants");
  for (const auto& r : reprompt_texts) require_text(r, "reprompt_texts");
  for (const auto& [command, answer] : command_responses) {
    if (command.empty() || normalize(command) != command) {
      throw ValidationError("command_responses", "key '" + command + "' is not normalized");
    }
    if (command == "help" || command == "stop" || command.rfind("open", 0) == 0) {
      throw ValidationError("command_responses", "key '" + command + "' shadows a basic command");
    }
    require_text(answer, "command_responses");
  }

  if (one_shot && help_text) throw ValidationError("help_text", "one-shot skills have no help");
  if (one_shot && reprompt_mode != RepromptMode::none) {
    throw ValidationError("reprompt_mode", "one-shot skills never re-prompt");
  }

  const std::string explored_welcome = welcome_for(Stage::post_exploration);
  switch (reprompt_mode) {
    case RepromptMode::none:
      break;
    case RepromptMode::fixed:
      if (reprompt_texts.empty()) throw ValidationError("reprompt_texts", "fixed mode needs a text");
      if (explored_welcome.empty() || texts_differ(reprompt_texts.front(), explored_welcome)) {
        throw ValidationError("reprompt_texts",
                              "a fixed re-prompt repeats the post-exploration opening prompt");
      }
      break;
    case RepromptMode::reworded:
      if (reprompt_texts.size() < 2) {
        throw ValidationError("reprompt_texts", "reworded mode needs at least two texts");
      }
      for (std::size_t i = 0; i < reprompt_texts.size(); ++i) {
        if (!texts_differ(reprompt_texts[i], explored_welcome)) {
          throw ValidationError("reprompt_texts", "a reworded re-prompt repeats the opening prompt");
        }
        for (std::size_t j = i + 1; j < reprompt_texts.size(); ++j) {
          if (!texts_differ(reprompt_texts[i], reprompt_texts[j])) {
            throw ValidationError("reprompt_texts", "reworded re-prompts must pairwise differ");
          }
        }
      }
      break;
  }

  if (memory_mode == MemoryMode::resume_prompt) {
    if (memory_markers.empty()) throw ValidationError("memory_markers", "resume_prompt needs markers");
    if (!carries_marker(explored_welcome, memory_markers)) {
      throw ValidationError("welcome_variants",
                            "resume_prompt needs a memory marker in the post-exploration opening");
    }
    if (carries_marker(welcome_for(Stage::first_use), memory_markers)) {
      throw ValidationError("welcome_variants", "first-use opening must not carry a memory marker");
    }
  } else if (carries_marker(explored_welcome, memory_markers)) {
    throw ValidationError("welcome_variants", "memory marker in a skill without memory");
  }
}

void to_json(json& j, const SimProfile& p) {
  json welcomes = json::object();
  for (const auto& [stage, text] : p.welcome_variants) welcomes[std::string(to_string(stage))] = text;
  j = json{{"skill", p.skill},
           {"welcome_variants", welcomes},
           {"help_text", p.help_text ? json(*p.help_text) : json(nullptr)},
           {"goodbye_variants", p.goodbye_variants},
           {"one_shot", p.one_shot},
           {"reprompt_mode", std::string(to_string(p.reprompt_mode))},
           {"reprompt_texts", p.reprompt_texts},
           {"memory_mode", std::string(to_string(p.memory_mode))},
           {"memory_markers", p.memory_markers},
           {"command_responses", p.command_responses},
           {"exit_after_command", p.exit_after_command},
           {"rng_seed", p.rng_seed}};
}

void from_json(const json& j, SimProfile& p) {
  p = SimProfile{};
  p.skill = j.at("skill").get<SkillDescriptor>();
  if (j.contains("welcome_variants")) {
    for (const auto& [stage, text] : j.at("welcome_variants").items()) {
      p.welcome_variants[parse_stage(stage)] = text.get<std::string>();
    }
  }
  if (j.contains("help_text") && !j.at("help_text").is_null()) {
    p.help_text = j.at("help_text").get<std::string>();
  }
  p.goodbye_variants = j.value("goodbye_variants", std::vector<std::string>{});
  p.one_shot = j.value("one_shot", false);
  p.reprompt_mode = parse_reprompt_mode(j.value("reprompt_mode", std::string("none")));
  p.reprompt_texts = j.value("reprompt_texts", std::vector<std::string>{});
  p.memory_mode = parse_memory_mode(j.value("memory_mode", std::string("none")));
  p.memory_markers = j.value("memory_markers", std::vector<std::string>{});
  p.command_responses = j.value("command_responses", std::map<std::string, std::string>{});
  p.exit_after_command = j.value("exit_after_command", false);
  p.rng_seed = j.value("rng_seed", std::uint64_t{0});
  p.validate();
}

std::vector<SimProfile> load_profiles(const std::string& path) {
  json doc = read_json_file(path);
  if (doc.is_object() && doc.contains("profiles")) doc = doc.at("profiles");
  if (!doc.is_array()) throw ParseError(path + ": expected an array of profiles");
  std::vector<SimProfile> profiles;
  std::size_t row = 0;
  for (const auto& item : doc) {
    ++row;
    try {
      profiles.push_back(item.get<SimProfile>());
    } catch (const json::exception& e) {
      throw ParseError(path + ": " + e.what(), row);
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), path + " profile " + std::to_string(row) + ": " + e.what());
    }
  }
  return profiles;
}

json profiles_to_json(const std::vector<SimProfile>& profiles) { return json(profiles); }

}  // namespace skillprobe
