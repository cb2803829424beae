#include "skillprobe/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<std::string_view, N>& names,
                const char* field) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  throw ValidationError(field, "unknown value '" + std::string(text) + "'");
}

constexpr std::array<std::string_view, 10> kCategoryNames = {
    "daily_activities",      "entertainment",
    "education_reference",   "health_fitness",
    "travel_transportation", "games_trivia_accessories",
    "food_drink",            "shopping_finance",
    "communication_social",  "kids",
};
constexpr std::array<std::string_view, 5> kProbeNames = {
    "basic_loop", "variety_run", "exploration", "silence_probe", "memory_check"};
constexpr std::array<std::string_view, 4> kStageNames = {"first_use", "post_setup",
                                                         "post_exploration", "n/a"};
constexpr std::array<std::string_view, 4> kTerminationNames = {"exited_by_stop", "auto_exit",
                                                               "timeout", "connector_error"};
constexpr std::array<std::string_view, 8> kGuidelineNames = {"G1", "G2", "G3", "G4",
                                                             "G5", "G6", "G7", "G8"};
constexpr std::array<std::string_view, 4> kFeatureGroupNames = {"basic_commands", "variety",
                                                                "error_handling", "memorizing"};
constexpr std::array<std::string_view, 4> kVerdictNames = {"compliant", "non_compliant",
                                                           "not_applicable", "inconclusive"};

// "Games, Trivia & Accessories" -> "games_trivia_accessories"
std::string category_slug(std::string_view text) {
  std::string slug;
  std::string word;
  auto flush = [&] {
    if (!word.empty() && word != "and") {
      if (!slug.empty()) slug.push_back('_');
      slug += word;
    }
    word.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return slug;
}

}  // namespace

std::string_view to_string(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

Category parse_category(std::string_view text) {
  return parse_enum<Category>(category_slug(text), kCategoryNames, "category");
}

void SkillDescriptor::validate() const {
  if (id.empty()) throw ValidationError("id", "must be non-empty");
  if (invocation_name.empty()) throw ValidationError("invocation_name", "must be non-empty");
  if (review_count < 0) throw ValidationError("review_count", "must be non-negative");
  if (avg_rating && !(*avg_rating >= 0.0 && *avg_rating <= 5.0)) {
    throw ValidationError("avg_rating", "must lie in [0, 5]");
  }
}

Utterance::Utterance(Role role, std::string text, std::optional<double> confidence,
                     std::int64_t timestamp)
    : role_(role),
      text_(std::move(text)),
      normalized_text_(normalize(text_)),
      confidence_(confidence),
      timestamp_(timestamp) {
  if (confidence_ && role_ != Role::skill) {
    throw ValidationError("confidence", "only skill utterances carry a confidence");
  }
  if (confidence_ && !(*confidence_ >= 0.0 && *confidence_ <= 1.0)) {
    throw ValidationError("confidence", "must lie in [0, 1]");
  }
}

const std::string& Turn::command_text() const {
  static const std::string kEmpty;
  return command ? command->normalized_text() : kEmpty;
}

const std::string& Turn::response_text() const {
  static const std::string kEmpty;
  return response ? response->normalized_text() : kEmpty;
}

void Turn::validate() const {
  if (command && command->role() != Role::crawler) {
    throw ValidationError("command", "must be a crawler utterance");
  }
  if (response && response->role() != Role::skill) {
    throw ValidationError("response", "must be a skill utterance");
  }
  if (wait_elapsed.count() < 0) throw ValidationError("wait_elapsed", "must be non-negative");
}

std::string_view to_string(Probe p) { return kProbeNames[static_cast<std::size_t>(p)]; }
std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Termination t) {
  return kTerminationNames[static_cast<std::size_t>(t)];
}
Probe parse_probe(std::string_view text) { return parse_enum<Probe>(text, kProbeNames, "probe"); }
Stage parse_stage(std::string_view text) { return parse_enum<Stage>(text, kStageNames, "stage"); }
Termination parse_termination(std::string_view text) {
  return parse_enum<Termination>(text, kTerminationNames, "termination");
}

bool is_open_help_stop(Probe p) {
  return p == Probe::basic_loop || p == Probe::variety_run || p == Probe::memory_check;
}

Session::Session(std::string skill_id_, Probe probe_, int run_index_, Stage stage_)
    : skill_id(std::move(skill_id_)), probe(probe_), run_index(run_index_), stage(stage_) {}

void Session::append(Turn turn) {
  turn.validate();
  turns_.push_back(std::move(turn));
}

void Session::validate() const {
  if (skill_id.empty()) throw ValidationError("skill_id", "must be non-empty");
  if (run_index < 1) throw ValidationError("run_index", "must be positive");
  for (const auto& t : turns_) t.validate();
  if (termination != Termination::connector_error && turns_.empty()) {
    throw ValidationError("turns", "empty session must end in connector_error");
  }
  if (is_open_help_stop(probe) && termination == Termination::exited_by_stop) {
    const auto& first = turns_.front().command_text();
    if (first.rfind("open", 0) != 0) {
      throw ValidationError("turns", "first command of a loop must be the open command");
    }
    if (turns_.back().command_text() != "stop") {
      throw ValidationError("turns", "loop exited by stop must end with the stop command");
    }
  }
}

std::string_view to_string(Guideline g) { return kGuidelineNames[static_cast<std::size_t>(g)]; }
std::string_view to_string(FeatureGroup f) {
  return kFeatureGroupNames[static_cast<std::size_t>(f)];
}
Guideline parse_guideline(std::string_view text) {
  return parse_enum<Guideline>(text, kGuidelineNames, "guideline");
}
FeatureGroup parse_feature_group(std::string_view text) {
  return parse_enum<FeatureGroup>(text, kFeatureGroupNames, "feature_group");
}
std::string_view to_string(Verdict v) { return kVerdictNames[static_cast<std::size_t>(v)]; }
Verdict parse_verdict(std::string_view text) {
  return parse_enum<Verdict>(text, kVerdictNames, "verdict");
}

void GuidelineVerdict::validate() const {
  if ((verdict == Verdict::compliant || verdict == Verdict::non_compliant) && evidence.empty()) {
    throw ValidationError("evidence", std::string(to_string(guideline)) + " verdict " +
                                          std::string(to_string(verdict)) +
                                          " requires evidence");
  }
}

}  // namespace skillprobe
