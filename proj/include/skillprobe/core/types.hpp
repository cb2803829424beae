#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillprobe {

using Millis = std::chrono::milliseconds;

// Skill store categories used for roster selection and per-category reporting.
enum class Category {
  daily_activities,
  entertainment,
  education_reference,
  health_fitness,
  travel_transportation,
  games_trivia_accessories,
  food_drink,
  shopping_finance,
  communication_social,
  kids,
};

inline constexpr std::array<Category, 10> kAllCategories = {
    Category::daily_activities,      Category::entertainment,
    Category::education_reference,   Category::health_fitness,
    Category::travel_transportation, Category::games_trivia_accessories,
    Category::food_drink,            Category::shopping_finance,
    Category::communication_social,  Category::kids,
};

std::string_view to_string(Category c);
// Accepts the snake_case id or the store display name ("Food & Drink",
// "Shopping and Finance"). Throws ValidationError on anything else.
Category parse_category(std::string_view text);

struct SkillDescriptor {
  std::string id;
  std::string display_name;
  std::string invocation_name;
  Category category = Category::daily_activities;
  std::optional<std::string> subcategory;
  std::int64_t review_count = 0;
  std::optional<double> avg_rating;
  // Present when the skill is excluded from crawling and from every
  // aggregation denominator.
  std::optional<std::string> excluded_reason;

  bool excluded() const { return excluded_reason.has_value(); }

  // Throws ValidationError naming the offending field.
  void validate() const;

  bool operator==(const SkillDescriptor&) const = default;
};

enum class Role { crawler, skill };

// A transcribed utterance. Immutable: normalized_text always equals
// normalize(text).
class Utterance {
 public:
  Utterance(Role role, std::string text, std::optional<double> confidence = std::nullopt,
            std::int64_t timestamp = 0);

  Role role() const { return role_; }
  const std::string& text() const { return text_; }
  const std::string& normalized_text() const { return normalized_text_; }
  std::optional<double> confidence() const { return confidence_; }
  // Milliseconds since the start of the session.
  std::int64_t timestamp() const { return timestamp_; }

  bool operator==(const Utterance&) const = default;

 private:
  Role role_;
  std::string text_;
  std::string normalized_text_;
  std::optional<double> confidence_;
  std::int64_t timestamp_;
};

// One exchange. An empty command is the SILENCE marker; an empty response is
// NO_RESPONSE.
struct Turn {
  std::optional<Utterance> command;
  std::optional<Utterance> response;
  Millis wait_elapsed{0};

  bool silence() const { return !command.has_value(); }
  // Normalized command text, "" for SILENCE.
  const std::string& command_text() const;
  // Normalized response text, "" for NO_RESPONSE.
  const std::string& response_text() const;

  void validate() const;

  bool operator==(const Turn&) const = default;
};

enum class Probe { basic_loop, variety_run, exploration, silence_probe, memory_check };
enum class Stage { first_use, post_setup, post_exploration, not_applicable };
enum class Termination { exited_by_stop, auto_exit, timeout, connector_error };

std::string_view to_string(Probe p);
std::string_view to_string(Stage s);
std::string_view to_string(Termination t);
Probe parse_probe(std::string_view text);
Stage parse_stage(std::string_view text);
Termination parse_termination(std::string_view text);

// open-help-stop style loops: the staged variety runs, stand-alone basic
// loops and the memory check.
bool is_open_help_stop(Probe p);

// One recorded conversation. Turns are append-only.
class Session {
 public:
  Session() = default;
  Session(std::string skill_id, Probe probe, int run_index, Stage stage);

  std::string skill_id;
  Probe probe = Probe::basic_loop;
  int run_index = 1;
  Stage stage = Stage::not_applicable;
  Termination termination = Termination::connector_error;
  // Commands the protocol called for but never delivered because the skill
  // had already closed the session.
  std::vector<std::string> unsent_commands;

  const std::vector<Turn>& turns() const { return turns_; }
  void append(Turn turn);

  // Throws ValidationError when a structural invariant does not hold.
  void validate() const;

  bool operator==(const Session&) const = default;

 private:
  std::vector<Turn> turns_;
};

enum class Guideline { G1, G2, G3, G4, G5, G6, G7, G8 };
enum class FeatureGroup { basic_commands, variety, error_handling, memorizing };

inline constexpr std::array<Guideline, 8> kAllGuidelines = {
    Guideline::G1, Guideline::G2, Guideline::G3, Guideline::G4,
    Guideline::G5, Guideline::G6, Guideline::G7, Guideline::G8,
};
inline constexpr std::array<FeatureGroup, 4> kAllFeatureGroups = {
    FeatureGroup::basic_commands, FeatureGroup::variety, FeatureGroup::error_handling,
    FeatureGroup::memorizing};

constexpr FeatureGroup feature_group(Guideline g) {
  switch (g) {
    case Guideline::G1:
    case Guideline::G2:
    case Guideline::G3:
      return FeatureGroup::basic_commands;
    case Guideline::G4:
    case Guideline::G5:
      return FeatureGroup::variety;
    case Guideline::G6:
    case Guideline::G7:
      return FeatureGroup::error_handling;
    case Guideline::G8:
      break;
  }
  return FeatureGroup::memorizing;
}

constexpr int guideline_number(Guideline g) { return static_cast<int>(g) + 1; }

std::string_view to_string(Guideline g);
std::string_view to_string(FeatureGroup f);
Guideline parse_guideline(std::string_view text);
FeatureGroup parse_feature_group(std::string_view text);

enum class Verdict { compliant, non_compliant, not_applicable, inconclusive };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

// Sessions are unique per skill by (probe, run_index).
struct SessionRef {
  Probe probe = Probe::basic_loop;
  int run_index = 1;

  auto operator<=>(const SessionRef&) const = default;
};

struct Evidence {
  SessionRef session;
  int turn = 0;

  auto operator<=>(const Evidence&) const = default;
};

struct GuidelineVerdict {
  Guideline guideline = Guideline::G1;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, bool> facets;
  std::vector<Evidence> evidence;
  std::string note;

  // compliant / non_compliant verdicts must cite evidence.
  void validate() const;

  bool operator==(const GuidelineVerdict&) const = default;
};

}  // namespace skillprobe
