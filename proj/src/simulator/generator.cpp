#include "skillprobe/simulator/generator.hpp"

#include <array>
#include <cstdio>
#include <string>

#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

// splitmix64: fully specified, so generated corpora match across standard
// libraries (std::uniform_int_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }
  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& items) {
    return items[below(N)];
  }

 private:
  std::uint64_t state_;
};

constexpr std::array<const char*, 12> kAdjectives = {
    "Daily", "Magic", "Happy", "Quick", "Sleepy", "Lucky",
    "Golden", "Smart", "Tiny", "Brave", "Sunny", "Cosmic"};
constexpr std::array<const char*, 12> kNouns = {
    "Pollen", "Workout", "Story", "Trivia", "Recipe", "Weather",
    "Budget", "Planet", "Garden", "Quiz", "Commute", "Lullaby"};
constexpr std::array<const char*, 10> kCommands = {
    "tell me today's report", "start a new game",  "play the next story",
    "read me a fact",         "check my score",    "start workout",
    "what is the forecast",   "add milk to my list", "give me a hint",
    "play relaxing sounds"};
constexpr std::array<const char*, 4> kSubcategories = {"alpha", "beta", "gamma", "delta"};
constexpr std::array<const char*, 4> kResumeSentences = {
    "To continue where you last left off, say ready.",
    "Welcome back! Would you like to resume your last session?",
    "Last time you were on level three. Say continue to keep going.",
    "Shall we pick up where we stopped? Just say yes."};
constexpr std::array<const char*, 4> kGoodbyes = {
    "Goodbye!", "Okay, see you soon.", "Bye for now. Come back tomorrow!",
    "Thanks for stopping by."};

// Case and punctuation noise that normalize() erases.
std::string restyle(const std::string& text, Rng& rng) {
  std::string out = text;
  switch (rng.below(3)) {
    case 0:
      for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    case 1:
      out += "!!";
      break;
    default:
      out = "  " + out + " ...";
  }
  return out;
}

}  // namespace

std::vector<ProfileTraits> feasible_traits() {
  std::vector<ProfileTraits> traits;
  for (bool one_shot : {false, true}) {
    for (auto reprompt : {RepromptMode::none, RepromptMode::fixed, RepromptMode::reworded}) {
      if (one_shot && reprompt != RepromptMode::none) continue;
      for (auto memory : {MemoryMode::none, MemoryMode::resume_prompt}) {
        for (bool open_variety : {false, true}) {
          if (memory == MemoryMode::resume_prompt && !open_variety) continue;
          for (bool goodbye_variety : {false, true}) {
            traits.push_back({one_shot, reprompt, memory, open_variety, goodbye_variety});
          }
        }
      }
    }
  }
  return traits;
}

SimProfile generate_profile(const ProfileTraits& traits, std::uint64_t seed, std::size_t index) {
  Rng rng(seed ^ (0xA24BAED4963EE407ULL * (index + 1)));
  SimProfile p;

  char id[32];
  std::snprintf(id, sizeof id, "sim-%04zu", index);
  const std::string name =
      std::string(rng.pick(kAdjectives)) + " " + rng.pick(kNouns) + " " + std::to_string(index + 1);
  p.skill.id = id;
  p.skill.display_name = name;
  p.skill.invocation_name = normalize(name);
  p.skill.category = kAllCategories[rng.below(kAllCategories.size())];
  if (rng.chance(50)) p.skill.subcategory = rng.pick(kSubcategories);
  p.skill.review_count = static_cast<std::int64_t>(10 + rng.below(5000));
  p.skill.avg_rating = static_cast<double>(10 + rng.below(41)) / 10.0;
  p.rng_seed = rng.next() % 1000;
  p.one_shot = traits.one_shot;

  // Commands the skill understands; the help text advertises them.
  std::vector<std::string> commands;
  const std::size_t n_commands = 1 + rng.below(3);
  while (commands.size() < n_commands) {
    std::string c = rng.pick(kCommands);
    bool dup = false;
    for (const auto& existing : commands) dup = dup || existing == c;
    if (!dup) commands.push_back(c);
  }
  for (const auto& c : commands) {
    p.command_responses[normalize(c)] = "Here you go: " + c + " is done.";
  }

  if (!traits.one_shot && rng.chance(85)) {
    std::string help = "You can say " + commands[0];
    if (commands.size() > 1) help += " or " + commands[1];
    help += ".";
    if (commands.size() > 2) help += " You can also say " + commands[2] + ".";
    p.help_text = help;
  }
  p.exit_after_command = !traits.one_shot && rng.chance(15);

  // Opening prompts.
  const std::string base = traits.one_shot ? "Here is your " + name + " fact of the day."
                                           : "Welcome to " + name + ". What would you like to do?";
  const std::string alt = traits.one_shot
                              ? "Did you know? " + name + " has a brand new fact for you."
                              : "Let's set up " + name + " first. What city are you in?";
  if (traits.memory == MemoryMode::resume_prompt) {
    const std::string resume = rng.pick(kResumeSentences);
    p.welcome_variants[Stage::first_use] = base;
    if (rng.chance(50)) p.welcome_variants[Stage::post_setup] = alt;
    p.welcome_variants[Stage::post_exploration] = "Welcome to " + name + ". " + resume;
    for (const auto& marker : {"continue where you", "welcome back", "resume", "last time",
                               "pick up where"}) {
      if (contains_phrase(p.welcome_variants[Stage::post_exploration], marker)) {
        p.memory_markers.push_back(marker);
      }
    }
  } else if (traits.open_variety) {
    // Varies with setup but returns to the same opening once explored, so a
    // skill without memory shows no change between first and last run.
    p.welcome_variants[Stage::first_use] = base;
    p.welcome_variants[Stage::post_setup] = alt;
    p.welcome_variants[Stage::post_exploration] = rng.chance(50) ? base : restyle(base, rng);
  } else if (traits.reprompt != RepromptMode::fixed && rng.chance(10)) {
    // No opening prompt at all.
  } else {
    p.welcome_variants[Stage::first_use] = base;
    if (rng.chance(30)) p.welcome_variants[Stage::post_setup] = restyle(base, rng);
  }

  if (traits.goodbye_variety) {
    const std::size_t n = 2 + rng.below(3);
    const std::size_t start = rng.below(kGoodbyes.size());
    for (std::size_t i = 0; i < n && i < kGoodbyes.size(); ++i) {
      p.goodbye_variants.push_back(kGoodbyes[(start + i) % kGoodbyes.size()]);
    }
  } else {
    switch (rng.below(3)) {
      case 0:
        break;
      case 1:
        p.goodbye_variants.push_back(rng.pick(kGoodbyes));
        break;
      default: {
        const std::string g = rng.pick(kGoodbyes);
        p.goodbye_variants = {g, restyle(g, rng)};
      }
    }
  }

  p.reprompt_mode = traits.reprompt;
  p.memory_mode = traits.memory;
  const std::string explored = p.welcome_for(Stage::post_exploration);
  if (traits.reprompt == RepromptMode::fixed) {
    p.reprompt_texts = {rng.chance(50) ? explored : restyle(explored, rng)};
  } else if (traits.reprompt == RepromptMode::reworded) {
    p.reprompt_texts = {"Are you still there? You can say " + commands[0] + ".",
                        "Sorry, I didn't hear you. Try saying help to hear your options."};
    if (rng.chance(50)) p.reprompt_texts.push_back("Hello? Say stop if you are done.");
  }

  p.validate();
  return p;
}

std::vector<SimProfile> generate_profiles(std::size_t count, std::uint64_t seed) {
  const auto traits = feasible_traits();
  std::vector<SimProfile> profiles;
  profiles.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    profiles.push_back(generate_profile(traits[i % traits.size()], seed, i));
  }
  return profiles;
}

}  // namespace skillprobe
