#include <gtest/gtest.h>

#include <random>
#include <set>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"
#include "skillprobe/simulator/generator.hpp"
#include "skillprobe/simulator/simulator.hpp"
#include "test_support.hpp"

namespace skillprobe {
namespace {

using testing::categories_game;
using testing::full_featured;
using testing::one_shot_fact;

struct Trace {
  std::vector<ConnectorEvent> events;
  SimState state;
};

Trace drive(const SimProfile& p, const std::vector<SimInput>& inputs) {
  Trace t{{}, initial_state(p)};
  for (const auto& in : inputs) {
    auto [event, next] = step(p, t.state, in);
    t.events.push_back(event);
    t.state = next;
  }
  return t;
}

SimInput say(const std::string& s) { return SimInput::speech(s); }

std::string text_of(const ConnectorEvent& e) {
  if (e.kind == EventKind::response) return *e.text;
  return e.detail.value_or("");
}

TEST(Profile, ValidationCatchesBrokenProfiles) {
  EXPECT_NO_THROW(full_featured().validate());
  EXPECT_NO_THROW(one_shot_fact().validate());
  EXPECT_NO_THROW(categories_game().validate());

  auto p = one_shot_fact();
  p.help_text = "You can say more.";
  EXPECT_THROW(p.validate(), ValidationError);

  p = full_featured();
  p.reprompt_texts = {"Still there?", "STILL THERE"};
  EXPECT_THROW(p.validate(), ValidationError);

  p = full_featured();
  p.welcome_variants[Stage::post_exploration] = "Hello once more.";
  EXPECT_THROW(p.validate(), ValidationError);

  p = categories_game();
  p.reprompt_texts = {"Something else entirely."};
  EXPECT_THROW(p.validate(), ValidationError);

  p = full_featured();
  p.command_responses["Play It"] = "x";
  EXPECT_THROW(p.validate(), ValidationError);

  p = full_featured();
  p.goodbye_variants.push_back(" ... ");
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Profile, WelcomeFallsBackToNearestStage) {
  SimProfile p = categories_game();
  p.welcome_variants = {{Stage::post_setup, "B"}};
  p.reprompt_mode = RepromptMode::none;
  p.reprompt_texts.clear();
  EXPECT_EQ(p.welcome_for(Stage::first_use), "B");
  EXPECT_EQ(p.welcome_for(Stage::post_exploration), "B");
  p.welcome_variants[Stage::first_use] = "A";
  EXPECT_EQ(p.welcome_for(Stage::post_setup), "B");
  EXPECT_EQ(p.welcome_for(Stage::post_exploration), "B");
}

TEST(Profile, JsonRoundTrip) {
  for (const auto& p : {full_featured(), one_shot_fact(), categories_game()}) {
    const json j = p;
    EXPECT_EQ(j.get<SimProfile>(), p);
  }
  for (const auto& p : generate_profiles(48, 3)) {
    const json j = p;
    ASSERT_EQ(j.get<SimProfile>(), p);
  }
}

TEST(Step, MemoryProfileResumesAfterExploration) {
  SimProfile p = full_featured();
  p.welcome_variants[Stage::post_exploration] = "To continue where you last left off, say ready.";
  p.memory_markers = {"continue where you"};
  p.reprompt_texts = {"You can say ready to go on.", "Still there? Say ready."};
  const auto t = drive(p, {say("open story time"), say("play a story"), say("stop"), say("open story time")});
  EXPECT_FALSE(t.state.explored_commands.empty());
  EXPECT_TRUE(contains_phrase(text_of(t.events.back()), "continue where you last left off"));
}

TEST(Step, StopAlwaysCloses) {
  for (const auto& p : {full_featured(), categories_game()}) {
    const auto t = drive(p, {say("open x"), say("stop")});
    EXPECT_EQ(t.events.back().kind, EventKind::closed);
    EXPECT_FALSE(t.state.session_open);
  }
}

TEST(Step, FixedRepromptRepeats) {
  const auto t = drive(categories_game(), {say("open x"), SimInput::silence(), SimInput::silence()});
  ASSERT_EQ(t.events[1].kind, EventKind::response);
  EXPECT_EQ(*t.events[1].text, *t.events[2].text);
}

TEST(Step, RewordedRepromptCycles) {
  const auto t = drive(full_featured(), {say("open x"), SimInput::silence(), SimInput::silence(), SimInput::silence()});
  EXPECT_TRUE(texts_differ(*t.events[1].text, *t.events[2].text));
  EXPECT_EQ(*t.events[1].text, *t.events[3].text);
}

TEST(Step, NoRepromptCloses) {
  auto p = full_featured();
  p.reprompt_mode = RepromptMode::none;
  p.reprompt_texts.clear();
  const auto t = drive(p, {say("open x"), SimInput::silence()});
  EXPECT_EQ(t.events.back().kind, EventKind::closed);
}

TEST(Step, OneShotAnswersAndCloses) {
  const auto t = drive(one_shot_fact(), {say("open cat facts")});
  EXPECT_EQ(t.events[0].kind, EventKind::response);
  EXPECT_FALSE(t.state.session_open);
}

TEST(Step, HelpFallbackAndUnknownCommands) {
  auto p = full_featured();
  auto t = drive(p, {say("open x"), say("Help!"), say("dance for me")});
  EXPECT_EQ(*t.events[1].text, *p.help_text);
  EXPECT_EQ(*t.events[2].text, kSimFallback);
  p.help_text.reset();
  t = drive(p, {say("open x"), say("help")});
  EXPECT_EQ(*t.events[1].text, kSimFallback);
}

TEST(Step, StagesFollowSignalsAndExploration) {
  const auto p = full_featured();
  auto t = drive(p, {say("open x"), say("stop"), SimInput::signal(Stage::post_setup), say("open x")});
  EXPECT_EQ(*t.events[3].text, p.welcome_variants.at(Stage::post_setup));
  t = drive(p, {SimInput::signal(Stage::post_exploration), say("open x")});
  EXPECT_EQ(*t.events[1].text, p.welcome_variants.at(Stage::post_exploration));
}

TEST(Step, GoodbyesCycleFromSeed) {
  auto p = full_featured();
  p.rng_seed = 4;
  std::vector<SimInput> inputs;
  for (int i = 0; i < 4; ++i) {
    inputs.push_back(say("open x"));
    inputs.push_back(say("stop"));
  }
  const auto t = drive(p, inputs);
  const auto goodbyes = p.distinct_goodbyes();
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(text_of(t.events[static_cast<std::size_t>(2 * i + 1)]), goodbyes[(4 + i) % goodbyes.size()]);
  }
}

TEST(Step, NeverEmitsWithoutInput) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> words = {"open x", "help", "stop", "play a story", "xyz"};
  for (const auto& p : generate_profiles(48, 9)) {
    std::vector<SimInput> inputs;
    for (int i = 0; i < 30; ++i) {
      const auto r = rng() % 7;
      if (r < 5) inputs.push_back(say(words[r]));
      else if (r == 5) inputs.push_back(SimInput::silence());
      else inputs.push_back(SimInput::signal(Stage::post_setup));
    }
    const auto a = drive(p, inputs);
    const auto b = drive(p, inputs);
    ASSERT_EQ(a.events.size(), inputs.size());
    ASSERT_EQ(a.events, b.events);
    ASSERT_EQ(a.state, b.state);
    for (const auto& e : a.events) ASSERT_EQ(e.text.has_value(), e.kind == EventKind::response);
  }
}

TEST(GroundTruth, FullyFeaturedIsCompliantEverywhere) {
  const auto truth = ground_truth(full_featured());
  for (Guideline g : kAllGuidelines) EXPECT_EQ(truth.verdicts.at(g), Verdict::compliant) << to_string(g);
  EXPECT_TRUE(truth.goodbye_present);
}

TEST(GroundTruth, OneShotFact) {
  const auto truth = ground_truth(one_shot_fact());
  const std::map<Guideline, Verdict> expected = {
      {Guideline::G1, Verdict::compliant},     {Guideline::G2, Verdict::non_compliant},
      {Guideline::G3, Verdict::compliant},     {Guideline::G4, Verdict::non_compliant},
      {Guideline::G5, Verdict::non_compliant}, {Guideline::G6, Verdict::not_applicable},
      {Guideline::G7, Verdict::non_compliant}, {Guideline::G8, Verdict::non_compliant}};
  EXPECT_EQ(truth.verdicts, expected);
  EXPECT_FALSE(truth.goodbye_present);
}

TEST(GroundTruth, FixedReprompt) {
  const auto truth = ground_truth(categories_game());
  EXPECT_EQ(truth.verdicts.at(Guideline::G6), Verdict::compliant);
  EXPECT_EQ(truth.verdicts.at(Guideline::G7), Verdict::non_compliant);
  EXPECT_EQ(truth.verdicts.at(Guideline::G8), Verdict::non_compliant);
}

TEST(GroundTruth, RejectsMalformedProfile) {
  auto p = one_shot_fact();
  p.reprompt_mode = RepromptMode::fixed;
  EXPECT_THROW(ground_truth(p), ValidationError);
}

TEST(Generator, CoversEveryFeasibleCombination) {
  const auto traits = feasible_traits();
  EXPECT_EQ(traits.size(), 24u);
  std::set<std::pair<RepromptMode, MemoryMode>> reprompt_memory;
  for (const auto& t : traits) reprompt_memory.insert({t.reprompt, t.memory});
  EXPECT_EQ(reprompt_memory.size(), 6u);

  const auto profiles = generate_profiles(240, 21);
  std::set<std::string> ids;
  std::set<std::string> invocations;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    const auto& t = traits[i % traits.size()];
    ids.insert(p.skill.id);
    invocations.insert(normalize(p.skill.invocation_name));
    const auto truth = ground_truth(p);
    EXPECT_EQ(p.one_shot, t.one_shot);
    EXPECT_EQ(truth.verdicts.at(Guideline::G4) == Verdict::compliant, t.open_variety);
    EXPECT_EQ(truth.verdicts.at(Guideline::G5) == Verdict::compliant, t.goodbye_variety && !t.one_shot);
    EXPECT_EQ(truth.verdicts.at(Guideline::G7) == Verdict::compliant, t.reprompt == RepromptMode::reworded);
    EXPECT_EQ(truth.verdicts.at(Guideline::G8) == Verdict::compliant, t.memory == MemoryMode::resume_prompt);
    for (const auto& [g, v] : truth.verdicts) EXPECT_NE(v, Verdict::inconclusive);
  }
  EXPECT_EQ(ids.size(), profiles.size());
  EXPECT_EQ(invocations.size(), profiles.size());
}

TEST(Generator, DeterministicInSeed) {
  EXPECT_EQ(generate_profiles(50, 5), generate_profiles(50, 5));
  EXPECT_NE(generate_profiles(50, 5), generate_profiles(50, 6));
}

}  // namespace
}  // namespace skillprobe
