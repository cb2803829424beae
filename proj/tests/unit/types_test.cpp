#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/serialization.hpp"
#include "skillprobe/core/types.hpp"

namespace skillprobe {
namespace {

Session sample_session(std::mt19937_64& rng, int index) {
  Session s("skill-" + std::to_string(index % 3), Probe::silence_probe, 1 + index % 4, Stage::post_exploration);
  s.append(Turn{Utterance(Role::crawler, "open thing"), Utterance(Role::skill, "Hello there!", 0.9, 0), Millis{0}});
  const int n = static_cast<int>(rng() % 5);
  for (int i = 0; i < n; ++i) {
    Turn t;
    if (rng() % 2) t.command = Utterance(Role::crawler, "cmd " + std::to_string(i), std::nullopt, i);
    if (rng() % 2) t.response = Utterance(Role::skill, "Reply #" + std::to_string(i) + ".", 1.0, i + 1);
    t.wait_elapsed = Millis{static_cast<long>(rng() % 100)};
    s.append(std::move(t));
  }
  s.termination = n % 2 ? Termination::timeout : Termination::auto_exit;
  if (rng() % 2) s.unsent_commands = {"stop"};
  return s;
}

TEST(SkillDescriptor, RejectsBrokenFields) {
  SkillDescriptor s;
  s.id = "a";
  s.invocation_name = "thing";
  EXPECT_NO_THROW(s.validate());

  auto field_of = [](const SkillDescriptor& d) {
    try {
      d.validate();
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string();
  };
  SkillDescriptor bad = s;
  bad.invocation_name.clear();
  EXPECT_EQ(field_of(bad), "invocation_name");
  bad = s;
  bad.review_count = -1;
  EXPECT_EQ(field_of(bad), "review_count");
  bad = s;
  bad.avg_rating = 5.5;
  EXPECT_EQ(field_of(bad), "avg_rating");
}

TEST(Category, ParsesIdsAndStoreNames) {
  EXPECT_EQ(parse_category("food_drink"), Category::food_drink);
  EXPECT_EQ(parse_category("Food & Drink"), Category::food_drink);
  EXPECT_EQ(parse_category("Games, Trivia & Accessories"), Category::games_trivia_accessories);
  EXPECT_EQ(parse_category("Shopping and Finance"), Category::shopping_finance);
  EXPECT_THROW(parse_category("Weather"), ValidationError);
  for (Category c : kAllCategories) EXPECT_EQ(parse_category(to_string(c)), c);
}

TEST(Guideline, FeatureGroupsAreFixed) {
  const std::vector<FeatureGroup> expected = {
      FeatureGroup::basic_commands, FeatureGroup::basic_commands, FeatureGroup::basic_commands,
      FeatureGroup::variety,        FeatureGroup::variety,        FeatureGroup::error_handling,
      FeatureGroup::error_handling, FeatureGroup::memorizing};
  for (std::size_t i = 0; i < kAllGuidelines.size(); ++i) {
    EXPECT_EQ(feature_group(kAllGuidelines[i]), expected[i]);
    EXPECT_EQ(parse_guideline(to_string(kAllGuidelines[i])), kAllGuidelines[i]);
  }
}

TEST(Utterance, ConfidenceOnlyForSkill) {
  EXPECT_THROW(Utterance(Role::crawler, "open x", 1.0), ValidationError);
  EXPECT_THROW(Utterance(Role::skill, "hi", 1.5), ValidationError);
  EXPECT_NO_THROW(Utterance(Role::skill, "hi", 0.0));
}

TEST(Turn, RolesMustMatchSlots) {
  Turn t;
  t.command = Utterance(Role::skill, "hi");
  EXPECT_THROW(t.validate(), ValidationError);
  Turn silent;
  EXPECT_TRUE(silent.silence());
  EXPECT_EQ(silent.command_text(), "");
  EXPECT_EQ(silent.response_text(), "");
}

TEST(Session, LoopInvariants) {
  Session s("a", Probe::basic_loop, 1, Stage::first_use);
  EXPECT_NO_THROW(s.validate());  // connector_error may be empty
  s.termination = Termination::timeout;
  EXPECT_THROW(s.validate(), ValidationError);

  s.append(Turn{Utterance(Role::crawler, "open a"), std::nullopt, Millis{0}});
  s.append(Turn{Utterance(Role::crawler, "help"), std::nullopt, Millis{0}});
  s.termination = Termination::exited_by_stop;
  EXPECT_THROW(s.validate(), ValidationError);
  s.append(Turn{Utterance(Role::crawler, "stop"), std::nullopt, Millis{0}});
  EXPECT_NO_THROW(s.validate());

  Session wrong("a", Probe::basic_loop, 1, Stage::first_use);
  wrong.append(Turn{Utterance(Role::crawler, "help"), std::nullopt, Millis{0}});
  wrong.append(Turn{Utterance(Role::crawler, "stop"), std::nullopt, Millis{0}});
  wrong.termination = Termination::exited_by_stop;
  EXPECT_THROW(wrong.validate(), ValidationError);
}

TEST(Serialization, SilenceAndNoResponseMarkers) {
  Session s("a", Probe::silence_probe, 1, Stage::not_applicable);
  s.append(Turn{Utterance(Role::crawler, "open a"), Utterance(Role::skill, "Hi.", 1.0), Millis{3}});
  s.append(Turn{std::nullopt, std::nullopt, Millis{8000}});
  s.termination = Termination::timeout;
  const json j = s;
  EXPECT_EQ(j.at("turns").at(1).at("command"), "SILENCE");
  EXPECT_EQ(j.at("turns").at(1).at("response"), "NO_RESPONSE");
  EXPECT_EQ(j.at("stage"), "n/a");
  EXPECT_EQ(j.at("turns").at(0).at("response").at("normalized_text"), "hi");
  EXPECT_EQ(j.get<Session>(), s);
}

TEST(Serialization, JsonLinesRoundTripPreservesOrder) {
  std::mt19937_64 rng(17);
  std::vector<Session> sessions;
  for (int i = 0; i < 200; ++i) sessions.push_back(sample_session(rng, i));
  std::stringstream buf;
  write_sessions_jsonl(buf, sessions);
  const auto back = read_sessions_jsonl(buf);
  ASSERT_EQ(back, sessions);

  std::stringstream again;
  write_sessions_jsonl(again, back);
  std::stringstream first;
  write_sessions_jsonl(first, sessions);
  EXPECT_EQ(again.str(), first.str());
}

TEST(Serialization, ReportsTheBadRow) {
  std::mt19937_64 rng(2);
  std::stringstream buf;
  write_sessions_jsonl(buf, {sample_session(rng, 0)});
  buf << "{not json}\n";
  try {
    read_sessions_jsonl(buf);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(Serialization, NormalizedTextIsRecomputedOnLoad) {
  const json j = json::parse(
      R"({"skill_id":"a","probe":"basic_loop","run_index":1,"stage":"first_use","termination":"auto_exit",
          "turns":[{"command":{"role":"crawler","text":"Open A","normalized_text":"WRONG","timestamp":0},
                    "response":"NO_RESPONSE","wait_elapsed":0}]})");
  const auto s = j.get<Session>();
  EXPECT_EQ(s.turns()[0].command_text(), "open a");
}

TEST(GuidelineVerdict, DecidedVerdictsNeedEvidence) {
  GuidelineVerdict v;
  v.guideline = Guideline::G4;
  v.verdict = Verdict::compliant;
  EXPECT_THROW(v.validate(), ValidationError);
  v.evidence.push_back(Evidence{SessionRef{Probe::variety_run, 2}, 0});
  EXPECT_NO_THROW(v.validate());
  v.facets["x"] = true;
  const json j = v;
  EXPECT_EQ(j.at("feature_group"), "variety");
  EXPECT_EQ(j.get<GuidelineVerdict>(), v);
  v.evidence.clear();
  v.verdict = Verdict::inconclusive;
  EXPECT_NO_THROW(v.validate());
}

}  // namespace
}  // namespace skillprobe
