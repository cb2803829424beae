#include <gtest/gtest.h>

#include "skillprobe/connectors/text_connector.hpp"
#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"
#include "skillprobe/crawler/crawler.hpp"
#include "skillprobe/crawler/plan.hpp"
#include "skillprobe/ingestion/roster.hpp"
#include "skillprobe/simulator/generator.hpp"
#include "test_support.hpp"

namespace skillprobe {
namespace {

using testing::categories_game;
using testing::full_featured;
using testing::one_shot_fact;

// Fails every call after the first `healthy` ones.
class FlakyConnector : public Connector {
 public:
  FlakyConnector(SimProfile profile, int healthy) : inner_(std::move(profile)), healthy_(healthy) {}

  std::pair<SessionHandle, ConnectorEvent> open_session(std::string_view name, Millis t) override {
    if (broken()) return {SessionHandle{}, ConnectorEvent::error("down")};
    return inner_.open_session(name, t);
  }
  ConnectorEvent say(SessionHandle& h, std::string_view text, Millis t) override {
    if (broken()) {
      h.state = HandleState::closed;
      return ConnectorEvent::error("down");
    }
    return inner_.say(h, text, t);
  }
  ConnectorEvent wait_silence(SessionHandle& h, Millis t) override {
    if (broken()) {
      h.state = HandleState::closed;
      return ConnectorEvent::error("down");
    }
    return inner_.wait_silence(h, t);
  }
  void close(SessionHandle& h) override { inner_.close(h); }
  void signal_stage(Stage s) override { inner_.signal_stage(s); }

 private:
  bool broken() { return calls_++ >= healthy_; }
  TextConnector inner_;
  int healthy_;
  int calls_ = 0;
};

// Never closes, even on stop.
class StubbornConnector : public Connector {
 public:
  std::pair<SessionHandle, ConnectorEvent> open_session(std::string_view, Millis) override {
    return {SessionHandle{1, HandleState::open}, ConnectorEvent::response("Hi.")};
  }
  ConnectorEvent say(SessionHandle&, std::string_view, Millis) override { return ConnectorEvent::response("Hm?"); }
  ConnectorEvent wait_silence(SessionHandle&, Millis) override { return ConnectorEvent::silence(); }
  void close(SessionHandle& h) override {
    h.state = HandleState::closed;
    ++closes;
  }
  int closes = 0;
};

Roster roster_of(const std::vector<SimProfile>& profiles) {
  Roster r;
  for (const auto& p : profiles) r.skills.push_back(p.skill);
  return r;
}

TEST(BasicLoop, CompliantSkill) {
  TextConnector c(full_featured());
  const auto s = run_basic_loop(c, full_featured().skill, ElicitationPlan{}, Stage::first_use);
  ASSERT_EQ(s.turns().size(), 3u);
  EXPECT_EQ(s.termination, Termination::exited_by_stop);
  EXPECT_EQ(s.turns()[0].command_text(), "open story time");
  EXPECT_EQ(s.turns()[1].command_text(), "help");
  EXPECT_EQ(s.turns()[2].command_text(), "stop");
  EXPECT_TRUE(s.unsent_commands.empty());
  EXPECT_NO_THROW(s.validate());
}

TEST(BasicLoop, OneShot) {
  TextConnector c(one_shot_fact());
  const auto s = run_basic_loop(c, one_shot_fact().skill, ElicitationPlan{}, Stage::first_use);
  ASSERT_EQ(s.turns().size(), 1u);
  EXPECT_EQ(s.termination, Termination::auto_exit);
  EXPECT_EQ(s.unsent_commands, (std::vector<std::string>{"help", "stop"}));
}

TEST(BasicLoop, ConnectorFailureKeepsPartialTurns) {
  FlakyConnector c(full_featured(), 2);
  const auto s = run_basic_loop(c, full_featured().skill, ElicitationPlan{}, Stage::first_use);
  ASSERT_EQ(s.turns().size(), 3u);
  EXPECT_EQ(s.termination, Termination::connector_error);
  EXPECT_FALSE(s.turns()[2].response.has_value());
  EXPECT_NO_THROW(s.validate());
}

TEST(BasicLoop, StopIgnoredIsAbandoned) {
  StubbornConnector c;
  const auto s = run_basic_loop(c, full_featured().skill, ElicitationPlan{}, Stage::first_use);
  EXPECT_EQ(s.turns().size(), 3u);
  EXPECT_EQ(s.termination, Termination::timeout);
  EXPECT_EQ(c.closes, 1);
}

TEST(Exploration, TurnCounts) {
  const auto p = full_featured();
  TextConnector c(p);
  const CommandSet three{{"play a story", "list stories", "next chapter"}, ""};
  auto s = run_exploration(c, p.skill, three, ElicitationPlan{});
  EXPECT_EQ(s.turns().size(), 5u);
  EXPECT_EQ(s.probe, Probe::exploration);
  EXPECT_EQ(s.stage, Stage::post_setup);
  s = run_exploration(c, p.skill, CommandSet{}, ElicitationPlan{});
  EXPECT_EQ(s.turns().size(), 2u);

  auto exits = p;
  exits.exit_after_command = true;
  TextConnector e(exits);
  s = run_exploration(e, p.skill, three, ElicitationPlan{});
  EXPECT_EQ(s.turns().size(), 2u);
  EXPECT_EQ(s.termination, Termination::auto_exit);
  EXPECT_EQ(s.unsent_commands, (std::vector<std::string>{"list stories", "next chapter", "stop"}));
}

TEST(VarietyProbe, StagedOpeningsAndExploration) {
  const auto p = full_featured();
  TextConnector c(p);
  const auto v = run_variety_probe(c, p.skill, ElicitationPlan{});
  ASSERT_EQ(v.sessions.size(), 4u);
  EXPECT_EQ(v.sessions[0].stage, Stage::first_use);
  EXPECT_EQ(v.sessions[1].stage, Stage::post_setup);
  EXPECT_EQ(v.sessions[2].probe, Probe::exploration);
  EXPECT_EQ(v.sessions[3].stage, Stage::post_exploration);
  EXPECT_EQ(v.commands.commands, (std::vector<std::string>{"play a story", "list stories", "next chapter"}));
  EXPECT_EQ(v.sessions[2].turns().size(), 5u);
  const Stage stages[] = {Stage::first_use, Stage::post_setup, Stage::post_exploration};
  for (int i : {0, 1, 3}) {
    const int run = i == 3 ? 2 : i;
    EXPECT_EQ(v.sessions[static_cast<std::size_t>(i)].turns()[0].response_text(),
              normalize(p.welcome_variants.at(stages[run])));
  }
}

TEST(VarietyProbe, FixedWelcomeRepeats) {
  auto p = categories_game();
  TextConnector c(p);
  const auto v = run_variety_probe(c, p.skill, ElicitationPlan{});
  std::set<std::string> openings;
  for (const auto& s : v.sessions) {
    if (s.probe == Probe::variety_run) openings.insert(s.turns()[0].response_text());
  }
  EXPECT_EQ(openings.size(), 1u);
}

TEST(VarietyProbe, OneShotSkipsExploration) {
  TextConnector c(one_shot_fact());
  const auto v = run_variety_probe(c, one_shot_fact().skill, ElicitationPlan{});
  ASSERT_EQ(v.sessions.size(), 3u);
  for (const auto& s : v.sessions) EXPECT_EQ(s.termination, Termination::auto_exit);
  EXPECT_TRUE(v.exploration_skipped);
}

TEST(VarietyProbe, NeedsTwoRuns) {
  TextConnector c(full_featured());
  ElicitationPlan plan;
  plan.variety_runs = 1;
  EXPECT_THROW(run_variety_probe(c, full_featured().skill, plan), PreconditionError);
}

TEST(SilenceProbe, RewordedRepromptsRecorded) {
  const auto p = full_featured();
  TextConnector c(p);
  const auto s = run_silence_probe(c, p.skill, ElicitationPlan{});
  ASSERT_EQ(s.turns().size(), 4u);
  EXPECT_TRUE(s.turns()[1].silence());
  EXPECT_TRUE(s.turns()[2].silence());
  EXPECT_NE(s.turns()[1].response_text(), s.turns()[2].response_text());
  EXPECT_EQ(s.termination, Termination::exited_by_stop);
}

TEST(SilenceProbe, NoRepromptEndsAfterOneSilence) {
  auto p = categories_game();
  p.reprompt_mode = RepromptMode::none;
  p.reprompt_texts.clear();
  TextConnector c(p);
  auto s = run_silence_probe(c, p.skill, ElicitationPlan{});
  EXPECT_EQ(s.turns().size(), 2u);
  EXPECT_EQ(s.termination, Termination::auto_exit);

  StubbornConnector quiet;
  s = run_silence_probe(quiet, p.skill, ElicitationPlan{});
  EXPECT_EQ(s.turns().size(), 2u);
  EXPECT_EQ(s.termination, Termination::timeout);
  EXPECT_EQ(s.unsent_commands, (std::vector<std::string>{"stop"}));
}

TEST(SilenceProbe, OneShot) {
  TextConnector c(one_shot_fact());
  const auto s = run_silence_probe(c, one_shot_fact().skill, ElicitationPlan{});
  EXPECT_EQ(s.turns().size(), 1u);
  EXPECT_EQ(s.termination, Termination::auto_exit);
}

TEST(MemoryProbe, ResumeVersusRestart) {
  auto p = full_featured();
  TextConnector c(p);
  crawl_skill(c, p.skill, ElicitationPlan{});
  const auto s = run_memory_probe(c, p.skill, ElicitationPlan{});
  EXPECT_EQ(s.probe, Probe::memory_check);
  EXPECT_NE(s.turns()[0].response_text().find("resume"), std::string::npos);

  TextConnector g(categories_game());
  const auto crawl = crawl_skill(g, categories_game().skill, ElicitationPlan{});
  EXPECT_EQ(crawl.sessions.back().turns()[0].response_text(), crawl.sessions.front().turns()[0].response_text());
}

TEST(Crawl, TenSkillsSixtySessions) {
  const auto profiles = generate_profiles(40, 1);
  std::vector<SimProfile> multi;
  for (const auto& p : profiles) {
    if (!p.one_shot) multi.push_back(p);
    if (multi.size() == 10) break;
  }
  const auto result = run_crawl(roster_of(multi), ElicitationPlan{}, text_connector_factory(multi));
  EXPECT_EQ(result.corpus.size(), 60u);
  for (const auto& s : result.corpus) EXPECT_NO_THROW(s.validate());
}

TEST(Crawl, SessionCountArithmetic) {
  const auto profiles = generate_profiles(96, 8);
  const auto result = run_crawl(roster_of(profiles), ElicitationPlan{}, text_connector_factory(profiles));
  std::size_t expected = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& crawl = result.skills[i];
    EXPECT_EQ(crawl.exploration_skipped, profiles[i].one_shot);
    EXPECT_EQ(crawl.sessions.size(), profiles[i].one_shot ? 5u : 6u);
    expected += crawl.sessions.size();
  }
  EXPECT_EQ(result.corpus.size(), expected);
}

TEST(Crawl, EmptyRosterIsRejected) {
  EXPECT_THROW(run_crawl(Roster{}, ElicitationPlan{}, text_connector_factory({})), PreconditionError);
}

TEST(Crawl, ExcludedSkillsAbsent) {
  auto profiles = std::vector<SimProfile>{full_featured(), categories_game()};
  auto roster = roster_of(profiles);
  roster.skills[0].excluded_reason = "account linking";
  const auto result = run_crawl(roster, ElicitationPlan{}, text_connector_factory(profiles));
  for (const auto& s : result.corpus) EXPECT_EQ(s.skill_id, "categories");
  EXPECT_EQ(result.attempted(), 1u);
  EXPECT_EQ(result.skills[0].excluded_reason, "account linking");
}

TEST(Crawl, DeadConnectorExcludesSkill) {
  const auto profiles = std::vector<SimProfile>{full_featured(), categories_game()};
  const ConnectorFactory factory = [](const SkillDescriptor& s) -> std::unique_ptr<Connector> {
    if (s.id == "story-time") return std::make_unique<FlakyConnector>(full_featured(), 0);
    throw std::runtime_error("cannot connect");
  };
  const auto result = run_crawl(roster_of(profiles), ElicitationPlan{}, factory);
  EXPECT_EQ(result.connector_failures(), 2u);
  EXPECT_EQ(result.attempted(), 2u);
  EXPECT_TRUE(result.skills[0].excluded_reason->rfind("connector_error", 0) == 0);
  EXPECT_EQ(result.skills[1].sessions.size(), 0u);
}

TEST(Crawl, ParallelismDoesNotChangeOutput) {
  const auto profiles = generate_profiles(60, 2);
  const auto factory = text_connector_factory(profiles);
  const auto one = run_crawl(roster_of(profiles), ElicitationPlan{}, factory, 1);
  const auto four = run_crawl(roster_of(profiles), ElicitationPlan{}, factory, 4);
  EXPECT_EQ(one.corpus, four.corpus);
  EXPECT_EQ(crawl_manifest(one, 2).dump(), crawl_manifest(four, 2).dump());
}

TEST(Crawl, TurnsAlternate) {
  const auto profiles = generate_profiles(48, 4);
  const auto result = run_crawl(roster_of(profiles), ElicitationPlan{}, text_connector_factory(profiles));
  for (const auto& s : result.corpus) {
    for (const auto& t : s.turns()) {
      if (t.command) {
        EXPECT_EQ(t.command->role(), Role::crawler);
      }
      if (t.response) {
        EXPECT_EQ(t.response->role(), Role::skill);
      }
    }
    std::int64_t last = -1;
    for (const auto& t : s.turns()) {
      if (t.command) {
        EXPECT_GE(t.command->timestamp(), last);
        last = t.command->timestamp();
      }
      if (t.response) {
        EXPECT_GE(t.response->timestamp(), last);
        last = t.response->timestamp();
      }
    }
  }
}

TEST(Crawl, ManifestFlags) {
  const auto profiles = std::vector<SimProfile>{full_featured(), one_shot_fact()};
  const auto result = run_crawl(roster_of(profiles), ElicitationPlan{}, text_connector_factory(profiles));
  const auto m = crawl_manifest(result, 42);
  EXPECT_EQ(m.at("seed"), 42);
  EXPECT_EQ(m.at("session_count"), 11);
  EXPECT_EQ(m.at("skills")[0].at("extracted_commands").size(), 3u);
  EXPECT_EQ(m.at("skills")[1].at("exploration_skipped"), true);
  EXPECT_EQ(m.at("plan").at("response_timeout_ms"), 8000);
}

TEST(Plan, ValidationAndJson) {
  ElicitationPlan plan;
  EXPECT_NO_THROW(plan.validate());
  plan.silence_count = 0;
  EXPECT_THROW(plan.validate(), ValidationError);
  plan = ElicitationPlan{};
  plan.connector_failure_threshold = 1.5;
  EXPECT_THROW(plan.validate(), ValidationError);

  const auto back = json(ElicitationPlan{}).get<ElicitationPlan>();
  EXPECT_EQ(json(back).dump(), json(ElicitationPlan{}).dump());
  EXPECT_THROW(json({{"variety_runs", 1}}).get<ElicitationPlan>(), ValidationError);
  const auto shipped = load_plan((testing::source_dir() / "config/plan.json").string());
  EXPECT_EQ(json(shipped).dump(), json(ElicitationPlan{}).dump());
}

}  // namespace
}  // namespace skillprobe
