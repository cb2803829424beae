#include <gtest/gtest.h>

#include <chrono>

#include "skillprobe/connectors/adapter_connector.hpp"
#include "skillprobe/connectors/text_connector.hpp"
#include "skillprobe/core/error.hpp"
#include "skillprobe/crawler/crawler.hpp"
#include "skillprobe/evaluator/evaluator.hpp"
#include "skillprobe/ingestion/roster.hpp"
#include "skillprobe/simulator/generator.hpp"
#include "test_support.hpp"

namespace skillprobe {
namespace {

using namespace std::chrono_literals;
using testing::full_featured;
using testing::one_shot_fact;

constexpr Millis kT{2000};

class AdapterTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::fresh_dir("adapter");
    profiles_ = {full_featured(), one_shot_fact(), testing::categories_game()};
    for (const auto& p : generate_profiles(24, 17)) profiles_.push_back(p);
    testing::spit(dir_ / "profiles.json", profiles_to_json(profiles_).dump());
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string serve_command() const {
    return "'" + testing::cli() + "' simulate --serve --profiles '" + (dir_ / "profiles.json").string() + "'";
  }

  std::string script(const std::string& name, const std::string& body) const {
    const auto path = dir_ / name;
    testing::spit(path, "#!/bin/sh\n" + body);
    return "sh '" + path.string() + "'";
  }

  std::filesystem::path dir_;
  std::vector<SimProfile> profiles_;
};

TEST_F(AdapterTest, TalksToSimulatorServer) {
  AdapterConnector c(serve_command());
  auto [h, opening] = c.open_session("Story Time", kT);
  ASSERT_EQ(opening.kind, EventKind::response) << opening.detail.value_or("");
  EXPECT_TRUE(h.is_open());
  EXPECT_EQ(*opening.text, full_featured().welcome_variants.at(Stage::first_use));
  EXPECT_LE(opening.elapsed, kT);

  EXPECT_EQ(*c.say(h, "help", kT).text, *full_featured().help_text);
  EXPECT_EQ(c.wait_silence(h, kT).kind, EventKind::response);
  const auto bye = c.say(h, "stop", kT);
  EXPECT_EQ(bye.kind, EventKind::closed);
  EXPECT_FALSE(h.is_open());
  EXPECT_THROW(c.say(h, "help", kT), PreconditionError);
  EXPECT_TRUE(c.running());
}

TEST_F(AdapterTest, StageTravelsWithNextOpen) {
  AdapterConnector c(serve_command());
  c.signal_stage(Stage::post_setup);
  auto [h, opening] = c.open_session("story time", kT);
  EXPECT_EQ(*opening.text, full_featured().welcome_variants.at(Stage::post_setup));
}

TEST_F(AdapterTest, OneShotOpenComesBackClosed) {
  AdapterConnector c(serve_command());
  auto [h, event] = c.open_session("cat facts", kT);
  EXPECT_FALSE(h.is_open());
  EXPECT_EQ(event.kind, EventKind::response);
  EXPECT_EQ(*event.text, one_shot_fact().welcome_variants.at(Stage::first_use));
}

TEST_F(AdapterTest, UnreachableCommandIsAnErrorEvent) {
  AdapterConnector c("exec /nonexistent/adapter 2>/dev/null");
  auto [h, event] = c.open_session("anything", kT);
  EXPECT_EQ(event.kind, EventKind::error);
  EXPECT_FALSE(h.is_open());
  EXPECT_FALSE(c.running());
}

TEST_F(AdapterTest, MalformedRepliesBecomeErrorEvents) {
  const auto cmd = script("junk.sh",
                          "n=0\n"
                          "while read line; do\n"
                          "  n=$((n+1))\n"
                          "  case $((n % 6)) in\n"
                          "    1) echo '{\"type\":\"response\",\"text\":\"hello\"}' ;;\n"
                          "    2) echo 'this is not json' ;;\n"
                          "    3) echo '{\"type\":\"shout\"}' ;;\n"
                          "    4) echo '{\"type\":\"response\",\"confidence\":7,\"text\":\"x\"}' ;;\n"
                          "    5) echo '[1,2,3]' ;;\n"
                          "    0) echo '{\"type\":\"response\"}' ;;\n"
                          "  esac\n"
                          "done\n");
  AdapterConnector c(cmd);
  int errors = 0;
  for (int round = 0; round < 10; ++round) {
    auto [h, opening] = c.open_session("junk", kT);
    if (opening.kind == EventKind::error) {
      ++errors;
      continue;
    }
    while (h.is_open()) {
      const auto e = c.say(h, "help", kT);
      EXPECT_NE(e.kind, EventKind::closed);
      if (e.kind == EventKind::error) {
        ++errors;
        EXPECT_FALSE(h.is_open());
      }
    }
  }
  EXPECT_GE(errors, 5);
  EXPECT_TRUE(c.running());
}

TEST_F(AdapterTest, SilentAdapterTimesOut) {
  AdapterConnector c("exec sleep 30", Millis{100});
  const auto start = std::chrono::steady_clock::now();
  auto [h, event] = c.open_session("anything", Millis{200});
  const auto took = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(event.kind, EventKind::error);
  EXPECT_LE(event.elapsed, Millis{200});
  EXPECT_LT(took, 3s);
  EXPECT_FALSE(c.running());
}

TEST_F(AdapterTest, CrashMidSessionThenRespawn) {
  const auto cmd = script("crash.sh",
                          "read line\n"
                          "echo '{\"type\":\"response\",\"text\":\"hi\"}'\n"
                          "read line\n"
                          "exit 3\n");
  AdapterConnector c(cmd);
  auto [h, opening] = c.open_session("x", kT);
  ASSERT_EQ(opening.kind, EventKind::response);
  const auto e = c.say(h, "help", kT);
  EXPECT_EQ(e.kind, EventKind::error);
  EXPECT_FALSE(h.is_open());
  EXPECT_FALSE(c.running());
  auto [h2, again] = c.open_session("x", kT);
  EXPECT_EQ(again.kind, EventKind::response);
}

TEST_F(AdapterTest, CloseSendsCloseRequest) {
  const auto log = dir_ / "requests.log";
  const auto cmd = script("log.sh",
                          "while read line; do\n"
                          "  echo \"$line\" >> '" + log.string() + "'\n"
                          "  echo '{\"type\":\"silence\"}'\n"
                          "done\n");
  {
    AdapterConnector c(cmd);
    auto [h, opening] = c.open_session("x", kT);
    EXPECT_EQ(opening.kind, EventKind::silence);
    EXPECT_TRUE(h.is_open());
    c.close(h);
    EXPECT_FALSE(c.running());
  }
  const auto lines = testing::slurp(log);
  EXPECT_NE(lines.find("\"type\":\"open\""), std::string::npos);
  EXPECT_NE(lines.find("\"type\":\"close\""), std::string::npos);
}

TEST_F(AdapterTest, SameVerdictsAsInProcessConnector) {
  Roster roster;
  for (const auto& p : profiles_) roster.skills.push_back(p.skill);
  ElicitationPlan plan;
  plan.response_timeout = kT;
  const auto via_text = run_crawl(roster, plan, text_connector_factory(profiles_));
  const auto via_adapter = run_crawl(roster, plan, adapter_connector_factory(serve_command()), 4);
  EXPECT_EQ(via_adapter.connector_failures(), 0u);

  const auto a = evaluate_corpus(via_text.corpus, default_lexicon());
  const auto b = evaluate_corpus(via_adapter.corpus, default_lexicon());
  ASSERT_EQ(a.size(), profiles_.size());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].skill_id, b[i].skill_id);
    EXPECT_EQ(a[i].one_shot, b[i].one_shot);
    for (Guideline g : kAllGuidelines) {
      EXPECT_EQ(a[i].verdicts.at(g).verdict, b[i].verdicts.at(g).verdict) << a[i].skill_id << " " << to_string(g);
    }
  }
  ASSERT_EQ(via_text.corpus.size(), via_adapter.corpus.size());
  for (std::size_t i = 0; i < via_text.corpus.size(); ++i) {
    const auto& x = via_text.corpus[i];
    const auto& y = via_adapter.corpus[i];
    ASSERT_EQ(x.turns().size(), y.turns().size());
    EXPECT_EQ(x.termination, y.termination);
    for (std::size_t t = 0; t < x.turns().size(); ++t) {
      EXPECT_EQ(x.turns()[t].response_text(), y.turns()[t].response_text());
    }
  }
}

}  // namespace
}  // namespace skillprobe
