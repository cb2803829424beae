#include "skillprobe/crawler/crawler.hpp"

#include <atomic>
#include <thread>

#include "skillprobe/core/error.hpp"

namespace skillprobe {

namespace {

const std::string kHelp = "help";
const std::string kStop = "stop";

// Session under construction with its relative clock.
class Recorder {
 public:
  Recorder(const SkillDescriptor& skill, Probe probe, int run_index, Stage stage)
      : session_(skill.id, probe, run_index, stage) {}

  void record(const std::optional<std::string>& command, const ConnectorEvent& event) {
    Turn turn;
    if (command) turn.command = Utterance(Role::crawler, *command, std::nullopt, clock_);
    clock_ += event.elapsed.count();
    std::optional<std::string> spoken;
    if (event.kind == EventKind::response) spoken = event.text;
    if (event.kind == EventKind::closed) spoken = event.detail;
    if (spoken) {
      std::optional<double> confidence = event.confidence;
      if (!confidence && event.kind == EventKind::response) confidence = 1.0;
      turn.response = Utterance(Role::skill, *spoken, confidence, clock_);
    }
    turn.wait_elapsed = event.elapsed;
    session_.append(std::move(turn));
  }

  Session finish(Termination termination, std::vector<std::string> unsent = {}) {
    session_.termination = termination;
    session_.unsent_commands = std::move(unsent);
    return std::move(session_);
  }

 private:
  Session session_;
  std::int64_t clock_ = 0;
};

std::vector<std::string> rest(const std::vector<std::string>& commands, std::size_t from) {
  return {commands.begin() + static_cast<std::ptrdiff_t>(std::min(from, commands.size())), commands.end()};
}

std::string open_utterance(const SkillDescriptor& skill) { return "open " + skill.invocation_name; }

}  // namespace

Session run_script(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan,
                   Probe probe, int run_index, Stage stage, const std::vector<std::string>& commands) {
  std::vector<std::string> script = commands;
  script.push_back(kStop);
  Recorder rec(skill, probe, run_index, stage);

  auto [handle, opened] = connector.open_session(skill.invocation_name, plan.response_timeout);
  rec.record(open_utterance(skill), opened);
  if (opened.kind == EventKind::error) return rec.finish(Termination::connector_error, script);
  if (!handle.is_open()) return rec.finish(Termination::auto_exit, script);

  for (std::size_t i = 0; i < script.size(); ++i) {
    const ConnectorEvent event = connector.say(handle, script[i], plan.response_timeout);
    rec.record(script[i], event);
    if (event.kind == EventKind::error) {
      connector.close(handle);
      return rec.finish(Termination::connector_error, rest(script, i + 1));
    }
    const bool last = i + 1 == script.size();
    if (!handle.is_open()) {
      return rec.finish(last ? Termination::exited_by_stop : Termination::auto_exit, rest(script, i + 1));
    }
    if (last) {
      connector.close(handle);
      return rec.finish(Termination::timeout);
    }
  }
  return rec.finish(Termination::timeout);
}

Session run_basic_loop(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan,
                       Stage stage, Probe probe, int run_index) {
  return run_script(connector, skill, plan, probe, run_index, stage, {kHelp});
}

Session run_exploration(Connector& connector, const SkillDescriptor& skill, const CommandSet& commands,
                        const ElicitationPlan& plan) {
  return run_script(connector, skill, plan, Probe::exploration, 1, Stage::post_setup, commands.commands);
}

VarietyResult run_variety_probe(Connector& connector, const SkillDescriptor& skill,
                                const ElicitationPlan& plan) {
  if (plan.variety_runs < 2) throw PreconditionError("variety probe needs at least two runs");
  VarietyResult result;
  for (int run = 1; run <= plan.variety_runs; ++run) {
    const Stage stage = run == 1 ? Stage::first_use : run == 2 ? Stage::post_setup : Stage::post_exploration;
    connector.signal_stage(stage);
    result.sessions.push_back(run_basic_loop(connector, skill, plan, stage, Probe::variety_run, run));
    if (run != 2) continue;

    const Session& second = result.sessions.back();
    const Turn* help = nullptr;
    for (std::size_t t = 0; t < second.turns().size(); ++t) {
      const Turn& turn = second.turns()[t];
      const bool failed = second.termination == Termination::connector_error && t + 1 == second.turns().size();
      if (!turn.silence() && turn.command->text() == kHelp && !failed) help = &turn;
    }
    if (!help) {
      result.exploration_skipped = true;
      continue;
    }
    if (help->response && !help->response_text().empty()) {
      result.commands = extract_commands(help->response->text(), plan.max_extracted_commands, plan.extraction);
    } else {
      result.help_silent = true;
    }
    result.sessions.push_back(run_exploration(connector, skill, result.commands, plan));
  }
  return result;
}

Session run_silence_probe(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan) {
  Recorder rec(skill, Probe::silence_probe, 1, Stage::post_exploration);
  auto [handle, opened] = connector.open_session(skill.invocation_name, plan.response_timeout);
  rec.record(open_utterance(skill), opened);
  if (opened.kind == EventKind::error) return rec.finish(Termination::connector_error, {kStop});
  if (!handle.is_open()) return rec.finish(Termination::auto_exit, {kStop});

  for (int i = 0; i < plan.silence_count; ++i) {
    const ConnectorEvent event = connector.wait_silence(handle, plan.response_timeout);
    rec.record(std::nullopt, event);
    if (event.kind == EventKind::error) {
      connector.close(handle);
      return rec.finish(Termination::connector_error, {kStop});
    }
    if (!handle.is_open()) return rec.finish(Termination::auto_exit, {kStop});
    if (event.kind == EventKind::silence) {
      connector.close(handle);
      return rec.finish(Termination::timeout, {kStop});
    }
  }

  const ConnectorEvent event = connector.say(handle, kStop, plan.response_timeout);
  rec.record(kStop, event);
  if (event.kind == EventKind::error) {
    connector.close(handle);
    return rec.finish(Termination::connector_error);
  }
  if (!handle.is_open()) return rec.finish(Termination::exited_by_stop);
  connector.close(handle);
  return rec.finish(Termination::timeout);
}

Session run_memory_probe(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan) {
  return run_basic_loop(connector, skill, plan, Stage::post_exploration, Probe::memory_check, 1);
}

SkillCrawl crawl_skill(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan) {
  SkillCrawl crawl;
  crawl.skill_id = skill.id;
  VarietyResult variety = run_variety_probe(connector, skill, plan);
  crawl.sessions = std::move(variety.sessions);
  crawl.commands = std::move(variety.commands);
  crawl.exploration_skipped = variety.exploration_skipped;
  crawl.help_silent = variety.help_silent;
  crawl.sessions.push_back(run_silence_probe(connector, skill, plan));
  crawl.sessions.push_back(run_memory_probe(connector, skill, plan));

  bool all_failed = true;
  for (const auto& s : crawl.sessions) all_failed = all_failed && s.termination == Termination::connector_error;
  if (all_failed) {
    crawl.connector_failure = true;
    crawl.excluded_reason = "connector_error: every session failed";
  }
  return crawl;
}

std::size_t CrawlResult::connector_failures() const {
  std::size_t n = 0;
  for (const auto& s : skills) n += s.connector_failure ? 1 : 0;
  return n;
}

std::size_t CrawlResult::attempted() const {
  std::size_t n = 0;
  for (const auto& s : skills) n += s.excluded_reason && !s.connector_failure ? 0 : 1;
  return n;
}

CrawlResult run_crawl(const Roster& roster, const ElicitationPlan& plan, const ConnectorFactory& factory,
                      int parallelism) {
  if (roster.skills.empty()) throw PreconditionError("cannot crawl an empty roster");
  plan.validate();
  CrawlResult result;
  result.plan = plan;
  result.skills.resize(roster.skills.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < roster.skills.size(); i = next++) {
      const SkillDescriptor& skill = roster.skills[i];
      SkillCrawl& out = result.skills[i];
      out.skill_id = skill.id;
      if (skill.excluded()) {
        out.excluded_reason = skill.excluded_reason;
        continue;
      }
      try {
        auto connector = factory(skill);
        out = crawl_skill(*connector, skill, plan);
      } catch (const std::exception& e) {
        out = SkillCrawl{};
        out.skill_id = skill.id;
        out.connector_failure = true;
        out.excluded_reason = std::string("connector_error: ") + e.what();
      }
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, parallelism));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, roster.skills.size()); ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& s : result.skills) {
    result.corpus.insert(result.corpus.end(), s.sessions.begin(), s.sessions.end());
  }
  return result;
}

json crawl_manifest(const CrawlResult& result, std::optional<std::uint64_t> seed) {
  json skills = json::array();
  for (const auto& s : result.skills) {
    json entry{{"id", s.skill_id},
               {"sessions", s.sessions.size()},
               {"excluded_reason", s.excluded_reason ? json(*s.excluded_reason) : json(nullptr)},
               {"connector_failure", s.connector_failure},
               {"exploration_skipped", s.exploration_skipped},
               {"help_silent", s.help_silent},
               {"extracted_commands", s.commands.commands}};
    skills.push_back(std::move(entry));
  }
  return json{{"plan", result.plan},
              {"seed", seed ? json(*seed) : json(nullptr)},
              {"session_count", result.corpus.size()},
              {"skills_attempted", result.attempted()},
              {"connector_failures", result.connector_failures()},
              {"skills", skills}};
}

}  // namespace skillprobe
