#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skillprobe/connectors/connector.hpp"
#include "skillprobe/crawler/plan.hpp"
#include "skillprobe/ingestion/roster.hpp"

namespace skillprobe {

// open, each of `commands`, then stop. A one-shot close at open ends the
// session as auto_exit and lists the rest as unsent; a stop that leaves the
// session open is abandoned by the harness and recorded as timeout.
Session run_script(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan,
                   Probe probe, int run_index, Stage stage, const std::vector<std::string>& commands);

// open, "help", stop.
Session run_basic_loop(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan,
                       Stage stage, Probe probe = Probe::basic_loop, int run_index = 1);

// open, the extracted commands, stop. Labeled stage post_setup: it runs
// between the second and third staged runs.
Session run_exploration(Connector& connector, const SkillDescriptor& skill, const CommandSet& commands,
                        const ElicitationPlan& plan);

struct VarietyResult {
  // variety_runs staged runs, with the exploration session after run 2.
  std::vector<Session> sessions;
  CommandSet commands;
  // Run 2 never got to say "help" (one-shot, early exit or connector error).
  bool exploration_skipped = false;
  // "help" was said but drew no spoken answer.
  bool help_silent = false;
};

// Staged runs: first_use, post_setup (after signalling setup), then
// post_exploration for every later run. Exploration happens between runs 2
// and 3 with the commands extracted from run 2's help response.
VarietyResult run_variety_probe(Connector& connector, const SkillDescriptor& skill,
                                const ElicitationPlan& plan);

// open, silence_count SILENCE turns, stop. A skill that closes on silence
// ends auto_exit; one that neither re-prompts nor closes is abandoned after
// its first silence and recorded as timeout.
Session run_silence_probe(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan);

// One more open-help-stop loop after exploration.
Session run_memory_probe(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan);

struct SkillCrawl {
  std::string skill_id;
  std::vector<Session> sessions;
  CommandSet commands;
  bool exploration_skipped = false;
  bool help_silent = false;
  // Roster exclusion, or every session failing in the connector.
  std::optional<std::string> excluded_reason;
  bool connector_failure = false;
};

// Variety, silence and memory probes, in that order, over one connector.
SkillCrawl crawl_skill(Connector& connector, const SkillDescriptor& skill, const ElicitationPlan& plan);

struct CrawlResult {
  // Roster order; per skill, protocol order.
  std::vector<Session> corpus;
  std::vector<SkillCrawl> skills;
  ElicitationPlan plan;

  // Skills excluded because every session failed in the connector.
  std::size_t connector_failures() const;
  // Skills the crawl attempted (not excluded by the roster).
  std::size_t attempted() const;
};

// Crawls every non-excluded roster skill, up to `parallelism` at a time, one
// connector per skill. Output order does not depend on parallelism. Throws
// PreconditionError for an empty roster.
CrawlResult run_crawl(const Roster& roster, const ElicitationPlan& plan, const ConnectorFactory& factory,
                      int parallelism = 1);

// Plan, seed and per-skill outcome (exclusions, extracted commands, flags).
json crawl_manifest(const CrawlResult& result, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace skillprobe
