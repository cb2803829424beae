#include "skillprobe/app/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "skillprobe/connectors/adapter_connector.hpp"
#include "skillprobe/connectors/sim_server.hpp"
#include "skillprobe/connectors/text_connector.hpp"
#include "skillprobe/core/error.hpp"
#include "skillprobe/crawler/crawler.hpp"
#include "skillprobe/evaluator/evaluator.hpp"
#include "skillprobe/reporting/report.hpp"
#include "skillprobe/simulator/generator.hpp"
#include "skillprobe/simulator/simulator.hpp"

namespace skillprobe {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::optional<std::int64_t> timeout_ms;
};

// Defaults read from SKILLPROBE_CONFIG. Relative paths resolve against the
// config file's directory.
struct Defaults {
  std::optional<std::uint64_t> seed;
  std::optional<int> parallelism;
  std::optional<std::int64_t> timeout_ms;
  std::optional<std::string> plan;
  std::optional<std::string> lexicon;
  std::optional<std::string> extraction;
  std::optional<std::string> connector;
};

Defaults load_defaults() {
  Defaults d;
  const char* path = std::getenv("SKILLPROBE_CONFIG");
  if (!path || !*path) return d;
  const json j = read_json_file(path);
  if (!j.is_object()) throw ParseError(std::string(path) + ": expected a JSON object");
  const fs::path base = fs::path(path).parent_path();
  auto file = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key)) return std::nullopt;
    fs::path p = j.at(key).get<std::string>();
    return (p.is_relative() ? base / p : p).string();
  };
  try {
    if (j.contains("seed")) d.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("parallelism")) d.parallelism = j.at("parallelism").get<int>();
    if (j.contains("timeout_ms")) d.timeout_ms = j.at("timeout_ms").get<std::int64_t>();
    if (j.contains("connector")) d.connector = j.at("connector").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string(path) + ": " + e.what());
  }
  d.plan = file("plan");
  d.lexicon = file("lexicon");
  d.extraction = file("extraction");
  return d;
}

template <typename T>
void fill(T& target, const CLI::Option* opt, const std::optional<T>& fallback) {
  if (opt->count() == 0 && fallback) target = *fallback;
}

void fill_path(std::string& target, const std::optional<std::string>& fallback) {
  if (target.empty() && fallback) target = *fallback;
}

ElicitationPlan resolve_plan(const std::string& plan_path, const std::string& extraction_path,
                             const Globals& globals) {
  ElicitationPlan plan = plan_path.empty() ? ElicitationPlan{} : load_plan(plan_path);
  if (!extraction_path.empty()) plan.extraction = load_extraction_rules(extraction_path);
  if (globals.timeout_ms) plan.response_timeout = Millis{*globals.timeout_ms};
  plan.validate();
  return plan;
}

MarkerLexicon resolve_lexicon(const std::string& path) {
  return path.empty() ? default_lexicon() : load_lexicon(path);
}

ConnectorFactory resolve_connector(const std::string& choice, const std::vector<SimProfile>& profiles) {
  if (choice == "sim") return text_connector_factory(profiles);
  const std::string prefix = "adapter:";
  if (choice.rfind(prefix, 0) == 0 && choice.size() > prefix.size()) {
    return adapter_connector_factory(choice.substr(prefix.size()));
  }
  throw ValidationError("connector", "expected 'sim' or 'adapter:CMD', got '" + choice + "'");
}

Roster roster_from_profiles(const std::vector<SimProfile>& profiles) {
  Roster roster;
  roster.source = "profiles";
  for (const auto& p : profiles) roster.skills.push_back(p.skill);
  roster.validate();
  return roster;
}

void write_corpus(const std::string& path, const std::vector<Session>& corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_sessions_jsonl(out, corpus);
}

std::vector<Session> read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open corpus " + path);
  return read_sessions_jsonl(in);
}

bool failure_threshold_exceeded(const CrawlResult& result, std::ostream& err) {
  const std::size_t attempted = result.attempted();
  if (attempted == 0) return false;
  const double fraction = static_cast<double>(result.connector_failures()) / static_cast<double>(attempted);
  if (fraction <= result.plan.connector_failure_threshold) return false;
  err << "connector failures: " << result.connector_failures() << " of " << attempted
      << " skills exceed the threshold " << result.plan.connector_failure_threshold << '\n';
  return true;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Converses with voice skills, classifies design-guideline compliance, reports rates."};
  app.name("skillprobe");
  app.require_subcommand(1);

  Globals globals;
  auto* seed_opt = app.add_option("--seed", globals.seed, "Seed for generated profiles")->capture_default_str();
  auto* par_opt = app.add_option("--parallelism", globals.parallelism, "Skills crawled concurrently")
                      ->check(CLI::PositiveNumber)
                      ->capture_default_str();
  std::int64_t timeout_value = 0;
  auto* timeout_opt =
      app.add_option("--timeout-ms", timeout_value, "Response timeout, overrides the plan")->check(CLI::NonNegativeNumber);

  std::string roster_path, plan_path, extraction_path, lexicon_path, profiles_path, out_path, corpus_path,
      verdicts_path, format = "markdown", connector = "sim", manifest_path, out_dir;
  int select_k = 0;
  std::size_t generate = 0;
  bool serve = false;

  auto* crawl = app.add_subcommand("crawl", "Run the elicitation protocols over a roster");
  crawl->add_option("--roster", roster_path, "Roster CSV or JSON")->required();
  crawl->add_option("--plan", plan_path, "Elicitation plan JSON");
  crawl->add_option("--extraction", extraction_path, "Command extraction rules JSON");
  crawl->add_option("--connector", connector, "sim | adapter:CMD");
  crawl->add_option("--profiles", profiles_path, "Simulator profiles (sim connector)");
  crawl->add_option("--select-top", select_k, "Keep the top K skills per category")->check(CLI::PositiveNumber);
  crawl->add_option("--manifest", manifest_path, "Crawl manifest output");
  crawl->add_option("--out", out_path, "Corpus output (JSON Lines)")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Classify a corpus into G1-G8 verdicts");
  evaluate->add_option("--corpus", corpus_path, "Corpus JSON Lines")->required();
  evaluate->add_option("--lexicon", lexicon_path, "Marker lexicon JSON");
  evaluate->add_option("--out", out_path, "Verdicts output")->required();

  auto* report = app.add_subcommand("report", "Aggregate verdicts into compliance tables");
  report->add_option("--verdicts", verdicts_path, "Verdicts JSON")->required();
  report->add_option("--roster", roster_path, "Roster CSV or JSON")->required();
  report->add_option("--format", format, "json | csv | markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  report->add_option("--out", out_path, "Output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Expose simulated skills");
  simulate->add_option("--profiles", profiles_path, "Simulator profiles JSON")->required();
  simulate->add_flag("--serve", serve, "Speak the adapter protocol on stdin/stdout");
  simulate->add_option("--out", out_path, "Ground truth output (default stdout)");

  auto* pipeline = app.add_subcommand("pipeline", "crawl, evaluate and report in one go");
  pipeline->add_option("--roster", roster_path, "Roster CSV or JSON (default: the profiles' skills)");
  pipeline->add_option("--profiles", profiles_path, "Simulator profiles JSON");
  pipeline->add_option("--generate", generate, "Generate N random profiles from --seed")->check(CLI::PositiveNumber);
  pipeline->add_option("--plan", plan_path, "Elicitation plan JSON");
  pipeline->add_option("--extraction", extraction_path, "Command extraction rules JSON");
  pipeline->add_option("--lexicon", lexicon_path, "Marker lexicon JSON");
  pipeline->add_option("--connector", connector, "sim | adapter:CMD");
  pipeline->add_option("--select-top", select_k, "Keep the top K skills per category")->check(CLI::PositiveNumber);
  pipeline->add_option("--out-dir", out_dir, "Directory for every artifact")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Defaults defaults = load_defaults();
    fill(globals.seed, seed_opt, defaults.seed);
    fill(globals.parallelism, par_opt, defaults.parallelism);
    if (timeout_opt->count() > 0) {
      globals.timeout_ms = timeout_value;
    } else {
      globals.timeout_ms = defaults.timeout_ms;
    }
    fill_path(plan_path, defaults.plan);
    fill_path(lexicon_path, defaults.lexicon);
    fill_path(extraction_path, defaults.extraction);
    if (defaults.connector && connector == "sim" && !crawl->get_option("--connector")->count() &&
        !pipeline->get_option("--connector")->count()) {
      connector = *defaults.connector;
    }

    auto load_sim_profiles = [&]() -> std::vector<SimProfile> {
      if (profiles_path.empty()) {
        if (connector == "sim") throw ValidationError("profiles", "the sim connector needs --profiles");
        return {};
      }
      return load_profiles(profiles_path);
    };

    if (*crawl) {
      const auto profiles = load_sim_profiles();
      Roster roster = load_roster(roster_path, roster_format_for(roster_path));
      if (select_k > 0) roster = select_top(roster, select_k);
      const ElicitationPlan plan = resolve_plan(plan_path, extraction_path, globals);
      const CrawlResult result = run_crawl(roster, plan, resolve_connector(connector, profiles), globals.parallelism);
      write_corpus(out_path, result.corpus);
      if (!manifest_path.empty()) write_text_file(manifest_path, crawl_manifest(result, globals.seed).dump(2) + "\n");
      return failure_threshold_exceeded(result, err) ? kExitConnectorFailures : kExitOk;
    }

    if (*evaluate) {
      const auto evaluations = evaluate_corpus(read_corpus(corpus_path), resolve_lexicon(lexicon_path));
      write_text_file(out_path, evaluations_to_json(evaluations).dump(2) + "\n");
      return kExitOk;
    }

    if (*report) {
      const Roster roster = load_roster(roster_path, roster_format_for(roster_path));
      const auto built = build_report(load_evaluations(verdicts_path), roster);
      const std::string bytes = emit_report(built, parse_report_format(format));
      if (out_path.empty()) {
        out << bytes;
      } else {
        write_text_file(out_path, bytes);
      }
      return kExitOk;
    }

    if (*simulate) {
      const auto profiles = load_profiles(profiles_path);
      if (serve) {
        serve_profiles(profiles, in, out);
        return kExitOk;
      }
      json truths = json::array();
      for (const auto& p : profiles) {
        const GroundTruth truth = ground_truth(p);
        json verdicts = json::object();
        for (const auto& [g, v] : truth.verdicts) verdicts[std::string(to_string(g))] = std::string(to_string(v));
        truths.push_back(json{{"skill_id", p.skill.id}, {"verdicts", verdicts}, {"goodbye_present", truth.goodbye_present}});
      }
      const std::string bytes = truths.dump(2) + "\n";
      if (out_path.empty()) {
        out << bytes;
      } else {
        write_text_file(out_path, bytes);
      }
      return kExitOk;
    }

    // pipeline
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::vector<SimProfile> profiles;
    if (generate > 0) {
      if (!profiles_path.empty()) throw ValidationError("generate", "use either --generate or --profiles");
      profiles = generate_profiles(generate, globals.seed);
      write_text_file((dir / "profiles.json").string(), profiles_to_json(profiles).dump(2) + "\n");
    } else {
      profiles = load_sim_profiles();
    }
    Roster roster;
    if (!roster_path.empty()) {
      roster = load_roster(roster_path, roster_format_for(roster_path));
    } else if (!profiles.empty()) {
      roster = roster_from_profiles(profiles);
      write_text_file((dir / "roster.csv").string(), roster_to_csv(roster));
    } else {
      throw ValidationError("roster", "pipeline needs --roster, --profiles or --generate");
    }
    if (select_k > 0) roster = select_top(roster, select_k);

    const ElicitationPlan plan = resolve_plan(plan_path, extraction_path, globals);
    const CrawlResult result = run_crawl(roster, plan, resolve_connector(connector, profiles), globals.parallelism);
    write_corpus((dir / "corpus.jsonl").string(), result.corpus);
    write_text_file((dir / "manifest.json").string(), crawl_manifest(result, globals.seed).dump(2) + "\n");

    const auto evaluations = evaluate_corpus(result.corpus, resolve_lexicon(lexicon_path));
    write_text_file((dir / "verdicts.json").string(), evaluations_to_json(evaluations).dump(2) + "\n");

    if (!reportable(evaluations, &roster).empty()) {
      const auto built = build_report(evaluations, roster);
      write_text_file((dir / "report.json").string(), emit_report(built, ReportFormat::json));
      write_text_file((dir / "report.csv").string(), emit_report(built, ReportFormat::csv));
      write_text_file((dir / "report.md").string(), emit_report(built, ReportFormat::markdown));
    } else {
      err << "no skill left to report on\n";
    }
    return failure_threshold_exceeded(result, err) ? kExitConnectorFailures : kExitOk;
  } catch (const std::exception& e) {
    // Parse, validation and precondition failures all stem from the input.
    err << "error: " << e.what() << '\n';
  }
  return kExitInvalidInput;
}

}  // namespace skillprobe
