#include "skillprobe/core/serialization.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "skillprobe/core/error.hpp"

namespace skillprobe {

namespace {

constexpr const char* kSilence = "SILENCE";
constexpr const char* kNoResponse = "NO_RESPONSE";

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const SkillDescriptor& s) {
  j = json{{"id", s.id},
           {"display_name", s.display_name},
           {"invocation_name", s.invocation_name},
           {"category", std::string(to_string(s.category))},
           {"subcategory", optional_to_json(s.subcategory)},
           {"review_count", s.review_count},
           {"avg_rating", optional_to_json(s.avg_rating)},
           {"excluded_reason", optional_to_json(s.excluded_reason)}};
}

void from_json(const json& j, SkillDescriptor& s) {
  s.id = j.at("id").get<std::string>();
  s.display_name = j.value("display_name", std::string{});
  s.invocation_name = j.at("invocation_name").get<std::string>();
  s.category = parse_category(j.at("category").get<std::string>());
  s.subcategory = optional_from_json<std::string>(j, "subcategory");
  s.review_count = j.value("review_count", std::int64_t{0});
  s.avg_rating = optional_from_json<double>(j, "avg_rating");
  s.excluded_reason = optional_from_json<std::string>(j, "excluded_reason");
  s.validate();
}

void to_json(json& j, const Utterance& u) {
  j = json{{"role", u.role() == Role::crawler ? "crawler" : "skill"},
           {"text", u.text()},
           {"normalized_text", u.normalized_text()},
           {"timestamp", u.timestamp()}};
  if (u.confidence()) j["confidence"] = *u.confidence();
}

Utterance utterance_from_json(const json& j) {
  const auto role_name = j.at("role").get<std::string>();
  Role role;
  if (role_name == "crawler") {
    role = Role::crawler;
  } else if (role_name == "skill") {
    role = Role::skill;
  } else {
    throw ValidationError("role", "unknown value '" + role_name + "'");
  }
  // normalized_text is derived, so the stored copy is ignored.
  return Utterance(role, j.at("text").get<std::string>(), optional_from_json<double>(j, "confidence"),
                   j.value("timestamp", std::int64_t{0}));
}

void to_json(json& j, const Turn& t) {
  j = json{{"command", t.command ? json(*t.command) : json(kSilence)},
           {"response", t.response ? json(*t.response) : json(kNoResponse)},
           {"wait_elapsed", t.wait_elapsed.count()}};
}

void from_json(const json& j, Turn& t) {
  const auto& cmd = j.at("command");
  t.command = cmd.is_string() && cmd.get<std::string>() == kSilence
                  ? std::nullopt
                  : std::optional<Utterance>(utterance_from_json(cmd));
  const auto& resp = j.at("response");
  t.response = resp.is_string() && resp.get<std::string>() == kNoResponse
                   ? std::nullopt
                   : std::optional<Utterance>(utterance_from_json(resp));
  t.wait_elapsed = Millis(j.value("wait_elapsed", std::int64_t{0}));
}

void to_json(json& j, const Session& s) {
  j = json{{"skill_id", s.skill_id},
           {"probe", std::string(to_string(s.probe))},
           {"run_index", s.run_index},
           {"stage", std::string(to_string(s.stage))},
           {"turns", s.turns()},
           {"termination", std::string(to_string(s.termination))},
           {"unsent_commands", s.unsent_commands}};
}

void from_json(const json& j, Session& s) {
  s = Session(j.at("skill_id").get<std::string>(), parse_probe(j.at("probe").get<std::string>()),
              j.at("run_index").get<int>(), parse_stage(j.at("stage").get<std::string>()));
  for (const auto& t : j.at("turns")) s.append(t.get<Turn>());
  s.termination = parse_termination(j.at("termination").get<std::string>());
  s.unsent_commands = j.value("unsent_commands", std::vector<std::string>{});
  s.validate();
}

void to_json(json& j, const Evidence& e) {
  j = json{{"probe", std::string(to_string(e.session.probe))},
           {"run_index", e.session.run_index},
           {"turn", e.turn}};
}

void from_json(const json& j, Evidence& e) {
  e.session.probe = parse_probe(j.at("probe").get<std::string>());
  e.session.run_index = j.at("run_index").get<int>();
  e.turn = j.at("turn").get<int>();
}

void to_json(json& j, const GuidelineVerdict& v) {
  j = json{{"guideline", std::string(to_string(v.guideline))},
           {"feature_group", std::string(to_string(feature_group(v.guideline)))},
           {"verdict", std::string(to_string(v.verdict))},
           {"facets", v.facets},
           {"evidence", v.evidence},
           {"note", v.note}};
}

void from_json(const json& j, GuidelineVerdict& v) {
  v.guideline = parse_guideline(j.at("guideline").get<std::string>());
  v.verdict = parse_verdict(j.at("verdict").get<std::string>());
  v.facets = j.value("facets", std::map<std::string, bool>{});
  v.evidence = j.value("evidence", std::vector<Evidence>{});
  v.note = j.value("note", std::string{});
  v.validate();
}

void write_sessions_jsonl(std::ostream& out, const std::vector<Session>& sessions) {
  for (const auto& s : sessions) out << json(s).dump() << '\n';
}

std::vector<Session> read_sessions_jsonl(std::istream& in) {
  std::vector<Session> sessions;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      sessions.push_back(json::parse(line).get<Session>());
    } catch (const json::exception& e) {
      throw ParseError(e.what(), row);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), row);
    }
  }
  return sessions;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace skillprobe
