#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "skillprobe/core/types.hpp"

namespace skillprobe {

using json = nlohmann::json;

void to_json(json& j, const SkillDescriptor& s);
void from_json(const json& j, SkillDescriptor& s);

void to_json(json& j, const Utterance& u);
Utterance utterance_from_json(const json& j);

// command: Utterance object or the string "SILENCE"; response: Utterance
// object or the string "NO_RESPONSE".
void to_json(json& j, const Turn& t);
void from_json(const json& j, Turn& t);

void to_json(json& j, const Session& s);
void from_json(const json& j, Session& s);

void to_json(json& j, const Evidence& e);
void from_json(const json& j, Evidence& e);

void to_json(json& j, const GuidelineVerdict& v);
void from_json(const json& j, GuidelineVerdict& v);

// Session corpora: JSON Lines, one session per line.
void write_sessions_jsonl(std::ostream& out, const std::vector<Session>& sessions);
std::vector<Session> read_sessions_jsonl(std::istream& in);

// Reads a whole JSON document; throws ParseError with the path on failure.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace skillprobe
