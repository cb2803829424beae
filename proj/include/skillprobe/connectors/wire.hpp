#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "skillprobe/connectors/connector.hpp"

namespace skillprobe::wire {

// Line-delimited JSON spoken with an adapter process over its standard
// streams. One reply line per request line; unknown fields are ignored.
//
//   harness -> adapter
//     {"type":"open","invocation":S,"timeout_ms":N}   (optional "stage":S)
//     {"type":"say","text":S,"timeout_ms":N}
//     {"type":"wait","timeout_ms":N}
//     {"type":"close"}
//   adapter -> harness
//     {"type":"response","text":S,"confidence":F}
//     {"type":"silence"}
//     {"type":"closed","text":S?}
//     {"type":"error","detail":S}

enum class RequestType { open, say, wait, close };

struct Request {
  RequestType type = RequestType::close;
  std::string invocation;  // open
  std::string text;        // say
  Millis timeout{0};
  // Extension read by the bundled simulator server; other adapters ignore it.
  std::optional<Stage> stage;
};

std::string encode(const Request& request);
// Throws ParseError on malformed JSON, a missing field or an unknown type.
Request decode_request(std::string_view line);

struct Reply {
  enum class Type { response, silence, closed, error } type = Type::silence;
  std::optional<std::string> text;
  std::optional<double> confidence;
  std::optional<std::string> detail;
};

std::string encode(const Reply& reply);
// Never throws: anything that is not one of the four reply shapes decodes to
// an error reply describing the problem.
Reply decode_reply(std::string_view line);

}  // namespace skillprobe::wire
