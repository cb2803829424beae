#include "skillprobe/connectors/wire.hpp"

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/serialization.hpp"

namespace skillprobe {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::response:
      return "response";
    case EventKind::silence:
      return "silence";
    case EventKind::closed:
      return "closed";
    case EventKind::error:
      break;
  }
  return "error";
}

ConnectorEvent ConnectorEvent::response(std::string text, std::optional<double> confidence) {
  ConnectorEvent e;
  e.kind = EventKind::response;
  e.text = std::move(text);
  e.confidence = confidence;
  return e;
}

ConnectorEvent ConnectorEvent::silence() { return ConnectorEvent{}; }

ConnectorEvent ConnectorEvent::closed(std::optional<std::string> final_text) {
  ConnectorEvent e;
  e.kind = EventKind::closed;
  e.detail = std::move(final_text);
  return e;
}

ConnectorEvent ConnectorEvent::error(std::string detail) {
  ConnectorEvent e;
  e.kind = EventKind::error;
  e.detail = std::move(detail);
  return e;
}

namespace wire {

std::string encode(const Request& request) {
  json j;
  switch (request.type) {
    case RequestType::open:
      j = {{"type", "open"},
           {"invocation", request.invocation},
           {"timeout_ms", request.timeout.count()}};
      if (request.stage) j["stage"] = std::string(to_string(*request.stage));
      break;
    case RequestType::say:
      j = {{"type", "say"}, {"text", request.text}, {"timeout_ms", request.timeout.count()}};
      break;
    case RequestType::wait:
      j = {{"type", "wait"}, {"timeout_ms", request.timeout.count()}};
      break;
    case RequestType::close:
      j = {{"type", "close"}};
      break;
  }
  return j.dump();
}

Request decode_request(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed request: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ParseError("request must be an object with a string \"type\"");
  }
  Request r;
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "open") {
      r.type = RequestType::open;
      r.invocation = j.at("invocation").get<std::string>();
      if (j.contains("stage") && j.at("stage").is_string()) {
        r.stage = parse_stage(j.at("stage").get<std::string>());
      }
    } else if (type == "say") {
      r.type = RequestType::say;
      r.text = j.at("text").get<std::string>();
    } else if (type == "wait") {
      r.type = RequestType::wait;
    } else if (type == "close") {
      r.type = RequestType::close;
    } else {
      throw ParseError("unknown request type '" + type + "'");
    }
    r.timeout = Millis(j.value("timeout_ms", std::int64_t{0}));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed request: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("malformed request: ") + e.what());
  }
  return r;
}

std::string encode(const Reply& reply) {
  json j;
  switch (reply.type) {
    case Reply::Type::response:
      j = {{"type", "response"},
           {"text", reply.text.value_or("")},
           {"confidence", reply.confidence.value_or(1.0)}};
      break;
    case Reply::Type::silence:
      j = {{"type", "silence"}};
      break;
    case Reply::Type::closed:
      j = {{"type", "closed"}};
      if (reply.text) j["text"] = *reply.text;
      break;
    case Reply::Type::error:
      j = {{"type", "error"}, {"detail", reply.detail.value_or("")}};
      break;
  }
  return j.dump();
}

Reply decode_reply(std::string_view line) {
  auto bad = [](std::string why) {
    Reply r;
    r.type = Reply::Type::error;
    r.detail = "malformed adapter reply: " + std::move(why);
    return r;
  };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    return bad(e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    return bad("expected an object with a string \"type\"");
  }
  const auto type = j.at("type").get<std::string>();
  Reply r;
  if (type == "response") {
    if (!j.contains("text") || !j.at("text").is_string()) return bad("response without text");
    r.type = Reply::Type::response;
    r.text = j.at("text").get<std::string>();
    if (j.contains("confidence")) {
      if (!j.at("confidence").is_number()) return bad("confidence is not a number");
      const double c = j.at("confidence").get<double>();
      if (!(c >= 0.0 && c <= 1.0)) return bad("confidence outside [0, 1]");
      r.confidence = c;
    }
  } else if (type == "silence") {
    r.type = Reply::Type::silence;
  } else if (type == "closed") {
    r.type = Reply::Type::closed;
    if (j.contains("text") && !j.at("text").is_null()) {
      if (!j.at("text").is_string()) return bad("closed text is not a string");
      r.text = j.at("text").get<std::string>();
    }
  } else if (type == "error") {
    r.type = Reply::Type::error;
    r.detail = j.contains("detail") && j.at("detail").is_string()
                   ? j.at("detail").get<std::string>()
                   : std::string("adapter reported an error");
  } else {
    return bad("unknown reply type '" + type + "'");
  }
  return r;
}

}  // namespace wire
}  // namespace skillprobe
