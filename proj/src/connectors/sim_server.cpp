#include "skillprobe/connectors/sim_server.hpp"

#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <string>

#include "skillprobe/connectors/text_connector.hpp"
#include "skillprobe/connectors/wire.hpp"
#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

wire::Reply to_reply(const ConnectorEvent& event) {
  wire::Reply r;
  switch (event.kind) {
    case EventKind::response:
      r.type = wire::Reply::Type::response;
      r.text = event.text;
      r.confidence = event.confidence;
      break;
    case EventKind::silence:
      r.type = wire::Reply::Type::silence;
      break;
    case EventKind::closed:
      r.type = wire::Reply::Type::closed;
      r.text = event.detail;
      break;
    case EventKind::error:
      r.type = wire::Reply::Type::error;
      r.detail = event.detail;
      break;
  }
  return r;
}

wire::Reply error_reply(std::string detail) {
  wire::Reply r;
  r.type = wire::Reply::Type::error;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

void serve_profiles(const std::vector<SimProfile>& profiles, std::istream& in, std::ostream& out) {
  std::map<std::string, std::unique_ptr<TextConnector>> skills;
  for (const auto& p : profiles) {
    skills.emplace(normalize(p.skill.invocation_name), std::make_unique<TextConnector>(p));
  }
  TextConnector* current = nullptr;
  SessionHandle handle;

  auto send = [&out](const wire::Reply& reply) { out << wire::encode(reply) << '\n' << std::flush; };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    wire::Request request;
    try {
      request = wire::decode_request(line);
    } catch (const ParseError& e) {
      send(error_reply(e.what()));
      continue;
    }

    switch (request.type) {
      case wire::RequestType::open: {
        auto it = skills.find(normalize(request.invocation));
        if (it == skills.end()) {
          send(error_reply("unknown skill '" + request.invocation + "'"));
          break;
        }
        if (current && handle.is_open()) current->close(handle);
        current = it->second.get();
        if (request.stage) current->signal_stage(*request.stage);
        auto [h, event] = current->open_session(request.invocation, request.timeout);
        handle = h;
        wire::Reply reply = to_reply(event);
        if (event.kind == EventKind::response && !handle.is_open()) {
          reply.type = wire::Reply::Type::closed;
          reply.confidence.reset();
        }
        send(reply);
        break;
      }
      case wire::RequestType::say:
        if (!current || !handle.is_open()) {
          send(error_reply("no open session"));
          break;
        }
        send(to_reply(current->say(handle, request.text, request.timeout)));
        break;
      case wire::RequestType::wait:
        if (!current || !handle.is_open()) {
          send(error_reply("no open session"));
          break;
        }
        send(to_reply(current->wait_silence(handle, request.timeout)));
        break;
      case wire::RequestType::close:
        if (current && handle.is_open()) current->close(handle);
        send(to_reply(ConnectorEvent::closed()));
        return;
    }
  }
}

}  // namespace skillprobe
