#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "skillprobe/core/types.hpp"

namespace skillprobe {

enum class EventKind { response, silence, closed, error };
std::string_view to_string(EventKind k);

// What the skill did in reply to one harness action.
struct ConnectorEvent {
  EventKind kind = EventKind::silence;
  // Present iff kind == response.
  std::optional<std::string> text;
  std::optional<double> confidence;
  // closed: the skill's final words, if any. error: what went wrong.
  std::optional<std::string> detail;
  // Time spent waiting for this event, never more than the requested timeout.
  Millis elapsed{0};

  static ConnectorEvent response(std::string text, std::optional<double> confidence = 1.0);
  static ConnectorEvent silence();
  static ConnectorEvent closed(std::optional<std::string> final_text = std::nullopt);
  static ConnectorEvent error(std::string detail);

  bool operator==(const ConnectorEvent&) const = default;
};

enum class HandleState { open, closed };

struct SessionHandle {
  std::uint64_t id = 0;
  HandleState state = HandleState::closed;

  bool is_open() const { return state == HandleState::open; }
};

// Session-oriented access to one skill. A connector instance carries the
// skill's whole lineage of sessions, so skill-side state (first use, setup,
// exploration) persists from one open_session to the next.
//
// Single consumer: no concurrent calls on one instance. Distinct instances
// are independent.
class Connector {
 public:
  virtual ~Connector() = default;

  // Invokes the skill. A one-shot skill answers and exits at once: the
  // returned event is its response and the handle is already closed.
  virtual std::pair<SessionHandle, ConnectorEvent> open_session(std::string_view invocation_name,
                                                                Millis timeout) = 0;

  // Throws PreconditionError when the handle is closed.
  virtual ConnectorEvent say(SessionHandle& handle, std::string_view text, Millis timeout) = 0;

  // Stays silent and reports whether the skill re-prompts. Throws
  // PreconditionError when the handle is closed.
  virtual ConnectorEvent wait_silence(SessionHandle& handle, Millis timeout) = 0;

  // Abandons an open session without saying anything. No-op when closed.
  virtual void close(SessionHandle& handle) = 0;

  // Tells the skill side which stage the next session belongs to. Real
  // adapters may ignore it; the simulator marks account setup or full
  // exploration as done.
  virtual void signal_stage(Stage) {}
};

using ConnectorFactory = std::function<std::unique_ptr<Connector>(const SkillDescriptor&)>;

}  // namespace skillprobe
