#include "skillprobe/connectors/text_connector.hpp"

#include <map>
#include <memory>

#include "skillprobe/core/error.hpp"

namespace skillprobe {

TextConnector::TextConnector(SimProfile profile, Perturbation perturb)
    : profile_(std::move(profile)), perturb_(std::move(perturb)), state_(initial_state(profile_)) {
  profile_.validate();
}

ConnectorEvent TextConnector::feed(const SimInput& input) {
  auto [event, next] = step(profile_, state_, input);
  state_ = std::move(next);
  if (perturb_) {
    if (event.text) event.text = perturb_(*event.text);
    if (event.kind == EventKind::closed && event.detail) event.detail = perturb_(*event.detail);
  }
  return event;
}

void TextConnector::require_current(const SessionHandle& handle) const {
  if (!handle.is_open()) throw PreconditionError("session handle is closed");
  if (handle.id != current_id_) throw PreconditionError("session handle is stale");
}

std::pair<SessionHandle, ConnectorEvent> TextConnector::open_session(std::string_view invocation_name,
                                                                     Millis) {
  if (state_.session_open) feed(SimInput::hang_up());
  SessionHandle handle{++current_id_, HandleState::open};
  ConnectorEvent event = feed(SimInput::speech("open " + std::string(invocation_name)));
  if (!state_.session_open) handle.state = HandleState::closed;
  return {handle, event};
}

ConnectorEvent TextConnector::say(SessionHandle& handle, std::string_view text, Millis) {
  require_current(handle);
  ConnectorEvent event = feed(SimInput::speech(std::string(text)));
  if (!state_.session_open) handle.state = HandleState::closed;
  return event;
}

ConnectorEvent TextConnector::wait_silence(SessionHandle& handle, Millis timeout) {
  require_current(handle);
  if (timeout.count() <= 0) return ConnectorEvent::silence();
  ConnectorEvent event = feed(SimInput::silence());
  if (!state_.session_open) handle.state = HandleState::closed;
  return event;
}

void TextConnector::close(SessionHandle& handle) {
  if (!handle.is_open()) return;
  if (handle.id == current_id_ && state_.session_open) feed(SimInput::hang_up());
  handle.state = HandleState::closed;
}

void TextConnector::signal_stage(Stage stage) { feed(SimInput::signal(stage)); }

ConnectorFactory text_connector_factory(std::vector<SimProfile> profiles,
                                        TextConnector::Perturbation perturb) {
  auto by_id = std::make_shared<std::map<std::string, SimProfile>>();
  for (auto& p : profiles) {
    const std::string id = p.skill.id;
    by_id->insert_or_assign(id, std::move(p));
  }
  return [by_id, perturb](const SkillDescriptor& skill) -> std::unique_ptr<Connector> {
    auto it = by_id->find(skill.id);
    if (it == by_id->end()) throw ValidationError("id", "no simulator profile for skill '" + skill.id + "'");
    return std::make_unique<TextConnector>(it->second, perturb);
  };
}

}  // namespace skillprobe
