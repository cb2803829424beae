#pragma once

#include <functional>
#include <string>

#include "skillprobe/connectors/connector.hpp"
#include "skillprobe/simulator/simulator.hpp"

namespace skillprobe {

// In-process connector driving one simulated skill. Events are a pure
// function of (profile, call sequence); every event has elapsed 0 and
// confidence 1.0.
class TextConnector : public Connector {
 public:
  // Applied to every text the skill speaks (responses and final words),
  // standing in for transcription noise.
  using Perturbation = std::function<std::string(const std::string&)>;

  explicit TextConnector(SimProfile profile, Perturbation perturb = {});

  std::pair<SessionHandle, ConnectorEvent> open_session(std::string_view invocation_name,
                                                        Millis timeout) override;
  ConnectorEvent say(SessionHandle& handle, std::string_view text, Millis timeout) override;
  ConnectorEvent wait_silence(SessionHandle& handle, Millis timeout) override;
  void close(SessionHandle& handle) override;
  void signal_stage(Stage stage) override;

  const SimState& state() const { return state_; }
  const SimProfile& profile() const { return profile_; }

 private:
  void require_current(const SessionHandle& handle) const;
  ConnectorEvent feed(const SimInput& input);

  SimProfile profile_;
  Perturbation perturb_;
  SimState state_;
  std::uint64_t current_id_ = 0;
};

// Connector factory serving each roster skill from the profile with the same
// id. Throws ValidationError for a skill without a profile.
ConnectorFactory text_connector_factory(std::vector<SimProfile> profiles,
                                        TextConnector::Perturbation perturb = {});

}  // namespace skillprobe
