#pragma once

#include <optional>
#include <string>
#include <sys/types.h>

#include "skillprobe/connectors/connector.hpp"
#include "skillprobe/connectors/wire.hpp"

namespace skillprobe {

// Client side of the adapter wire protocol. The adapter is `/bin/sh -c
// command`, started on the first open_session and kept alive across sessions
// so it can hold the skill's state. A reply that misses its deadline
// (request timeout plus a grace period), end of stream or a write failure
// yields an error event and kills the process; the next open_session starts
// a fresh one.
class AdapterConnector : public Connector {
 public:
  explicit AdapterConnector(std::string command, Millis grace = Millis{1000});
  ~AdapterConnector() override;

  AdapterConnector(const AdapterConnector&) = delete;
  AdapterConnector& operator=(const AdapterConnector&) = delete;

  std::pair<SessionHandle, ConnectorEvent> open_session(std::string_view invocation_name,
                                                        Millis timeout) override;
  ConnectorEvent say(SessionHandle& handle, std::string_view text, Millis timeout) override;
  ConnectorEvent wait_silence(SessionHandle& handle, Millis timeout) override;
  // Sends {"type":"close"}; the adapter exits afterwards.
  void close(SessionHandle& handle) override;
  // Forwarded with the next open request.
  void signal_stage(Stage stage) override;

  bool running() const { return pid_ > 0; }

 private:
  bool spawn(std::string& error);
  void terminate();
  // One request, one reply. Transport failures come back as error replies
  // and leave the process terminated.
  wire::Reply exchange(const wire::Request& request, Millis timeout, Millis& elapsed);
  bool write_line(const std::string& line);
  std::optional<std::string> read_line(Millis budget, std::string& error);
  void require_current(const SessionHandle& handle) const;

  std::string command_;
  Millis grace_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::optional<Stage> pending_stage_;
  std::uint64_t current_id_ = 0;
};

// "adapter:CMD" connectors, one process per skill.
ConnectorFactory adapter_connector_factory(std::string command);

}  // namespace skillprobe
