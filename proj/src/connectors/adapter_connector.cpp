#include "skillprobe/connectors/adapter_connector.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "skillprobe/core/error.hpp"

namespace skillprobe {

namespace {

constexpr std::size_t kMaxLine = 1 << 20;

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

wire::Reply transport_error(std::string detail) {
  wire::Reply r;
  r.type = wire::Reply::Type::error;
  r.detail = std::move(detail);
  return r;
}

ConnectorEvent event_from(const wire::Reply& reply) {
  switch (reply.type) {
    case wire::Reply::Type::response:
      return ConnectorEvent::response(reply.text.value_or(""), reply.confidence);
    case wire::Reply::Type::silence:
      return ConnectorEvent::silence();
    case wire::Reply::Type::closed:
      return ConnectorEvent::closed(reply.text);
    case wire::Reply::Type::error:
      break;
  }
  return ConnectorEvent::error(reply.detail.value_or("adapter error"));
}

}  // namespace

AdapterConnector::AdapterConnector(std::string command, Millis grace)
    : command_(std::move(command)), grace_(grace) {}

AdapterConnector::~AdapterConnector() {
  if (pid_ > 0) {
    Millis elapsed{0};
    exchange(wire::Request{wire::RequestType::close, {}, {}, Millis{0}, {}}, Millis{0}, elapsed);
  }
  terminate();
}

bool AdapterConnector::spawn(std::string& error) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) {
    error = std::string("pipe: ") + std::strerror(errno);
    return false;
  }
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    error = std::string("pipe: ") + std::strerror(errno);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    return false;
  }
  const pid_t pid = fork();
  if (pid < 0) {
    error = std::string("fork: ") + std::strerror(errno);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    return false;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
  return true;
}

void AdapterConnector::terminate() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    // Give a well-behaved adapter a moment to exit on its own.
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 20 && !reaped; ++i) {
      const pid_t r = waitpid(pid_, &status, WNOHANG);
      reaped = r == pid_ || r < 0;
      if (!reaped) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!reaped) {
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
    }
  }
  pid_ = -1;
  buffer_.clear();
}

bool AdapterConnector::write_line(const std::string& line) {
  std::string data = line + '\n';
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(to_child_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  return true;
}

std::optional<std::string> AdapterConnector::read_line(Millis budget, std::string& error) {
  const auto deadline = Clock::now() + budget;
  while (true) {
    if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (buffer_.size() > kMaxLine) {
      error = "adapter reply line too long";
      return std::nullopt;
    }
    const auto left = std::chrono::duration_cast<Millis>(deadline - Clock::now()).count();
    if (left <= 0) {
      error = "adapter reply timed out";
      return std::nullopt;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      error = std::string("poll: ") + std::strerror(errno);
      return std::nullopt;
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      error = std::string("read: ") + std::strerror(errno);
      return std::nullopt;
    }
    if (n == 0) {
      error = "adapter closed its output";
      return std::nullopt;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

wire::Reply AdapterConnector::exchange(const wire::Request& request, Millis timeout, Millis& elapsed) {
  const auto start = Clock::now();
  auto finish = [&](wire::Reply reply) {
    elapsed = std::min(timeout, std::chrono::duration_cast<Millis>(Clock::now() - start));
    if (elapsed.count() < 0) elapsed = Millis{0};
    return reply;
  };
  if (pid_ <= 0) return finish(transport_error("adapter not running"));
  if (!write_line(wire::encode(request))) {
    terminate();
    return finish(transport_error("adapter stopped accepting input"));
  }
  std::string error;
  auto line = read_line(timeout + grace_, error);
  if (!line) {
    terminate();
    return finish(transport_error(error));
  }
  return finish(wire::decode_reply(*line));
}

void AdapterConnector::require_current(const SessionHandle& handle) const {
  if (!handle.is_open()) throw PreconditionError("session handle is closed");
  if (handle.id != current_id_) throw PreconditionError("session handle is stale");
}

std::pair<SessionHandle, ConnectorEvent> AdapterConnector::open_session(std::string_view invocation_name,
                                                                        Millis timeout) {
  SessionHandle handle{++current_id_, HandleState::closed};
  if (pid_ <= 0) {
    std::string error;
    if (!spawn(error)) return {handle, ConnectorEvent::error(error)};
  }
  wire::Request request{wire::RequestType::open, std::string(invocation_name), {}, timeout,
                        pending_stage_};
  pending_stage_.reset();
  Millis elapsed{0};
  const wire::Reply reply = exchange(request, timeout, elapsed);
  ConnectorEvent event = event_from(reply);
  if (reply.type == wire::Reply::Type::response || reply.type == wire::Reply::Type::silence) {
    handle.state = HandleState::open;
  } else if (reply.type == wire::Reply::Type::closed && reply.text) {
    // Answered and exited: a one-shot skill.
    event = ConnectorEvent::response(*reply.text, reply.confidence);
  }
  event.elapsed = elapsed;
  return {handle, event};
}

ConnectorEvent AdapterConnector::say(SessionHandle& handle, std::string_view text, Millis timeout) {
  require_current(handle);
  Millis elapsed{0};
  const wire::Reply reply =
      exchange(wire::Request{wire::RequestType::say, {}, std::string(text), timeout, {}}, timeout, elapsed);
  ConnectorEvent event = event_from(reply);
  if (event.kind == EventKind::closed || event.kind == EventKind::error) {
    handle.state = HandleState::closed;
  }
  event.elapsed = elapsed;
  return event;
}

ConnectorEvent AdapterConnector::wait_silence(SessionHandle& handle, Millis timeout) {
  require_current(handle);
  if (timeout.count() <= 0) return ConnectorEvent::silence();
  Millis elapsed{0};
  const wire::Reply reply =
      exchange(wire::Request{wire::RequestType::wait, {}, {}, timeout, {}}, timeout, elapsed);
  ConnectorEvent event = event_from(reply);
  if (event.kind == EventKind::closed || event.kind == EventKind::error) {
    handle.state = HandleState::closed;
  }
  event.elapsed = elapsed;
  return event;
}

void AdapterConnector::close(SessionHandle& handle) {
  if (!handle.is_open()) return;
  handle.state = HandleState::closed;
  if (handle.id != current_id_ || pid_ <= 0) return;
  Millis elapsed{0};
  exchange(wire::Request{wire::RequestType::close, {}, {}, Millis{0}, {}}, Millis{0}, elapsed);
  terminate();
}

void AdapterConnector::signal_stage(Stage stage) { pending_stage_ = stage; }

ConnectorFactory adapter_connector_factory(std::string command) {
  return [command](const SkillDescriptor&) -> std::unique_ptr<Connector> {
    return std::make_unique<AdapterConnector>(command);
  };
}

}  // namespace skillprobe
