#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <utility>

#include "posttitle/error.hpp"
#include "posttitle/generator.hpp"
#include "posttitle/protocol.hpp"

namespace posttitle {

namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

// Speaks the line protocol with a child started through /bin/sh -c. The
// child's stdin and stdout are both bound to one end of a socketpair so
// writes to a dead child fail with EPIPE instead of raising SIGPIPE.
class ProcessGenerator final : public Generator {
 public:
  ProcessGenerator(std::string command, std::chrono::milliseconds timeout)
      : command_(std::move(command)), timeout_(timeout) {}

  ~ProcessGenerator() override { stop(); }

  ProcessGenerator(const ProcessGenerator&) = delete;
  ProcessGenerator& operator=(const ProcessGenerator&) = delete;

  GenerationResponse generate(const GenerationRequest& request) override {
    if (request.num_candidates < 1) throw InvalidArg("num_candidates must be >= 1");
    if (fd_ < 0) start();
    // Any failure leaves the stream in an unknown state; the next request
    // gets a fresh child.
    try {
      const auto deadline = Clock::now() + timeout_;
      write_line(protocol::serialize(
                     protocol::Request{request.post_id, request.input,
                                       request.num_candidates}),
                 deadline);
      auto response = protocol::parse_response(read_line(deadline));
      if (response.id != request.post_id) {
        throw ProtocolError("response id '" + response.id + "' does not match request '" +
                            request.post_id + "'");
      }
      if (response.error) {
        throw GeneratorUnavailable("generator failed on '" + request.post_id +
                                   "': " + *response.error);
      }
      return {sanitize_candidates(std::move(response.candidates), request.num_candidates),
              id()};
    } catch (const Error&) {
      stop();
      throw;
    }
  }

  std::string id() const override { return "external-process:" + command_; }

 private:
  void start() {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw GeneratorUnavailable(errno_text("socketpair"));
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
      const auto msg = errno_text("fork");
      ::close(fds[0]);
      ::close(fds[1]);
      throw GeneratorUnavailable(msg);
    }
    if (pid == 0) {
      // Own process group, so a kill also reaches whatever the shell spawned.
      ::setpgid(0, 0);
      // dup2 clears FD_CLOEXEC on the targets.
      if (::dup2(fds[1], STDIN_FILENO) < 0 || ::dup2(fds[1], STDOUT_FILENO) < 0) {
        ::_exit(127);
      }
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(fds[1]);
    fd_ = fds[0];
    pid_ = pid;
    buffer_.clear();
  }

  void stop() noexcept {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
    if (pid_ > 0) {
      // Closing the socket is the shutdown signal; give the child a moment.
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
          pid_ = -1;
          return;
        }
        ::usleep(10'000);
      }
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
    buffer_.clear();
  }

  int remaining_ms(Clock::time_point deadline) const {
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    return left.count() > 0 ? static_cast<int>(left.count()) : 0;
  }

  void wait_for(short events, Clock::time_point deadline) {
    while (true) {
      pollfd pfd{fd_, events, 0};
      const int rc = ::poll(&pfd, 1, remaining_ms(deadline));
      if (rc > 0) return;
      if (rc == 0) {
        throw Timeout("generator did not answer within " +
                      std::to_string(timeout_.count()) + " ms");
      }
      if (errno != EINTR) throw GeneratorUnavailable(errno_text("poll"));
    }
  }

  void write_line(std::string line, Clock::time_point deadline) {
    line += '\n';
    std::size_t sent = 0;
    while (sent < line.size()) {
      wait_for(POLLOUT, deadline);
      const auto n = ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw GeneratorUnavailable(errno_text("generator process is not accepting input"));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Clock::time_point deadline) {
    while (true) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      wait_for(POLLIN, deadline);
      char chunk[4096];
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n == 0) throw GeneratorUnavailable("generator process closed its output");
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw GeneratorUnavailable(errno_text("reading generator output"));
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  std::string command_;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
  pid_t pid_ = -1;
  std::string buffer_;
};

}  // namespace

std::unique_ptr<Generator> make_process_generator(std::string command,
                                                  std::chrono::milliseconds timeout) {
  if (command.empty()) throw InvalidArg("external-process generator needs a command");
  return std::make_unique<ProcessGenerator>(std::move(command), timeout);
}

}  // namespace posttitle
