#include "dancer/adapter.hpp"

#include <csignal>
#include <cstring>
#include <mutex>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace dancer {

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

using Clock = std::chrono::steady_clock;

}  // namespace

struct AdapterProcess::Impl {
  pid_t pid = -1;
  int to_child = -1;    // our write end of the child's stdin
  int from_child = -1;  // our read end of the child's stdout
  std::string buffer;   // bytes read past the last returned line
  int exit_status = -1;
  bool reaped = false;

  void close_fd(int& fd) {
    if (fd >= 0) {
      ::close(fd);
      fd = -1;
    }
  }
};

AdapterProcess::AdapterProcess(std::string command, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>()), command_(std::move(command)), timeout_(timeout) {
  ignore_sigpipe_once();

  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (::pipe(in_pipe) != 0) throw AdapterError("adapter spawn: pipe failed");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw AdapterError("adapter spawn: pipe failed");
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw AdapterError("adapter spawn: fork failed");
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  impl_->pid = pid;
  impl_->to_child = in_pipe[1];
  impl_->from_child = out_pipe[0];
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
}

AdapterProcess::~AdapterProcess() {
  if (impl_) close();
}

bool AdapterProcess::running() const { return impl_ && impl_->pid > 0 && !impl_->reaped; }

namespace {

void write_all(int fd, std::string_view data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw AdapterError(std::string("adapter write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

}  // namespace

std::string AdapterProcess::exchange(std::string_view id, std::string_view source) {
  if (!running()) throw AdapterError("adapter process is not running");

  nlohmann::json request;
  request["id"] = std::string(id);
  request["source"] = std::string(source);
  std::string line = request.dump();
  line.push_back('\n');
  write_all(impl_->to_child, line);

  const auto deadline = Clock::now() + timeout_;
  std::string response;
  while (true) {
    const auto newline = impl_->buffer.find('\n');
    if (newline != std::string::npos) {
      response = impl_->buffer.substr(0, newline);
      impl_->buffer.erase(0, newline + 1);
      break;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (remaining.count() <= 0) {
      ::kill(impl_->pid, SIGKILL);
      close();
      throw AdapterError("adapter timed out after " + std::to_string(timeout_.count()) + " ms");
    }
    struct pollfd pfd{impl_->from_child, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw AdapterError(std::string("adapter poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;  // loop re-checks the deadline
    char chunk[4096];
    const ssize_t n = ::read(impl_->from_child, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw AdapterError(std::string("adapter read failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      const int status = close();
      throw AdapterError("adapter closed its output before responding (exit status " +
                         std::to_string(status) + ")");
    }
    impl_->buffer.append(chunk, static_cast<std::size_t>(n));
  }

  nlohmann::json parsed = nlohmann::json::parse(response, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("summary") ||
      !parsed["summary"].is_string()) {
    throw AdapterError("adapter sent a malformed response line: " + response);
  }
  if (!parsed.contains("id") || !parsed["id"].is_string() ||
      parsed["id"].get<std::string>() != id) {
    throw AdapterError("adapter response id does not match request id '" + std::string(id) + "'");
  }
  return parsed["summary"].get<std::string>();
}

int AdapterProcess::close() {
  if (!impl_ || impl_->pid <= 0) return -1;
  impl_->close_fd(impl_->to_child);
  impl_->close_fd(impl_->from_child);
  if (!impl_->reaped) {
    int status = 0;
    // Give the child a moment to exit on EOF before escalating.
    for (int waited_ms = 0;; waited_ms += 20) {
      const pid_t done = ::waitpid(impl_->pid, &status, WNOHANG);
      if (done == impl_->pid) {
        impl_->exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        break;
      }
      if (done < 0) {
        impl_->exit_status = -1;
        break;
      }
      if (waited_ms >= 2000) {
        ::kill(impl_->pid, SIGKILL);
        ::waitpid(impl_->pid, &status, 0);
        impl_->exit_status = -1;
        break;
      }
      ::usleep(20 * 1000);
    }
    impl_->reaped = true;
  }
  return impl_->exit_status;
}

std::string run_external(std::string_view source_text, const std::string& command,
                         std::chrono::milliseconds timeout) {
  AdapterProcess process(command, timeout);
  std::string summary = process.exchange("0", source_text);
  process.close();
  return summary;
}

}  // namespace dancer
