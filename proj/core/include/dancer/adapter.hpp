#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dancer {

struct AdapterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One external summarizer process speaking the line protocol: request
// {"id":..., "source":...}\n on stdin, response {"id":..., "summary":...}\n
// on stdout, one line per message, flushed per line. Requests are strictly
// lock-step: each exchange() sends one line and waits for one line, so a
// single process never sees interleaved requests. Closing stdin ends the
// process.
class AdapterProcess {
 public:
  AdapterProcess(std::string command, std::chrono::milliseconds timeout);
  ~AdapterProcess();

  AdapterProcess(const AdapterProcess&) = delete;
  AdapterProcess& operator=(const AdapterProcess&) = delete;

  // Throws AdapterError on spawn failure, timeout, stream close, a malformed
  // response line, or a response id that does not echo the request id.
  std::string exchange(std::string_view id, std::string_view source);

  // Closes stdin and reaps the process; returns its exit status (or -1 when
  // it had to be killed). Safe to call twice.
  int close();

  bool running() const;
  const std::string& command() const { return command_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string command_;
  std::chrono::milliseconds timeout_;
};

// One-shot convenience wrapper: spawn, exchange a single request, close.
std::string run_external(std::string_view source_text, const std::string& command,
                         std::chrono::milliseconds timeout);

}  // namespace dancer
