#pragma once

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace proc {

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs argv to completion and captures both streams.
Result run(const std::vector<std::string>& argv);

/// A child process with stdout on a pipe; stderr is inherited.
class Child {
 public:
  explicit Child(const std::vector<std::string>& argv);
  ~Child();
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  void signal(int sig);
  /// Exit code, or 128 + signal number.
  int wait();
  pid_t pid() const noexcept { return pid_; }

 private:
  pid_t pid_ = -1;
  int out_fd_ = -1;
  std::string pending_;
  bool reaped_ = false;
  int status_ = 0;
};

}  // namespace proc
