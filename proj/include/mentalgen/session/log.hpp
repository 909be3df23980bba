#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mentalgen/session/events.hpp"

namespace mentalgen::session {

/// Append-only JSONL session log. append() returns only after the line is
/// written and fsync'ed.
class SessionLog {
 public:
  explicit SessionLog(std::filesystem::path path);
  SessionLog(const SessionLog&) = delete;
  SessionLog& operator=(const SessionLog&) = delete;
  SessionLog(SessionLog&& other) noexcept;
  SessionLog& operator=(SessionLog&& other) noexcept;
  ~SessionLog();

  const std::filesystem::path& path() const noexcept { return path_; }
  std::uint64_t next_seq() const noexcept { return next_seq_; }

  /// Returns the written JSON line (without the newline).
  std::string append(const Event& e, const std::string& session_id);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t next_seq_ = 1;
};

struct LogContents {
  std::vector<Event> events;
  bool truncated_tail = false;  // last line had no newline and was dropped
};

/// Reads a log. An incomplete final line (a write cut short by a crash) is
/// dropped; any other malformed line raises ParseError with its line number.
LogContents read_log(const std::filesystem::path& path);

}  // namespace mentalgen::session
