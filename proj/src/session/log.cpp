#include "mentalgen/session/log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mentalgen::session {

namespace fs = std::filesystem;

SessionLog::SessionLog(fs::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  if (fs::exists(path_)) {
    const auto existing = read_log(path_);
    next_seq_ = existing.events.size() + 1;
    if (existing.truncated_tail) {
      // Cut the partial line so the next append starts on a fresh line.
      std::ifstream in(path_, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      const std::string text = ss.str();
      fs::resize_file(path_, text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error("cannot open session log " + path_.string() + ": " + std::strerror(errno));
}

SessionLog::SessionLog(SessionLog&& o) noexcept : path_(std::move(o.path_)), fd_(o.fd_), next_seq_(o.next_seq_) {
  o.fd_ = -1;
}

SessionLog& SessionLog::operator=(SessionLog&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(o.path_);
    fd_ = o.fd_;
    next_seq_ = o.next_seq_;
    o.fd_ = -1;
  }
  return *this;
}

SessionLog::~SessionLog() {
  if (fd_ >= 0) ::close(fd_);
}

std::string SessionLog::append(const Event& e, const std::string& session_id) {
  std::string line = to_json(e, session_id, next_seq_).dump();
  const std::string out = line + "\n";
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t n = ::write(fd_, out.data() + done, out.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error("session log write failed: " + std::string(std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) throw Error("session log fsync failed: " + std::string(std::strerror(errno)));
  ++next_seq_;
  return line;
}

LogContents read_log(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("session log " + path.string() + " not found");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  LogContents out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      out.truncated_tail = true;
      break;
    }
    const std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.at("seq").get<std::uint64_t>() != out.events.size() + 1)
        throw ParseError("sequence number out of order", 0);
      out.events.push_back(event_from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), line_no);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace mentalgen::session
