#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace mentalgen::service {

struct CloseInfo {
  std::uint16_t code = 0;
  std::string reason;
};

/// Minimal blocking WebSocket client for the service endpoints.
class WsClient {
 public:
  /// Throws Error when the connection or handshake fails.
  WsClient(const std::string& host, std::uint16_t port, const std::string& target);
  ~WsClient();
  WsClient(const WsClient&) = delete;
  WsClient& operator=(const WsClient&) = delete;

  void send(const std::string& text);
  /// Next text frame, or nullopt when none arrived in time or the server
  /// closed the connection (then closed() holds the close frame).
  std::optional<std::string> receive(std::chrono::milliseconds timeout);
  const std::optional<CloseInfo>& closed() const noexcept { return closed_; }
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::optional<CloseInfo> closed_;
};

}  // namespace mentalgen::service
